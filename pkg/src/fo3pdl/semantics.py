"""Brute-force semantics of FO, PDL state and PDL path formulas.

Everything is evaluated over a *batch* of structures that share one domain
size: state formulas become ``(batch, n)`` boolean arrays and path formulas
``(batch, n, n)``. FO formulas are evaluated to truth tables with one axis
per variable, which lets a formula with k variables be checked against all
n^k assignments of every structure in the batch at once.

``eval_fo`` is the plain recursive Tarskian evaluator on a single structure
and assignment; the table evaluator is cross-checked against it in tests.
"""

from __future__ import annotations

import itertools
import sys

import numpy as np

from . import _kernels
from .structures import FiniteStructure, Relation
from .syntax import fo, pdl
from .syntax.pbc import PAnd, PAtom, POr

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class EvaluationError(ValueError):
    pass


class UnknownName(EvaluationError):
    pass


class UnboundVariable(EvaluationError):
    def __init__(self, var):
        self.var = var
        super().__init__(f"variable {var!r} has no value in the assignment")


class Batch:
    """A stack of structures of the same size."""

    def __init__(self, n, predicates, relations, count):
        self.n = n
        self.count = count
        self.predicates = predicates
        self.relations = relations
        self.le = np.broadcast_to(np.triu(np.ones((n, n), dtype=bool)), (count, n, n))
        self.eye = np.broadcast_to(np.eye(n, dtype=bool), (count, n, n))

    @classmethod
    def of(cls, structures):
        structures = list(structures)
        if not structures:
            raise ValueError("empty batch")
        n = structures[0].size
        if any(s.size != n for s in structures):
            raise ValueError("all structures in a batch must have the same size")
        names_p = set(structures[0].predicate_val)
        names_r = set(structures[0].relation_val)
        preds = {}
        for p in names_p:
            arr = np.zeros((len(structures), n), dtype=bool)
            for i, s in enumerate(structures):
                if p not in s.predicate_val:
                    raise ValueError(f"structure {i} does not interpret {p!r}")
                arr[i, list(s.predicate_val[p])] = True
            preds[p] = arr
        rels = {}
        for r in names_r:
            arr = np.zeros((len(structures), n, n), dtype=bool)
            for i, s in enumerate(structures):
                if r not in s.relation_val:
                    raise ValueError(f"structure {i} does not interpret {r!r}")
                arr[i] = s.relation_val[r].matrix
            rels[r] = arr
        return cls(n, preds, rels, len(structures))

    def pred(self, name):
        try:
            return self.predicates[name]
        except KeyError:
            raise UnknownName(f"predicate {name!r} is not interpreted") from None

    def rel(self, name):
        try:
            return self.relations[name]
        except KeyError:
            raise UnknownName(f"relation {name!r} is not interpreted") from None


# -- PDL -----------------------------------------------------------------

class Evaluator:
    """Memoised PDL evaluation over one batch.

    The memo lives as long as the evaluator, so shared subterms are computed
    once per batch even when they occur in many formulas.
    """

    def __init__(self, batch):
        self.batch = batch
        self.memo = {}

    def state(self, s):
        hit = self.memo.get(s)
        if hit is not None:
            return hit
        b = self.batch
        if isinstance(s, pdl.Prop):
            out = b.pred(s.name)
        elif isinstance(s, pdl.Top):
            out = np.ones((b.count, b.n), dtype=bool)
        elif isinstance(s, pdl.Bot):
            out = np.zeros((b.count, b.n), dtype=bool)
        elif isinstance(s, pdl.Not):
            out = ~self.state(s.body)
        elif isinstance(s, pdl.Or):
            out = self.state(s.left) | self.state(s.right)
        elif isinstance(s, pdl.And):
            out = self.state(s.left) & self.state(s.right)
        elif isinstance(s, pdl.Diamond):
            r = self.path(s.path)
            out = (r & self.state(s.body)[:, None, :]).any(axis=2)
        elif isinstance(s, pdl.Loop):
            out = np.diagonal(self.path(s.path), axis1=1, axis2=2).copy()
        else:
            raise TypeError(f"not a state formula: {s!r}")
        self.memo[s] = out
        return out

    def path(self, p):
        hit = self.memo.get(p)
        if hit is not None:
            return hit
        b = self.batch
        if isinstance(p, pdl.Atom):
            out = b.rel(p.name)
        elif isinstance(p, pdl.LeSym):
            out = b.le
        elif isinstance(p, pdl.Test):
            out = b.eye & self.state(p.state)[:, :, None]
        elif isinstance(p, pdl.Converse):
            out = np.swapaxes(self.path(p.path), 1, 2)
        elif isinstance(p, pdl.Compose):
            out = _kernels.compose(self.path(p.left), self.path(p.right))
        elif isinstance(p, pdl.Union):
            out = self.path(p.left) | self.path(p.right)
        elif isinstance(p, pdl.Inter):
            out = self.path(p.left) & self.path(p.right)
        elif isinstance(p, pdl.Complement):
            out = ~self.path(p.path)
        elif isinstance(p, pdl.C_OPS):
            out = _kernels.c_op(self.path(p.path), pdl.C_INDEX[type(p)])
        else:
            raise TypeError(f"not a path formula: {p!r}")
        self.memo[p] = out
        return out

    # -- tables over variable axes ---------------------------------------
    def fo_table(self, f, variables):
        """Truth table of FO formula ``f``: shape (batch, n, ..., n) over ``variables``."""
        return _Table(self, variables, fo.all_vars(f)).run_fo(f)

    def pbc_table(self, p, variables):
        from .syntax.pbc import pbc_vars

        return _Table(self, variables, pbc_vars(p)).run_pbc(p)


class _Table:
    def __init__(self, ev, variables, occurring):
        self.ev = ev
        self.variables = tuple(variables)
        extra = sorted(set(occurring) - set(self.variables))
        self.axes = {v: i + 1 for i, v in enumerate(self.variables + tuple(extra))}
        self.ndim = 1 + len(self.axes)
        self.memo = {}

    def vec(self, arr, var):
        shape = [1] * self.ndim
        shape[0] = arr.shape[0]
        shape[self.axes[var]] = arr.shape[1]
        return arr.reshape(shape)

    def mat(self, arr, x, y):
        if x == y:
            return self.vec(np.diagonal(arr, axis1=1, axis2=2), x)
        i, j = self.axes[x], self.axes[y]
        if i > j:
            arr = np.swapaxes(arr, 1, 2)
            i, j = j, i
        shape = [1] * self.ndim
        shape[0] = arr.shape[0]
        shape[i] = arr.shape[1]
        shape[j] = arr.shape[2]
        return arr.reshape(shape)

    def finish(self, out):
        b = self.ev.batch
        full = [b.count] + [1] * (self.ndim - 1)
        for v in self.variables:
            full[self.axes[v]] = b.n
        for k in range(1, self.ndim):
            if full[k] == 1 and out.shape[k] != 1:
                var = next(v for v, a in self.axes.items() if a == k)
                raise UnboundVariable(var)
        out = np.broadcast_to(out, full)
        return out.reshape([b.count] + [b.n] * len(self.variables))

    def run_fo(self, f):
        return self.finish(self.fo(f))

    def run_pbc(self, p):
        return self.finish(self.pbc(p))

    def fo(self, f):
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        b = self.ev.batch
        if isinstance(f, fo.Pred):
            out = self.vec(b.pred(f.pred), f.var)
        elif isinstance(f, fo.Le):
            out = self.mat(b.le, f.left, f.right)
        elif isinstance(f, fo.Eq):
            out = self.mat(b.eye, f.left, f.right)
        elif isinstance(f, fo.Rel):
            out = self.mat(b.rel(f.rel), f.left, f.right)
        elif isinstance(f, fo.Not):
            out = ~self.fo(f.body)
        elif isinstance(f, fo.Or):
            out = self.fo(f.left) | self.fo(f.right)
        elif isinstance(f, fo.And):
            out = self.fo(f.left) & self.fo(f.right)
        elif isinstance(f, fo.Implies):
            out = ~self.fo(f.left) | self.fo(f.right)
        elif isinstance(f, fo.Exists):
            out = self.fo(f.body).any(axis=self.axes[f.var], keepdims=True)
        elif isinstance(f, fo.Forall):
            out = self.fo(f.body).all(axis=self.axes[f.var], keepdims=True)
        else:
            raise TypeError(f"not an FO formula: {f!r}")
        self.memo[f] = out
        return out

    def pbc(self, p):
        hit = self.memo.get(p)
        if hit is not None:
            return hit
        if isinstance(p, PAtom):
            out = self.mat(self.ev.path(p.path), p.x, p.y)
        elif isinstance(p, POr):
            out = self.pbc(p.children[0])
            for c in p.children[1:]:
                out = out | self.pbc(c)
        elif isinstance(p, PAnd):
            out = self.pbc(p.children[0])
            for c in p.children[1:]:
                out = out & self.pbc(c)
        else:
            raise TypeError(f"not a PBC: {p!r}")
        self.memo[p] = out
        return out


# -- single-structure API ------------------------------------------------

def eval_state(m: FiniteStructure, s) -> set:
    arr = Evaluator(Batch.of([m])).state(s)[0]
    return set(int(i) for i in np.flatnonzero(arr))


def eval_path(m: FiniteStructure, p) -> Relation:
    return Relation.from_matrix(Evaluator(Batch.of([m])).path(p)[0])


def eval_fo(m: FiniteStructure, f, assignment) -> bool:
    """Tarskian satisfaction, quantifiers iterate over all ``m.size`` points."""
    preds = m.predicate_val
    rels = m.relation_val

    def val(v, nu):
        try:
            return nu[v]
        except KeyError:
            raise UnboundVariable(v) from None

    def go(g, nu):
        if isinstance(g, fo.Pred):
            if g.pred not in preds:
                raise UnknownName(f"predicate {g.pred!r} is not interpreted")
            return val(g.var, nu) in preds[g.pred]
        if isinstance(g, fo.Le):
            return val(g.left, nu) <= val(g.right, nu)
        if isinstance(g, fo.Eq):
            return val(g.left, nu) == val(g.right, nu)
        if isinstance(g, fo.Rel):
            if g.rel not in rels:
                raise UnknownName(f"relation {g.rel!r} is not interpreted")
            return (val(g.left, nu), val(g.right, nu)) in rels[g.rel].pairs
        if isinstance(g, fo.Not):
            return not go(g.body, nu)
        if isinstance(g, fo.Or):
            return go(g.left, nu) or go(g.right, nu)
        if isinstance(g, fo.And):
            return go(g.left, nu) and go(g.right, nu)
        if isinstance(g, fo.Implies):
            return (not go(g.left, nu)) or go(g.right, nu)
        if isinstance(g, fo.Exists):
            return any(go(g.body, {**nu, g.var: a}) for a in range(m.size))
        if isinstance(g, fo.Forall):
            return all(go(g.body, {**nu, g.var: a}) for a in range(m.size))
        raise TypeError(f"not an FO formula: {g!r}")

    return go(f, dict(assignment))


def eval_pbc(m: FiniteStructure, p, assignment) -> bool:
    ev = Evaluator(Batch.of([m]))

    def go(q):
        if isinstance(q, PAtom):
            try:
                a, b = assignment[q.x], assignment[q.y]
            except KeyError as e:
                raise UnboundVariable(e.args[0]) from None
            return bool(ev.path(q.path)[0, a, b])
        if isinstance(q, POr):
            return any(go(c) for c in q.children)
        return all(go(c) for c in q.children)

    return go(p)


def fo_equiv_on(m: FiniteStructure, f, g):
    """``None`` if f and g agree on every assignment of m, else the first
    disagreeing assignment (index order, variables sorted by name)."""
    variables = sorted(fo.free_vars(f) | fo.free_vars(g))
    ev = Evaluator(Batch.of([m]))
    diff = ev.fo_table(f, variables)[0] != ev.fo_table(g, variables)[0]
    hits = np.argwhere(diff)
    if len(hits) == 0:
        return None
    return {v: int(i) for v, i in zip(variables, hits[0])}


def assignments(variables, n):
    for values in itertools.product(range(n), repeat=len(variables)):
        yield dict(zip(variables, values))
