"""FO over linear orders with interval-preserving relations -> star-free PDL -> FO3.

Pipeline: prenex form, atoms become path atoms ``PAtom(pi, x, y)``, matrix
negations are pushed to the leaves and removed with the eight-way complement
fragment, and quantifiers are eliminated innermost-out. The result is a
positive boolean combination (PBC) of FRAG_LOOP path atoms, which is then
packaged as a state formula, a path formula, or emitted as three-variable FO.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .syntax import fo, pdl
from .syntax.names import fresh_names
from .syntax.pbc import PAnd, PAtom, POr, dnf_size, pand, pbc_to_dnf, pbc_vars, por
from .syntax.pdl import GE, ID, LE, Dialect, dialect_check

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


# DNF sizes above this switch to the compact two-variable form (simplify mode)
DNF_BUDGET = 4096
# hard ceiling for a literal DNF; beyond it translation is refused
DNF_CEILING = 200_000


class TranslationError(ValueError):
    pass


class DialectError(TranslationError):
    pass


class ArityError(TranslationError):
    pass


# -- constructors with optional local simplification ----------------------

@dataclass(frozen=True)
class Builder:
    simplify: bool = True

    def compose(self, a, b):
        if self.simplify:
            if a == ID:
                return b
            if b == ID:
                return a
        return pdl.Compose(a, b)

    def chain(self, *parts):
        out = parts[0]
        for p in parts[1:]:
            out = self.compose(out, p)
        return out

    def converse(self, p):
        if self.simplify and isinstance(p, pdl.Converse):
            return p.path
        return pdl.Converse(p)

    def inter(self, a, b):
        if self.simplify and a == b:
            return a
        return pdl.Inter(a, b)

    def union(self, a, b):
        return pdl.Union(a, b)

    def and_(self, a, b):
        if self.simplify:
            if isinstance(a, pdl.Top):
                return b
            if isinstance(b, pdl.Top):
                return a
        return pdl.And(a, b)

    def guard_loop(self, p):
        """loop(p) as a guard conjunct; loop(test(s)) collapses to s."""
        if self.simplify and isinstance(p, pdl.Test):
            return p.state
        return pdl.Loop(p)


# -- derived operators ---------------------------------------------------

def left_c(p):
    """b lies strictly left of the nonempty image of a."""
    return pdl.Compose(pdl.Test(pdl.Diamond(p, pdl.TRUE)),
                       pdl.Complement(pdl.Compose(p, LE)))


def right_c(p):
    return pdl.Compose(pdl.Test(pdl.Diamond(p, pdl.TRUE)),
                       pdl.Complement(pdl.Compose(p, GE)))


_C_DEF = {
    pdl.C1: (left_c, left_c),
    pdl.C2: (left_c, right_c),
    pdl.C3: (right_c, left_c),
    pdl.C4: (right_c, right_c),
}


def c_definition(c):
    """One-step unfolding of c1..c4 applied to its (already expanded) argument."""
    fwd, back = _C_DEF[type(c)]
    return pdl.Inter(fwd(c.path), pdl.Converse(back(pdl.Converse(c.path))))


def expand_c(t):
    """Replace every c1..c4 node (in a state or path formula) by its definition."""
    memo = {}

    def go(f):
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, (pdl.Prop, pdl.Top, pdl.Bot, pdl.Atom, pdl.LeSym)):
            out = f
        elif isinstance(f, pdl.C_OPS):
            out = c_definition(type(f)(go(f.path)))
        elif isinstance(f, (pdl.Not,)):
            out = pdl.Not(go(f.body))
        elif isinstance(f, pdl.Diamond):
            out = pdl.Diamond(go(f.path), go(f.body))
        elif isinstance(f, pdl.Loop):
            out = pdl.Loop(go(f.path))
        elif isinstance(f, pdl.Test):
            out = pdl.Test(go(f.state))
        elif isinstance(f, (pdl.Converse, pdl.Complement)):
            out = type(f)(go(f.path))
        else:
            out = type(f)(go(f.left), go(f.right))
        memo[f] = out
        return out

    return go(t)


# -- complement elimination ----------------------------------------------

def _require_loop_dialect(p, cache=None):
    if cache is not None and p in cache:
        return
    if not dialect_check(p, Dialect.FRAG_LOOP):
        raise DialectError(f"path formula outside FRAG_LOOP: {p}")
    if cache is not None:
        cache.add(p)


def complement_fragment(p, _cache=None):
    """Eight FRAG_LOOP disjuncts whose union is the complement of ``p`` on IP structures."""
    _require_loop_dialect(p, _cache)
    return _fragment(p)


def _fragment(p):
    empty_fwd = pdl.Test(pdl.Not(pdl.Diamond(p, pdl.TRUE)))
    empty_bwd = pdl.Test(pdl.Not(pdl.Diamond(pdl.Converse(p), pdl.TRUE)))
    return [
        pdl.Compose(empty_fwd, LE),
        pdl.Compose(empty_fwd, GE),
        pdl.Compose(LE, empty_bwd),
        pdl.Compose(GE, empty_bwd),
        pdl.C1(p),
        pdl.C2(p),
        pdl.C3(p),
        pdl.C4(p),
    ]


def negate_pbc(p, _cache=None):
    """De Morgan dual of ``p`` with every leaf replaced by its complement fragment."""
    memo = {}

    def go(q):
        hit = memo.get(q)
        if hit is not None:
            return hit
        if isinstance(q, PAtom):
            out = por([PAtom(d, q.x, q.y) for d in complement_fragment(q.path, _cache)])
        elif isinstance(q, POr):
            out = pand([go(c) for c in q.children])
        else:
            out = por([go(c) for c in q.children])
        memo[q] = out
        return out

    return go(p)


# -- existential elimination ----------------------------------------------

@dataclass(frozen=True)
class ExistsInstance:
    """exists target. (guard(target) & AND_i path_i(var_i, target))"""

    target: str
    atoms: tuple
    guard: pdl.State = pdl.TRUE

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(tuple(a) for a in self.atoms))
        for _, y in self.atoms:
            if y == self.target:
                raise ValueError("atom variables must differ from the quantified variable")


def eliminate_exists(inst: ExistsInstance, simplify=True, prune_symmetric=False):
    if not inst.atoms:
        raise TranslationError("no atoms: use exists_empty_case")
    b = Builder(simplify)
    psi = inst.guard
    for p, _ in inst.atoms:
        psi = b.and_(psi, pdl.Diamond(b.converse(p), pdl.TRUE))
    test = pdl.Test(psi)
    out = []
    for i, (pi, yi) in enumerate(inst.atoms):
        for j, (pj, yj) in enumerate(inst.atoms):
            if prune_symmetric and j < i:
                continue
            out.append(PAtom(b.chain(pi, test, b.converse(pj)), yi, yj))
    return pand(out, flatten=simplify)


def exists_empty_case(phi, anchor):
    """exists x. phi(x), expressed at the (irrelevant) anchor variable."""
    t = pdl.Test(phi)
    return POr((
        PAtom(pdl.Compose(pdl.Compose(LE, t), GE), anchor, anchor),
        PAtom(pdl.Compose(pdl.Compose(GE, t), LE), anchor, anchor),
    ))


# -- FO -> PBC -------------------------------------------------------------

def _diag_state(p):
    """State formula true at v iff p(v, v)."""
    if isinstance(p, pdl.Test):
        return p.state
    return pdl.Loop(p)


def _not(s):
    if isinstance(s, pdl.Not):
        return s.body
    return pdl.Not(s)


def _atom_pbc(f):
    if isinstance(f, fo.Pred):
        return PAtom(pdl.Test(pdl.Prop(f.pred)), f.var, f.var)
    if isinstance(f, fo.Eq):
        return PAtom(ID, f.left, f.right)
    if isinstance(f, fo.Le):
        return PAtom(LE, f.left, f.right)
    return PAtom(pdl.Atom(f.rel), f.left, f.right)


def ip_skeleton(p) -> bool:
    """True iff the path constructors outside tests are all in FRAG_LOOP.

    Tests denote partial identities, which are interval-preserving whatever
    their state, so this is what the complement fragment and existential
    elimination actually rely on.
    """
    stack = [p]
    seen = set()
    while stack:
        q = stack.pop()
        if q in seen:
            continue
        seen.add(q)
        if isinstance(q, (pdl.Union, pdl.Inter, pdl.Complement)):
            return False
        if isinstance(q, pdl.Compose):
            stack += [q.left, q.right]
        elif isinstance(q, (pdl.Converse,) + pdl.C_OPS):
            stack.append(q.path)
    return True


class _Translator:
    def __init__(self, simplify, prune_symmetric, anchor, dnf_budget=DNF_BUDGET):
        self.dnf_budget = dnf_budget
        self.b = Builder(simplify)
        self.simplify = simplify
        self.prune = prune_symmetric
        self.anchor = anchor
        self.checked = set()
        self.neg_memo = {}

    def negate(self, p):
        hit = self.neg_memo.get(p)
        if hit is None:
            if self.simplify:
                hit = self.merge(self._negate_simplified(p))
            else:
                hit = negate_pbc(p, self.checked)
            self.neg_memo[p] = hit
        return hit

    def _negate_simplified(self, p):
        # a diagonal atom pi(v,v) is the state loop(pi) at v, so its
        # negation is a single test instead of the eight-way fragment
        memo = {}

        def go(q):
            hit = memo.get(q)
            if hit is not None:
                return hit
            if isinstance(q, PAtom):
                if q.x == q.y:
                    out = PAtom(pdl.Test(_not(_diag_state(q.path))), q.x, q.x)
                else:
                    if not ip_skeleton(q.path):
                        raise DialectError(f"path formula is not interval-preserving: {q.path}")
                    out = por([PAtom(d, q.x, q.y) for d in _fragment(q.path)])
            elif isinstance(q, POr):
                out = pand([go(c) for c in q.children])
            else:
                out = por([go(c) for c in q.children])
            memo[q] = out
            return out

        return go(p)

    def merge(self, p):
        """Fuse sibling diagonal atoms on the same variable into one test atom."""
        if not self.simplify:
            return p
        memo = {}

        def go(q):
            if isinstance(q, PAtom):
                return q
            hit = memo.get(q)
            if hit is not None:
                return hit
            kids = [go(c) for c in q.children]
            is_or = isinstance(q, POr)
            diag = {}
            for c in kids:
                if isinstance(c, PAtom) and c.x == c.y:
                    diag.setdefault(c.x, []).append(c)
            out = []
            done = set()
            for c in kids:
                if isinstance(c, PAtom) and c.x == c.y and len(diag[c.x]) > 1:
                    if c.x in done:
                        continue
                    done.add(c.x)
                    states = [_diag_state(a.path) for a in diag[c.x]]
                    state = _fold(states, pdl.Or if is_or else pdl.And)
                    out.append(PAtom(pdl.Test(state), c.x, c.x))
                else:
                    out.append(c)
            res = por(out) if is_or else pand(out)
            if isinstance(res, (POr, PAnd)) and res != q and len(res.children) < len(q.children):
                res = go(res)
            memo[q] = res
            return res

        return go(p)

    def matrix(self, f, positive):
        memo = {}

        def go(g, pos):
            key = (g, pos)
            if key in memo:
                return memo[key]
            if isinstance(g, fo.ATOMS):
                out = _atom_pbc(g)
                if not pos:
                    out = self.negate(out)
            elif isinstance(g, fo.Not):
                out = go(g.body, not pos)
            elif isinstance(g, fo.Or):
                parts = [go(g.left, pos), go(g.right, pos)]
                out = por(parts, self.simplify) if pos else pand(parts, self.simplify)
            else:
                raise TranslationError(f"unexpected node in matrix: {g!r}")
            memo[key] = out
            return out

        return go(f, positive)

    def exists(self, x, p):
        if x not in pbc_vars(p):
            return p
        if isinstance(p, POr):
            return por([self.exists(x, c) for c in p.children], self.simplify)
        if isinstance(p, PAtom):
            return self.conjunct(x, [p])
        dep = [c for c in p.children if x in pbc_vars(c)]
        indep = [c for c in p.children if x not in pbc_vars(c)]
        if len(dep) == 1:
            inner = self.exists(x, dep[0])
        else:
            body = pand(dep)
            size = dnf_size(body)
            others = pbc_vars(body) - {x}
            if self.simplify and size > self.dnf_budget and len(others) <= 1:
                inner = self.compact(x, body, min(others) if others else None)
            elif size > DNF_CEILING:
                raise TranslationError(
                    f"eliminating {x} needs a DNF of {size} conjuncts (ceiling {DNF_CEILING})")
            else:
                inner = por([self.conjunct(x, c) for c in pbc_to_dnf(body)], self.simplify)
        return pand(indep + [inner], self.simplify)

    def compact(self, x, body, u):
        """exists x. body, for a body whose atoms mention only x and u.

        The body is read as one path formula from u to x (or as a state of x
        when u is None), so no DNF is needed. Union and intersection then
        occur inside a test, where interval preservation is not at stake.
        """
        memo = {}
        anywhere = pdl.Union(LE, GE)

        def state(q):
            if isinstance(q, PAtom):
                return _diag_state(q.path)
            parts = [state(c) for c in q.children]
            return _fold(parts, pdl.Or if isinstance(q, POr) else pdl.And)

        if u is None:
            return exists_empty_case(state(body), self.anchor)

        def path(q):
            if q in memo:
                return memo[q]
            if isinstance(q, PAtom):
                if q.x == u and q.y == x:
                    out = q.path
                elif q.x == x and q.y == u:
                    out = self.b.converse(q.path)
                elif q.x == x:
                    out = pdl.Compose(anywhere, pdl.Test(_diag_state(q.path)))
                else:
                    out = pdl.Compose(pdl.Test(_diag_state(q.path)), anywhere)
            else:
                parts = [path(c) for c in q.children]
                out = _fold(parts, pdl.Union if isinstance(q, POr) else pdl.Inter)
            memo[q] = out
            return out

        return PAtom(pdl.Test(pdl.Diamond(path(body), pdl.TRUE)), u, u)

    def conjunct(self, x, atoms):
        b = self.b
        keep, oriented, loops = [], [], []
        for a in atoms:
            if a.x == x and a.y == x:
                loops.append(a.path)
            elif a.y == x:
                oriented.append((a.path, a.x))
            elif a.x == x:
                oriented.append((b.converse(a.path), a.y))
            else:
                keep.append(a)
        guard = pdl.TRUE
        for i, p in enumerate(loops):
            g = b.guard_loop(p)
            guard = g if i == 0 else pdl.And(guard, g)
        if oriented:
            body = eliminate_exists(ExistsInstance(x, tuple(oriented), guard),
                                    self.simplify, self.prune)
        else:
            body = exists_empty_case(guard, self.anchor)
        return pand(keep + [body], self.simplify)


def _sentence_var(f):
    return fresh_names(fo.all_vars(f), 1)[0]


def _with_sentence_var(f):
    v = _sentence_var(f)
    return fo.Not(fo.Or(fo.Not(f), fo.Not(fo.Eq(v, v)))), v


def fo_to_pbc(f, sentences=False, simplify=True, prune_symmetric=False):
    """Translate a desugared FO formula into a PBC of FRAG_LOOP path atoms.

    A sentence is only accepted with ``sentences=True``; it is translated as
    ``f & v = v`` for a fresh free variable v.
    """
    if not fo.is_desugared(f):
        raise TranslationError("fo_to_pbc expects a desugared formula (see fo.desugar)")
    free = fo.free_vars(f)
    if not free:
        if not sentences:
            raise TranslationError("sentence given; enable sentence handling")
        f, v = _with_sentence_var(f)
        free = frozenset((v,))
    prefix, matrix = fo.prenex_parts(f)
    tr = _Translator(simplify, prune_symmetric, anchor=min(free))
    negated = bool(prefix) and prefix[-1][0] == "A"
    p = tr.merge(tr.matrix(matrix, positive=not negated))
    for q, x in reversed(prefix):
        if q == "E":
            if negated:
                p = tr.negate(p)
                negated = False
            p = tr.merge(tr.exists(x, p))
        else:
            if not negated:
                p = tr.negate(p)
            # p now stands for the negated body
            p = tr.merge(tr.exists(x, p))
            negated = True
    if negated:
        p = tr.negate(p)
    return p


# -- packaging -------------------------------------------------------------

def _fold(items, op):
    out = items[0]
    for it in items[1:]:
        out = op(out, it)
    return out


def fo_to_state(f, simplify=True, prune_symmetric=False):
    """Formula with exactly one free variable -> PDL state formula."""
    f = fo.desugar(f)
    free = fo.free_vars(f)
    if len(free) != 1:
        raise ArityError(f"expected exactly 1 free variable, got {len(free)}")
    p = fo_to_pbc(f, simplify=simplify, prune_symmetric=prune_symmetric)

    def go(q):
        if isinstance(q, PAtom):
            return pdl.Loop(q.path)
        parts = [go(c) for c in q.children]
        return _fold(parts, pdl.Or if isinstance(q, POr) else pdl.And)

    return go(p)


def fo_to_path(f, order=None, simplify=True, prune_symmetric=False):
    """Formula with exactly two free variables -> PDL path formula from x to y.

    ``order`` fixes which variable is the source; by default the
    alphabetically smaller one.
    """
    f = fo.desugar(f)
    free = fo.free_vars(f)
    if len(free) != 2:
        raise ArityError(f"expected exactly 2 free variables, got {len(free)}")
    x, y = order if order is not None else sorted(free)
    if {x, y} != set(free):
        raise ArityError(f"order {order!r} does not match free variables {sorted(free)}")
    p = fo_to_pbc(f, simplify=simplify, prune_symmetric=prune_symmetric)
    b = Builder(simplify)
    memo = {}

    def atom(a):
        if (a.x, a.y) == (x, y):
            return a.path
        if (a.x, a.y) == (y, x):
            return b.converse(a.path)
        t = pdl.Test(pdl.Loop(a.path))
        if a.x == x:
            return pdl.Union(pdl.Compose(t, LE), pdl.Compose(t, GE))
        return pdl.Union(pdl.Compose(LE, t), pdl.Compose(GE, t))

    def go(q):
        if q in memo:
            return memo[q]
        if isinstance(q, PAtom):
            out = atom(q)
        else:
            parts = [go(c) for c in q.children]
            out = _fold(parts, pdl.Union if isinstance(q, POr) else b.inter)
        memo[q] = out
        return out

    return go(p)


# -- PDL -> FO3 ------------------------------------------------------------

class _FO3:
    def __init__(self):
        self.memo = {}

    def state(self, s, x, y, z):
        key = (s, x, y, z)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if isinstance(s, pdl.Prop):
            out = fo.Pred(s.name, x)
        elif isinstance(s, pdl.Top):
            out = fo.Eq(x, x)
        elif isinstance(s, pdl.Bot):
            out = fo.Not(fo.Eq(x, x))
        elif isinstance(s, pdl.Not):
            out = fo.Not(self.state(s.body, x, y, z))
        elif isinstance(s, pdl.Or):
            out = fo.Or(self.state(s.left, x, y, z), self.state(s.right, x, y, z))
        elif isinstance(s, pdl.And):
            out = fo.And(self.state(s.left, x, y, z), self.state(s.right, x, y, z))
        elif isinstance(s, pdl.Diamond):
            out = fo.Exists(y, fo.And(self.path(s.path, x, y, z), self.state(s.body, y, z, x)))
        elif isinstance(s, pdl.Loop):
            out = fo.Exists(y, fo.And(fo.Eq(x, y), self.path(s.path, x, y, z)))
        else:
            raise TypeError(f"not a state formula: {s!r}")
        self.memo[key] = out
        return out

    def path(self, p, x, y, z):
        key = (p, x, y, z)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if isinstance(p, pdl.Atom):
            out = fo.Rel(p.name, x, y)
        elif isinstance(p, pdl.LeSym):
            out = fo.Le(x, y)
        elif isinstance(p, pdl.Test):
            out = fo.And(fo.Eq(x, y), self.state(p.state, x, y, z))
        elif isinstance(p, pdl.Converse):
            out = self.path(p.path, y, x, z)
        elif isinstance(p, pdl.Compose):
            out = fo.Exists(z, fo.And(self.path(p.left, x, z, y), self.path(p.right, z, y, x)))
        elif isinstance(p, pdl.Union):
            out = fo.Or(self.path(p.left, x, y, z), self.path(p.right, x, y, z))
        elif isinstance(p, pdl.Inter):
            out = fo.And(self.path(p.left, x, y, z), self.path(p.right, x, y, z))
        elif isinstance(p, pdl.Complement):
            out = fo.Not(self.path(p.path, x, y, z))
        elif isinstance(p, pdl.C_OPS):
            out = self.path(expand_c(p), x, y, z)
        else:
            raise TypeError(f"not a path formula: {p!r}")
        self.memo[key] = out
        return out


def _distinct(*names):
    if len(set(names)) != len(names):
        raise ValueError(f"variables must be pairwise distinct: {names}")


def pdl_state_to_fo3(s, pool=("x", "y", "z")):
    """FO formula in the variables of ``pool``, free in ``pool[0]``."""
    _distinct(*pool)
    return _FO3().state(s, *pool)


def pdl_path_to_fo3(p, x="x", y="y", spare="z"):
    _distinct(x, y, spare)
    return _FO3().path(p, x, y, spare)


def fo3_emit(f, simplify=True, prune_symmetric=False):
    """Translate any FO formula into FO3; returns ``(formula, emitted atoms)``.

    Each path atom on (xi, xj) is emitted with a third variable taken from
    the other free variables when possible, else a fresh one. Sentences are
    translated with a fresh free variable that is then existentially closed.
    """
    f = fo.desugar(f)
    free = fo.free_vars(f)
    closing = None
    if not free:
        f, closing = _with_sentence_var(f)
        free = frozenset((closing,))
    p = fo_to_pbc(f, simplify=simplify, prune_symmetric=prune_symmetric)
    spares = sorted(free) + fresh_names(fo.all_vars(f), 2)
    em = _FO3()
    emitted = []
    memo = {}

    def pick(*taken):
        return [v for v in spares if v not in taken]

    def atom(a):
        if a.x == a.y:
            s1, s2 = pick(a.x)[:2]
            path = a.path
            if simplify and isinstance(path, pdl.Test):
                out = em.state(path.state, a.x, s1, s2)
            else:
                out = em.state(pdl.Loop(path), a.x, s1, s2)
        else:
            out = em.path(a.path, a.x, a.y, pick(a.x, a.y)[0])
        emitted.append(out)
        return out

    def go(q):
        if q in memo:
            return memo[q]
        if isinstance(q, PAtom):
            out = atom(q)
        else:
            out = _fold([go(c) for c in q.children], fo.Or if isinstance(q, POr) else fo.And)
        memo[q] = out
        return out

    out = go(p)
    if closing is not None:
        out = fo.Exists(closing, out)
    return out, emitted


def fo_to_fo3(f, simplify=True, prune_symmetric=False):
    return fo3_emit(f, simplify, prune_symmetric)[0]


def fo3_atoms(f, simplify=True):
    return fo3_emit(f, simplify)[1]
