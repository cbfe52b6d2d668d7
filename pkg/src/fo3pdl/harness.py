"""Property-test engines: exhaustive small-model equivalence, fuzzing,
property suites and witness shrinking.

Every engine compares truth tables computed by ``semantics.Evaluator`` on
batches of structures, so one call checks all assignments of many
structures at once.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import transpiler
from .semantics import Batch, Evaluator
from .structures import (
    FiniteStructure,
    Interval,
    ModelError,
    Relation,
    enumerate_ip_relations,
    gen_random_ip,
    non_ip_relation,
)
from .syntax import fo, pdl
from .syntax.names import Signature
from .syntax.parser import to_text
from .syntax.pdl import Dialect

EXHAUSTIVE_MAX_N = 3


@dataclass(frozen=True)
class Witness:
    structure: FiniteStructure
    assignment: dict
    formula: fo.Formula
    other: object = None
    label: str = ""

    def describe(self):
        nu = ", ".join(f"{k}={v}" for k, v in sorted(self.assignment.items())) or "(empty)"
        lines = [f"formula: {to_text(self.formula)}"]
        if self.other is not None:
            lines.append(f"versus ({self.label}): {to_text(self.other)}")
        lines.append(f"assignment: {nu}")
        lines.append(f"structure: {self.structure.dumps()}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Witness | None = None
    stats: dict = field(default_factory=dict)
    case_index: int | None = None

    @property
    def passed(self):
        return self.status == "pass"


# -- structure enumeration ------------------------------------------------

def _pred_stack(n, k):
    """All valuations of k predicates on n points; predicate 0 varies fastest."""
    m = 2 ** (n * k)
    codes = np.arange(m, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(n * k)) & 1).astype(bool)
    # bit p*n + i is predicate p at point i; predicate 0 owns the low bits
    return bits.reshape(m, k, n)


def structure_batches(n, signature, chunk=8192):
    """Yield ``(batch, decode)`` covering every structure of size n over ``signature``.

    Relations range over ``enumerate_ip_relations(n)``; structures are ordered
    with relation tuples outermost and predicate valuations innermost.
    """
    preds = sorted(signature.predicates)
    rels = sorted(signature.relsyms)
    pv = _pred_stack(n, len(preds))
    ip = np.stack([r.matrix for r in enumerate_ip_relations(n)]) if rels else None
    rel_idx = np.array(list(itertools.product(range(len(ip)), repeat=len(rels))), dtype=np.int64) \
        if rels else np.zeros((1, 0), dtype=np.int64)
    total = len(rel_idx) * len(pv)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        r_i, p_i = np.divmod(idx, len(pv))
        pmap = {p: pv[p_i, k] for k, p in enumerate(preds)}
        rmap = {r: ip[rel_idx[r_i, k]] for k, r in enumerate(rels)}
        batch = Batch(n, pmap, rmap, len(idx))

        def decode(j, pmap=pmap, rmap=rmap):
            return FiniteStructure(
                n,
                {p: set(np.flatnonzero(v[j]).tolist()) for p, v in pmap.items()},
                {r: Relation.from_matrix(v[j]) for r, v in rmap.items()},
            )

        yield batch, decode


def _tables(ev, items, variables):
    out = []
    for kind, obj in items:
        if kind == "fo":
            out.append(ev.fo_table(obj, variables))
        else:
            out.append(ev.pbc_table(obj, variables))
    return out


def exhaustive_compare(reference, candidates, max_n, signature=None):
    """Compare FO ``reference`` with ``candidates`` [(label, kind, obj)] on every
    structure of size 1..max_n and every assignment.

    ``kind`` is ``"fo"`` or ``"pbc"``. The first disagreement (smallest size,
    then enumeration order, then assignment order) becomes the witness.
    """
    if max_n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive checks are capped at structure size {EXHAUSTIVE_MAX_N}")
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if signature is None:
        signature = fo.signature_of(reference)
    variables = set(fo.free_vars(reference))
    for _, kind, obj in candidates:
        variables |= set(fo.free_vars(obj) if kind == "fo" else _pbc_free(obj))
    variables = sorted(variables)
    t0 = time.perf_counter()
    structures = assignments = 0
    for n in range(1, max_n + 1):
        for batch, decode in structure_batches(n, signature):
            ev = Evaluator(batch)
            ref = ev.fo_table(reference, variables)
            structures += batch.count
            assignments += batch.count * n ** len(variables)
            for label, kind, obj in candidates:
                (tab,) = _tables(ev, [(kind, obj)], variables)
                diff = ref != tab
                if diff.any():
                    hit = np.argwhere(diff)[0]
                    nu = {v: int(a) for v, a in zip(variables, hit[1:])}
                    w = Witness(decode(int(hit[0])), nu, reference, obj, label)
                    return Verdict("fail", w, _stats(t0, structures, assignments))
    return Verdict("pass", None, _stats(t0, structures, assignments))


def _pbc_free(p):
    from .syntax.pbc import pbc_vars

    return pbc_vars(p)


def _stats(t0, structures, assignments, **extra):
    return {"structures": structures, "assignments": assignments,
            "seconds": round(time.perf_counter() - t0, 3), **extra}


def exhaustive_equiv(f, g, max_n=3, signature=None):
    """Is ``f`` equivalent to ``g`` on every IP structure of size <= max_n?"""
    if signature is None:
        signature = fo.signature_of(f) | fo.signature_of(g)
    return exhaustive_compare(f, [("equiv", "fo", g)], max_n, signature)


def exhaustive_translation(f, max_n=3, signature=None, simplify=True):
    """Check f against both its PBC and its FO3 translation."""
    d = fo.desugar(f)
    pbc = transpiler.fo_to_pbc(d, sentences=True, simplify=simplify)
    fo3 = transpiler.fo_to_fo3(f, simplify=simplify)
    return exhaustive_compare(f, [("pbc", "pbc", pbc), ("fo3", "fo", fo3)], max_n, signature)


# -- random formulas ------------------------------------------------------

DEFAULT_SIGNATURE = Signature(frozenset({"P", "Q"}), frozenset({"a"}))
FUZZ_VARS = ("x", "y", "z")


DEFAULT_WEIGHTS = (0.4, 0.2, 0.2, 0.2)
NEGATION_HEAVY = (0.2, 0.35, 0.2, 0.25)


def random_fo(rng, depth, signature=DEFAULT_SIGNATURE, variables=FUZZ_VARS,
              weights=DEFAULT_WEIGHTS, negated_or=0.0, exists_conj=0.0):
    """Grammar-directed random FO formula.

    ``weights`` are the probabilities of atom, negation, disjunction and
    existential nodes (default 40/20/20/20); at depth 0 only atoms are drawn.
    With probability ``negated_or`` a disjunction node is drawn with both
    sides negated, ``!(!A | !B)``, which still counts as one level.
    With probability ``exists_conj`` an existential gets a conjunctive body
    ``!(!A | !B)``, the shape that goes through existential elimination with
    several atoms. An existential binds a variable free in its body whenever
    there is one.
    """
    cut = np.cumsum(weights) / sum(weights)
    preds = sorted(signature.predicates)
    rels = sorted(signature.relsyms)
    var = lambda: variables[int(rng.integers(len(variables)))]  # noqa: E731

    def atom():
        kinds = ["le", "eq"] + (["pred"] if preds else []) + (["rel"] if rels else [])
        k = kinds[int(rng.integers(len(kinds)))]
        if k == "pred":
            return fo.Pred(preds[int(rng.integers(len(preds)))], var())
        if k == "rel":
            return fo.Rel(rels[int(rng.integers(len(rels)))], var(), var())
        return (fo.Le if k == "le" else fo.Eq)(var(), var())

    def go(d):
        u = rng.random()
        if d == 0 or u < cut[0]:
            return atom()
        if u < cut[1]:
            return fo.Not(go(d - 1))
        if u < cut[2]:
            if negated_or and rng.random() < negated_or:
                return fo.Not(fo.Or(fo.Not(go(d - 1)), fo.Not(go(d - 1))))
            return fo.Or(go(d - 1), go(d - 1))
        if exists_conj and rng.random() < exists_conj:
            body = fo.Not(fo.Or(fo.Not(go(d - 1)), fo.Not(go(d - 1))))
        else:
            body = go(d - 1)
        free = sorted(fo.free_vars(body))
        v = free[int(rng.integers(len(free)))] if free else var()
        return fo.Exists(v, body)

    return go(depth)


def random_fragment_path(depth, seed=None, signature=DEFAULT_SIGNATURE, dialect=Dialect.FRAG_CAP):
    """Random path formula of the given dialect (FRAG_CAP or FRAG_LOOP) and depth bound."""
    rng = np.random.default_rng(seed)
    preds = sorted(signature.predicates)
    rels = sorted(signature.relsyms)
    binary = [pdl.Compose] + ([pdl.Inter] if dialect is Dialect.FRAG_CAP else [])
    unary = [pdl.Converse, *pdl.C_OPS]

    def leaf():
        if rels and rng.random() < 0.6:
            return pdl.Atom(rels[int(rng.integers(len(rels)))])
        return pdl.LE

    def state(d):
        u = rng.random()
        if d <= 0 or u < 0.4:
            return pdl.Prop(preds[int(rng.integers(len(preds)))]) if preds else pdl.TRUE
        if u < 0.55:
            return pdl.Not(state(d - 1))
        if u < 0.7:
            return pdl.And(state(d - 1), state(d - 1))
        if u < 0.85:
            return pdl.Diamond(path(d - 1), state(d - 1))
        return pdl.Loop(path(d - 1))

    def path(d):
        if d <= 0:
            return leaf()
        u = rng.random()
        if u < 0.2:
            return leaf()
        if u < 0.35:
            return pdl.Test(state(d - 1))
        if u < 0.65:
            return unary[int(rng.integers(len(unary)))](path(d - 1))
        return binary[int(rng.integers(len(binary)))](path(d - 1), path(d - 1))

    return path(depth)


_NAMES = {"var": ("x", "y", "z", "u1"), "pred": ("P", "Q", "Goal"), "rel": ("a", "b", "r_2")}


def random_syntax(rng, sort="fo", depth=4):
    """Random tree of ``sort`` ("fo", "state" or "path") using every constructor."""
    pick = lambda seq: seq[int(rng.integers(len(seq)))]  # noqa: E731
    var = lambda: pick(_NAMES["var"])  # noqa: E731

    def f(d):
        k = int(rng.integers(4 if d <= 0 else 12))
        if k == 0:
            return fo.Pred(pick(_NAMES["pred"]), var())
        if k == 1:
            return fo.Rel(pick(_NAMES["rel"]), var(), var())
        if k == 2:
            return fo.Le(var(), var())
        if k == 3:
            return fo.Eq(var(), var())
        if k in (4, 5):
            return fo.Not(f(d - 1))
        if k in (6, 7, 8):
            return pick((fo.Or, fo.And, fo.Implies))(f(d - 1), f(d - 1))
        return pick((fo.Exists, fo.Forall))(var(), f(d - 1))

    def s(d):
        k = int(rng.integers(3 if d <= 0 else 9))
        if k == 0:
            return pdl.Prop(pick(_NAMES["pred"]))
        if k == 1:
            return pdl.TRUE
        if k == 2:
            return pdl.FALSE
        if k == 3:
            return pdl.Not(s(d - 1))
        if k in (4, 5):
            return pick((pdl.Or, pdl.And))(s(d - 1), s(d - 1))
        if k in (6, 7):
            return pdl.Diamond(p(d - 1), s(d - 1))
        return pdl.Loop(p(d - 1))

    def p(d):
        k = int(rng.integers(2 if d <= 0 else 7))
        if k == 0:
            return pdl.Atom(pick(_NAMES["rel"]))
        if k == 1:
            return pdl.LE
        if k == 2:
            return pdl.Test(s(d - 1))
        if k in (3, 4):
            return pick(pdl.UNARY_PATHS)(p(d - 1))
        return pick(pdl.BINARY_PATHS)(p(d - 1), p(d - 1))

    return {"fo": f, "state": s, "path": p}[sort](depth)


# -- fixed enumeration for the exhaustive soundness suite --------------------

PREFIXES = ((), ("E",), ("A",), ("E", "E"), ("E", "A"), ("A", "E"), ("A", "A"))

# matrix shapes over atom slots 0, 1, 2
SHAPES = (
    lambda a: a[0],
    lambda a: fo.Not(a[0]),
    lambda a: fo.And(a[0], a[1]),
    lambda a: fo.Or(a[0], a[1]),
    lambda a: fo.And(a[0], fo.Not(a[1])),
    lambda a: fo.Implies(a[0], a[1]),
    lambda a: fo.And(fo.And(a[0], a[1]), a[2]),
    lambda a: fo.And(fo.Or(a[0], a[1]), a[2]),
    lambda a: fo.Or(fo.And(a[0], fo.Not(a[1])), a[2]),
    lambda a: fo.Implies(fo.And(a[0], a[1]), fo.Not(a[2])),
)


def soundness_formulas(per_cell=4, seed=2024):
    """Deterministic list of prenex formulas over {P, a}: <= 2 quantifiers, <= 3 atoms.

    Every (prefix, shape) cell gets ``per_cell`` distinct formulas whose atoms
    are drawn over the free variable x and the bound variables; each formula
    mentions every bound variable.
    """
    rng = np.random.default_rng(seed)
    out = []
    seen = set()
    for prefix in PREFIXES:
        bound = ["y", "z"][: len(prefix)]
        scope = ["x"] + bound
        for shape in SHAPES:
            made = tries = 0
            while made < per_cell and tries < 500:
                tries += 1
                atoms = [_random_atom(rng, scope) for _ in range(3)]
                f = shape(atoms)
                if not set(bound) <= set(fo.all_vars(f)):
                    continue
                for q, v in reversed(list(zip(prefix, bound))):
                    f = fo.Exists(v, f) if q == "E" else fo.Forall(v, f)
                if f in seen:
                    continue
                seen.add(f)
                out.append(f)
                made += 1
    return out


def _random_atom(rng, scope):
    v = lambda: scope[int(rng.integers(len(scope)))]  # noqa: E731
    k = int(rng.integers(4))
    if k == 0:
        return fo.Pred("P", v())
    if k == 1:
        return fo.Rel("a", v(), v())
    if k == 2:
        return fo.Le(v(), v())
    return fo.Eq(v(), v())


# -- fuzzing ----------------------------------------------------------------

@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 42
    iterations: int = 1000
    max_structure_size: int = 8
    max_formula_depth: int = 3
    signature: Signature = DEFAULT_SIGNATURE
    allow_non_ip: bool = False
    negative_control: bool = False
    check_fo3: bool = True
    weights: tuple = DEFAULT_WEIGHTS
    negated_or: float = 0.0
    exists_conj: float = 0.0
    jobs: int = 1
    stop_on_fail: bool = True

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.max_structure_size < 1:
            raise ValueError("max_structure_size must be at least 1")
        if self.max_formula_depth < 0:
            raise ValueError("max_formula_depth must be non-negative")
        if self.negative_control and self.max_structure_size < 3:
            raise ValueError("the negative control needs structures of size >= 3")


def negative_control_config(seed=42, iterations=1000, **kw) -> FuzzConfig:
    """Sampler tuned to hit the shapes where a non-IP relation breaks the
    translation: one relation symbol, negation-heavy formulas and
    conjunctive existential bodies."""
    base = dict(
        seed=seed, iterations=iterations, max_structure_size=8, max_formula_depth=3,
        signature=Signature(frozenset(), frozenset({"a"})), negative_control=True,
        check_fo3=False, weights=NEGATION_HEAVY, negated_or=0.5, exists_conj=1.0,
    )
    base.update(kw)
    return FuzzConfig(**base)


@dataclass(frozen=True)
class FuzzCase:
    index: int
    formula: fo.Formula
    structure: FiniteStructure
    assignments: tuple


def fuzz_case(cfg: FuzzConfig, index: int) -> FuzzCase:
    """Case ``index`` of a run; depends only on (seed, index)."""
    rng = np.random.default_rng([cfg.seed, index])
    f = random_fo(rng, cfg.max_formula_depth, cfg.signature,
                  weights=cfg.weights, negated_or=cfg.negated_or,
                  exists_conj=cfg.exists_conj)
    lo = 3 if cfg.negative_control else 1
    n = int(rng.integers(lo, cfg.max_structure_size + 1))
    preds = {p: {a for a in range(n) if rng.random() < 0.5} for p in sorted(cfg.signature.predicates)}
    rels = {}
    for r in sorted(cfg.signature.relsyms):
        rels[r] = non_ip_relation(n) if cfg.negative_control else gen_random_ip(n, rng)
    m = FiniteStructure(n, preds, rels, allow_non_ip=cfg.allow_non_ip or cfg.negative_control)
    variables = sorted(fo.free_vars(f))
    k = len(variables)
    if n ** k <= 256:
        nus = tuple(dict(zip(variables, vals)) for vals in itertools.product(range(n), repeat=k))
    else:
        nus = tuple({v: int(rng.integers(n)) for v in variables} for _ in range(16))
    return FuzzCase(index, f, m, nus)


class _Translations:
    def __init__(self, check_fo3):
        self.check_fo3 = check_fo3
        self.cache = {}

    def get(self, f):
        hit = self.cache.get(f)
        if hit is None:
            pbc = transpiler.fo_to_pbc(fo.desugar(f), sentences=True)
            fo3 = transpiler.fo_to_fo3(f) if self.check_fo3 else None
            hit = (pbc, fo3)
            self.cache[f] = hit
        return hit


def check_case(case: FuzzCase, translations: _Translations):
    """First disagreeing witness of a case, or None."""
    pbc, fo3 = translations.get(case.formula)
    ev = Evaluator(Batch.of([case.structure]))
    variables = sorted(fo.free_vars(case.formula) | _pbc_free(pbc))
    ref = ev.fo_table(case.formula, variables)[0]
    others = [("pbc", pbc, ev.pbc_table(pbc, variables)[0])]
    if fo3 is not None:
        others.append(("fo3", fo3, ev.fo_table(fo3, variables)[0]))
    for nu in case.assignments:
        full = {v: nu.get(v, 0) for v in variables}
        idx = tuple(full[v] for v in variables)
        for label, obj, tab in others:
            if ref[idx] != tab[idx]:
                return Witness(case.structure, dict(nu), case.formula, obj, label)
    return None


def _run_range(cfg, indices):
    tr = _Translations(cfg.check_fo3)
    fails, skipped = [], []
    n_assign = 0
    for i in indices:
        case = fuzz_case(cfg, i)
        try:
            w = check_case(case, tr)
        except transpiler.TranslationError:
            # blow-up guard tripped; reported, never counted as agreement
            skipped.append(i)
            continue
        n_assign += len(case.assignments)
        if w is not None:
            fails.append((i, w))
            if cfg.stop_on_fail:
                break
    return fails, len(indices), n_assign, skipped


def fuzz_equiv(cfg: FuzzConfig) -> Verdict:
    """Compare random formulas with their PBC and FO3 translations on random structures."""
    t0 = time.perf_counter()
    indices = list(range(cfg.iterations))
    if cfg.jobs > 1:
        parts = [indices[j::cfg.jobs] for j in range(cfg.jobs)]
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_run_range, [cfg] * cfg.jobs, parts))
    else:
        results = [_run_range(cfg, indices)]
    fails = sorted((f for r in results for f in r[0]), key=lambda t: t[0])
    cases = sum(r[1] for r in results)
    n_assign = sum(r[2] for r in results)
    skipped = sorted(i for r in results for i in r[3])
    stats = _stats(t0, cases, n_assign, cases=cfg.iterations, failures=len(fails),
                   skipped=len(skipped), seed=cfg.seed,
                   failing_cases=[i for i, _ in fails], skipped_cases=skipped)
    if fails:
        i, w = fails[0]
        return Verdict("fail", w, stats, case_index=i)
    return Verdict("pass", None, stats)


def replay(cfg: FuzzConfig, index: int):
    """Re-run one fuzz case; returns ``(case, witness or None)``."""
    case = fuzz_case(cfg, index)
    return case, check_case(case, _Translations(cfg.check_fo3))


# -- interval suites -------------------------------------------------------------

def helly_check(intervals, n):
    """(every pair intersects, all intersect) for a family of intervals in 0..n-1."""
    for iv in intervals:
        if not iv.empty and (iv.lo < 0 or iv.hi >= n):
            raise ValueError(f"{iv} lies outside 0..{n - 1}")
    pairwise = all(not (a & b).empty for a, b in itertools.combinations(intervals, 2))
    if len(intervals) == 1:
        pairwise = not intervals[0].empty
    total = Interval(0, n - 1)
    for iv in intervals:
        total = total & iv
    if not intervals:
        pairwise = total_ne = n > 0
        return pairwise, total_ne
    return pairwise, not total.empty


def helly_exhaustive(max_family=4, max_n=5):
    """Count of families where pairwise and total intersection disagree."""
    mismatches = checked = 0
    for n in range(1, max_n + 1):
        ivs = [Interval(lo, hi) for lo in range(n) for hi in range(lo, n)]
        for k in range(1, max_family + 1):
            for fam in itertools.combinations_with_replacement(ivs, k):
                pw, tot = helly_check(list(fam), n)
                checked += 1
                mismatches += pw != tot
    return mismatches, checked


# -- shrinking ------------------------------------------------------------------

def translation_fails(w: Witness) -> bool:
    """Does the formula disagree with one of its translations at the witness?"""
    try:
        case = FuzzCase(-1, w.formula, w.structure, (w.assignment,))
        return check_case(case, _Translations(True)) is not None
    except Exception:
        return False


def _drop_point(m: FiniteStructure, k):
    n = m.size - 1
    remap = lambda a: a - (a > k)  # noqa: E731
    preds = {p: {remap(a) for a in s if a != k} for p, s in m.predicate_val.items()}
    rels = {r: Relation(((remap(a), remap(b)) for a, b in rel.pairs if k not in (a, b)), n)
            for r, rel in m.relation_val.items()}
    return FiniteStructure(n, preds, rels, allow_non_ip=m.allow_non_ip)


def _formula_shrinks(f):
    if isinstance(f, fo.ATOMS):
        return []
    if isinstance(f, (fo.Not, fo.Exists, fo.Forall)):
        inner = [f.body] + [type(f)(*([f.var] if hasattr(f, "var") else []), g)
                            for g in _formula_shrinks(f.body)]
        return inner
    out = [f.left, f.right]
    out += [type(f)(g, f.right) for g in _formula_shrinks(f.left)]
    out += [type(f)(f.left, g) for g in _formula_shrinks(f.right)]
    return out


def shrink(w: Witness, fails=translation_fails, max_steps=10_000) -> Witness:
    """Greedy minimisation of a failing witness; the result still fails."""
    if not fails(w):
        raise ValueError("witness does not reproduce a failure")
    steps = 0
    progress = True
    while progress and steps < max_steps:
        progress = False
        for cand in _shrink_candidates(w):
            steps += 1
            if fails(cand):
                w = cand
                progress = True
                break
    return w


def _shrink_candidates(w):
    m = w.structure
    used = set(w.assignment.values())
    for k in range(m.size - 1, -1, -1):
        if m.size > 1 and k not in used:
            nu = {v: a - (a > k) for v, a in w.assignment.items()}
            try:
                cand = _drop_point(m, k)
            except ModelError:
                continue
            yield replace(w, structure=cand, assignment=nu)
    for r, rel in sorted(m.relation_val.items()):
        for pair in sorted(rel.pairs):
            rels = dict(m.relation_val)
            rels[r] = Relation(rel.pairs - {pair}, m.size)
            try:
                cand = FiniteStructure(m.size, dict(m.predicate_val), rels,
                                       allow_non_ip=m.allow_non_ip)
            except ModelError:
                continue
            yield replace(w, structure=cand)
    for p, s in sorted(m.predicate_val.items()):
        for a in sorted(s):
            preds = dict(m.predicate_val)
            preds[p] = set(s) - {a}
            yield replace(w, structure=FiniteStructure(
                m.size, preds, dict(m.relation_val), allow_non_ip=m.allow_non_ip))
    for g in _formula_shrinks(w.formula):
        if fo.free_vars(g) <= set(w.assignment):
            nu = {v: w.assignment[v] for v in fo.free_vars(g)}
            yield replace(w, formula=g, assignment=nu, other=None)


# -- reporting --------------------------------------------------------------------

def report_text(name, verdict: Verdict) -> str:
    s = verdict.stats
    line = f"{name}: {verdict.status.upper()}"
    detail = ", ".join(f"{k}={v}" for k, v in s.items() if not isinstance(v, list))
    out = [f"{line} ({detail})"]
    if verdict.witness is not None:
        if verdict.case_index is not None:
            out.append(f"first failing case: {verdict.case_index}")
        out.append(verdict.witness.describe())
    return "\n".join(out)


def summary_json(name, verdict: Verdict, cfg: FuzzConfig | None = None) -> str:
    data = {"name": name, "status": verdict.status, **verdict.stats}
    if cfg is not None:
        data["config"] = {
            "seed": cfg.seed, "iterations": cfg.iterations,
            "max_structure_size": cfg.max_structure_size,
            "max_formula_depth": cfg.max_formula_depth,
            "allow_non_ip": cfg.allow_non_ip, "negative_control": cfg.negative_control,
        }
        data["replay"] = [
            f"fo3pdl fuzz --seed {cfg.seed} --max-size {cfg.max_structure_size} "
            f"--depth {cfg.max_formula_depth} --replay {i}"
            + (" --negative-control" if cfg.negative_control else "")
            for i in verdict.stats.get("failing_cases", [])
        ]
    if verdict.witness is not None:
        w = verdict.witness
        data["witness"] = {
            "formula": to_text(w.formula),
            "assignment": w.assignment,
            "structure": w.structure.to_dict(),
            "translation": w.label,
        }
    return json.dumps(data, indent=2, sort_keys=True)
