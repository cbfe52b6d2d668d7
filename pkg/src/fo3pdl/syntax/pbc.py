"""Positive boolean combinations of path atoms applied to variable pairs.

There is deliberately no negation constructor: a PBC is positive by
construction, so negations must be eliminated before a PBC is assembled.
"""

from __future__ import annotations

from ._node import node
from .names import check_var
from .pdl import Path


class PBC:
    __slots__ = ()

    def __str__(self):
        from .parser import to_text

        return to_text(self)


@node
class PAtom(PBC):
    path: Path
    x: str
    y: str

    def __post_init__(self):
        check_var(self.x)
        check_var(self.y)


@node
class POr(PBC):
    children: tuple


@node
class PAnd(PBC):
    children: tuple


def por(items, flatten=True):
    """Build a disjunction; singletons collapse and nested POr are inlined."""
    return _combine(POr, items, flatten)


def pand(items, flatten=True):
    return _combine(PAnd, items, flatten)


def _combine(kind, items, flatten):
    out = []
    seen = set()
    for it in items:
        parts = it.children if flatten and isinstance(it, kind) else (it,)
        for p in parts:
            if flatten:
                if p in seen:
                    continue
                seen.add(p)
            out.append(p)
    if len(out) == 1:
        return out[0]
    return kind(tuple(out))


def pbc_vars(p) -> frozenset:
    memo = {}

    def go(q):
        if q in memo:
            return memo[q]
        if isinstance(q, PAtom):
            out = frozenset((q.x, q.y))
        else:
            out = frozenset().union(*(go(c) for c in q.children))
        memo[q] = out
        return out

    return go(p)


def atoms(p):
    """Distinct PAtom leaves in first-occurrence order."""
    out = {}
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, PAtom):
            out.setdefault(q, None)
        else:
            stack.extend(reversed(q.children))
    return list(out)


def dnf_size(p, cap=10**12):
    """Number of conjuncts ``pbc_to_dnf`` would build before deduplication."""
    memo = {}

    def go(q):
        if q in memo:
            return memo[q]
        if isinstance(q, PAtom):
            out = 1
        elif isinstance(q, POr):
            out = min(cap, sum(go(c) for c in q.children))
        else:
            out = 1
            for c in q.children:
                out = min(cap, out * go(c))
        memo[q] = out
        return out

    return go(p)


def pbc_to_dnf(p, absorb_limit=2048):
    """Disjunctive normal form as a list of conjunct lists of PAtoms.

    Conjuncts are deduplicated (X & X -> X) and, while the list is small
    enough, absorbed (drop any conjunct that is a superset of another).
    """
    memo = {}

    def go(q):
        if q in memo:
            return memo[q]
        if isinstance(q, PAtom):
            out = [frozenset((q,))]
        elif isinstance(q, POr):
            out = []
            for c in q.children:
                out.extend(go(c))
        else:
            out = [frozenset()]
            for c in q.children:
                sub = go(c)
                out = [a | b for a in out for b in sub]
                out = _dedupe(out)
        out = _dedupe(out)
        memo[q] = out
        return out

    result = go(p)
    if len(result) <= absorb_limit:
        result = _absorb(result)
    order = {a: i for i, a in enumerate(atoms(p))}
    return [sorted(c, key=order.__getitem__) for c in result]


def _dedupe(conjs):
    seen = set()
    out = []
    for c in conjs:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _absorb(conjs):
    ranked = sorted(range(len(conjs)), key=lambda i: len(conjs[i]))
    kept = []
    for i in ranked:
        c = conjs[i]
        if not any(k <= c for k in kept):
            kept.append(c)
    keep = set(kept)
    return [c for c in conjs if c in keep]
