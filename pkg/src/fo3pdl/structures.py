"""Finite linearly ordered structures and interval-preserving relations.

The domain of a structure of size n is ``0 .. n-1`` and its linear order is
always the index order, so no order relation is stored.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from . import _kernels
from .syntax.names import Signature, check_pred, check_rel


class ModelError(ValueError):
    pass


class NotIntervalPreserving(ModelError):
    def __init__(self, name, counterexample):
        self.name = name
        self.counterexample = counterexample
        super().__init__(f"relation {name!r} is not interval-preserving: {counterexample}")


# -- relations -----------------------------------------------------------

class Relation:
    """An immutable set of index pairs inside an ``n x n`` square.

    Equality and hashing look at the pairs only; ``n`` is the ambient domain
    size used by complement and the matrix view.
    """

    __slots__ = ("pairs", "n", "_matrix")

    def __init__(self, pairs=(), n=None):
        pairs = frozenset((int(a), int(b)) for a, b in pairs)
        top = 1 + max((max(p) for p in pairs), default=-1)
        if n is None:
            n = top
        if top > n or any(a < 0 or b < 0 for a, b in pairs):
            raise ModelError(f"relation indices out of range for domain size {n}")
        self.pairs = pairs
        self.n = int(n)
        self._matrix = None

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=bool)
        rel = cls(zip(*np.nonzero(m)), n=m.shape[0])
        rel._matrix = m.copy()
        rel._matrix.setflags(write=False)
        return rel

    @property
    def matrix(self):
        if self._matrix is None:
            m = np.zeros((self.n, self.n), dtype=bool)
            for a, b in self.pairs:
                m[a, b] = True
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def resized(self, n):
        return Relation(self.pairs, n)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __eq__(self, other):
        if isinstance(other, Relation):
            return self.pairs == other.pairs
        if isinstance(other, (set, frozenset)):
            return self.pairs == other
        return NotImplemented

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"Relation({sorted(self.pairs)}, n={self.n})"

    def is_functional(self):
        return all(c <= 1 for c in self.matrix.sum(axis=1))


def _common_n(*rels):
    return max(r.n for r in rels)


def converse(r):
    return Relation(((b, a) for a, b in r.pairs), r.n)


def compose(r1, r2):
    n = _common_n(r1, r2)
    m = _kernels.compose(r1.resized(n).matrix[None], r2.resized(n).matrix[None])[0]
    return Relation.from_matrix(m)


def intersect(r1, r2):
    return Relation(r1.pairs & r2.pairs, _common_n(r1, r2))


def union(r1, r2):
    return Relation(r1.pairs | r2.pairs, _common_n(r1, r2))


def complement(r, n=None):
    n = r.n if n is None else n
    return Relation.from_matrix(~r.resized(n).matrix)


def image(r, points):
    points = set(points)
    return {b for a, b in r.pairs if a in points}


def preimage(r, points):
    points = set(points)
    return {a for a, b in r.pairs if b in points}


def identity(n, points=None):
    points = range(n) if points is None else points
    return Relation(((a, a) for a in points), n)


def order(n):
    return Relation(((a, b) for a in range(n) for b in range(a, n)), n)


# -- intervals -----------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Inclusive interval ``[lo, hi]``; any ``lo > hi`` is the empty interval."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "hi", -1)

    @property
    def empty(self):
        return self.lo > self.hi

    def points(self):
        return range(self.lo, self.hi + 1)

    def __and__(self, other):
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def __repr__(self):
        return "Interval.EMPTY" if self.empty else f"[{self.lo},{self.hi}]"


Interval.EMPTY = Interval(0, -1)


# -- interval preservation -----------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    """Witness that a relation is not interval-preserving.

    ``forward``: b lies between images of a1 <= a2, has a preimage, but none
    in [a1, a2]. ``backward``: the same for the converse relation, so a1, a2
    are targets and b is a source.
    """

    a1: int
    a2: int
    b: int
    direction: str

    def __str__(self):
        return f"a1={self.a1} a2={self.a2} b={self.b} direction={self.direction}"


def check_interval_preserving(r, n=None):
    """Return ``None`` if ``r`` is interval-preserving, else a Counterexample.

    On a finite chain every interval is ``[min, max]`` of its points, so it is
    enough to test each pair a1 <= a2 against the hull of R(a1) | R(a2).
    """
    m = r.matrix if n is None else r.resized(n).matrix
    a1, a2, b = _kernels.ip_forward(m)
    if a1 >= 0:
        return Counterexample(a1, a2, b, "forward")
    a1, a2, b = _kernels.ip_forward(np.ascontiguousarray(m.T))
    if a1 >= 0:
        return Counterexample(a1, a2, b, "backward")
    return None


def is_interval_preserving(r, n=None):
    return check_interval_preserving(r, n) is None


# -- structures ----------------------------------------------------------

class FiniteStructure:
    """Finite chain ``0 < 1 < ... < size-1`` with unary and binary relations."""

    def __init__(self, size, predicates=None, relations=None, allow_non_ip=False):
        size = int(size)
        if size < 0:
            raise ModelError("structure size must be non-negative")
        preds = {}
        for name, pts in (predicates or {}).items():
            check_pred(name)
            pts = frozenset(int(p) for p in pts)
            if any(p < 0 or p >= size for p in pts):
                raise ModelError(f"predicate {name!r} has index out of range")
            preds[name] = pts
        rels = {}
        for name, rel in (relations or {}).items():
            check_rel(name)
            if not isinstance(rel, Relation):
                rel = Relation(rel, size)
            if rel.n > size and any(max(p) >= size for p in rel.pairs):
                raise ModelError(f"relation {name!r} has index out of range")
            rel = rel if rel.n == size else rel.resized(size)
            if not allow_non_ip:
                cx = check_interval_preserving(rel)
                if cx is not None:
                    raise NotIntervalPreserving(name, cx)
            rels[name] = rel
        if set(preds) & set(rels):
            raise ModelError("predicate and relation names overlap")
        self.size = size
        self.predicate_val = MappingProxyType(preds)
        self.relation_val = MappingProxyType(rels)
        self.allow_non_ip = allow_non_ip

    @property
    def signature(self):
        return Signature(self.predicate_val.keys(), self.relation_val.keys())

    def with_signature(self, signature):
        """Copy with empty interpretations added for missing names."""
        preds = dict(self.predicate_val)
        rels = dict(self.relation_val)
        for p in signature.predicates:
            preds.setdefault(p, frozenset())
        for r in signature.relsyms:
            rels.setdefault(r, Relation((), self.size))
        return FiniteStructure(self.size, preds, rels, allow_non_ip=self.allow_non_ip)

    def _key(self):
        return (
            self.size,
            tuple(sorted(self.predicate_val.items(), key=lambda kv: kv[0])),
            tuple(sorted((k, v.pairs) for k, v in self.relation_val.items())),
        )

    def __eq__(self, other):
        return isinstance(other, FiniteStructure) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        preds = {k: sorted(v) for k, v in sorted(self.predicate_val.items())}
        rels = {k: sorted(v.pairs) for k, v in sorted(self.relation_val.items())}
        return f"FiniteStructure(size={self.size}, predicates={preds}, relations={rels})"

    # model file format
    def to_dict(self):
        return {
            "size": self.size,
            "predicates": {k: sorted(v) for k, v in sorted(self.predicate_val.items())},
            "relations": {k: [list(p) for p in sorted(v.pairs)]
                          for k, v in sorted(self.relation_val.items())},
        }

    @classmethod
    def from_dict(cls, data, allow_non_ip=False):
        if not isinstance(data, dict):
            raise ModelError("model must be a JSON object")
        unknown = set(data) - {"size", "predicates", "relations"}
        if unknown:
            raise ModelError(f"unknown model keys: {sorted(unknown)}")
        if "size" not in data:
            raise ModelError("model is missing 'size'")
        size = data["size"]
        if not isinstance(size, int) or isinstance(size, bool) or size < 0:
            raise ModelError("'size' must be a non-negative integer")
        preds = {}
        for name, pts in (data.get("predicates") or {}).items():
            if not isinstance(pts, list) or not all(_is_index(p) for p in pts):
                raise ModelError(f"predicate {name!r} must be a list of indices")
            if len(set(pts)) != len(pts):
                raise ModelError(f"predicate {name!r} has duplicate indices")
            preds[name] = pts
        rels = {}
        for name, pairs in (data.get("relations") or {}).items():
            if not isinstance(pairs, list) or not all(
                isinstance(p, list) and len(p) == 2 and all(_is_index(i) for i in p)
                for p in pairs
            ):
                raise ModelError(f"relation {name!r} must be a list of [a, b] pairs")
            tuples = [tuple(p) for p in pairs]
            if len(set(tuples)) != len(tuples):
                raise ModelError(f"relation {name!r} has duplicate pairs")
            if any(max(p) >= size for p in tuples):
                raise ModelError(f"relation {name!r} has index out of range")
            rels[name] = Relation(tuples, size)
        try:
            return cls(size, preds, rels, allow_non_ip=allow_non_ip)
        except ValueError as e:
            if isinstance(e, ModelError):
                raise
            raise ModelError(str(e)) from e

    def dumps(self):
        return json.dumps(self.to_dict())


def _is_index(v):
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def load_model(path, allow_non_ip=False):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelError(f"invalid JSON: {e}") from e
    return FiniteStructure.from_dict(data, allow_non_ip=allow_non_ip)


def save_model(structure, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(structure.to_dict(), fh)
        fh.write("\n")


# -- generators ----------------------------------------------------------

def gen_monotone(n, seed=None, direction="increasing", density=1.0):
    """Graph of a strictly monotone partial function on a random subdomain."""
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    if direction not in ("increasing", "decreasing"):
        raise ValueError("direction must be 'increasing' or 'decreasing'")
    rng = np.random.default_rng(seed)
    dom = [a for a in range(n) if rng.random() < density]
    values = sorted(int(v) for v in rng.choice(n, size=len(dom), replace=False)) if dom else []
    if direction == "decreasing":
        values.reverse()
    return Relation(zip(dom, values), n)


def gen_until(structure, p, q):
    """Pairs (a, b) with a < b, Q at b and P at every point strictly between."""
    n = structure.size
    ps = structure.predicate_val[p]
    qs = structure.predicate_val[q]
    pairs = []
    for a in range(n):
        for b in range(a + 1, n):
            if b in qs:
                pairs.append((a, b))
            if b not in ps:
                break
    return Relation(pairs, n)


def gen_succ(n, k):
    if k < 0:
        raise ValueError("k must be non-negative")
    return Relation(((i, i + k) for i in range(max(0, n - k))), n)


def _random_until(rng, n):
    ps = {a for a in range(n) if rng.random() < 0.6}
    qs = {a for a in range(n) if rng.random() < 0.4}
    m = FiniteStructure(n, {"P": ps, "Q": qs})
    return gen_until(m, "P", "Q")


def _random_guarded_order(rng, n):
    src = [a for a in range(n) if rng.random() < 0.6]
    dst = [b for b in range(n) if rng.random() < 0.6]
    le = order(n)
    if rng.random() < 0.5:
        le = converse(le)
    return compose(compose(identity(n, src), le), identity(n, dst))


def _random_base(rng, n):
    kind = rng.integers(5)
    if kind == 0:
        return gen_monotone(n, rng, "increasing", float(rng.uniform(0.2, 1.0)))
    if kind == 1:
        return gen_monotone(n, rng, "decreasing", float(rng.uniform(0.2, 1.0)))
    if kind == 2:
        r = gen_succ(n, int(rng.integers(0, max(1, n))))
        return converse(r) if rng.random() < 0.5 else r
    if kind == 3:
        return _random_until(rng, n)
    return _random_guarded_order(rng, n)


def _random_combined(rng, n, depth):
    if depth == 0 or rng.random() < 0.4:
        return _random_base(rng, n)
    op = rng.integers(3)
    if op == 0:
        return converse(_random_combined(rng, n, depth - 1))
    a = _random_combined(rng, n, depth - 1)
    b = _random_combined(rng, n, depth - 1)
    return compose(a, b) if op == 1 else intersect(a, b)


def _rejection_sample(rng, n, tries=30):
    for _ in range(tries):
        density = rng.uniform(0.05, 0.5)
        m = rng.random((n, n)) < density
        r = Relation.from_matrix(m)
        if is_interval_preserving(r):
            return r
    return None


def gen_random_ip(n, seed=None, reject_prob=0.1):
    """A random interval-preserving relation on ``n`` points.

    Mixes the monotone / successor / until / guarded-order generators under
    converse, composition and intersection; occasionally rejection-samples an
    arbitrary relation through the checker. The result is always re-checked.
    """
    if n == 0:
        return Relation((), 0)
    rng = np.random.default_rng(seed)
    r = None
    if rng.random() < reject_prob:
        r = _rejection_sample(rng, n)
    if r is None:
        r = _random_combined(rng, n, 2)
    cx = check_interval_preserving(r)
    if cx is not None:
        raise AssertionError(f"generator produced a non interval-preserving relation: {cx}")
    return r


def non_ip_relation(n):
    """The pattern {(0,0),(1,2),(2,1)} tiled along the diagonal of an n-chain."""
    pairs = []
    for base in range(0, n - 2, 3):
        pairs += [(base, base), (base + 1, base + 2), (base + 2, base + 1)]
    return Relation(pairs, n)


@functools.lru_cache(maxsize=None)
def _ip_relations(n):
    if n == 0:
        return (Relation((), 0),)
    k = n * n
    masks = np.arange(2 ** k, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k)) & 1).astype(bool).reshape(-1, n, n)
    ok = _kernels.ip_batch(bits)
    return tuple(Relation.from_matrix(m) for m in bits[ok])


def enumerate_ip_relations(n):
    """Every interval-preserving relation on an n-chain (n <= 3), in mask order.

    Pair (i, j) corresponds to bit ``i*n + j`` of the subset mask.
    """
    if n > 3:
        raise ValueError(
            f"refusing to enumerate 2^{n * n} relations; exhaustive enumeration is capped at n <= 3"
        )
    if n < 0:
        raise ValueError("n must be non-negative")
    return list(_ip_relations(n))


def random_structure(rng, n, signature, allow_non_ip=False, relation_factory=None):
    """Random valuations for ``signature`` on an n-chain.

    Relations come from ``gen_random_ip`` unless ``relation_factory(rng, n)``
    is supplied.
    """
    rng = np.random.default_rng(rng)
    preds = {p: {a for a in range(n) if rng.random() < 0.5} for p in sorted(signature.predicates)}
    rels = {}
    for r in sorted(signature.relsyms):
        if relation_factory is not None:
            rels[r] = relation_factory(rng, n)
        else:
            rels[r] = gen_random_ip(n, rng)
    return FiniteStructure(n, preds, rels, allow_non_ip=allow_non_ip)
