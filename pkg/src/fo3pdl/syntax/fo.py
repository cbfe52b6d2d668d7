"""Monadic first-order formulas over predicates, binary relations and <=."""

from __future__ import annotations

from ._node import node
from .names import Signature, check_pred, check_rel, check_var, fresh_names


class Formula:
    """Base class for FO formulas."""

    __slots__ = ()

    def __str__(self):
        from .parser import to_text

        return to_text(self)


@node
class Pred(Formula):
    pred: str
    var: str

    def __post_init__(self):
        check_pred(self.pred)
        check_var(self.var)


@node
class Le(Formula):
    left: str
    right: str

    def __post_init__(self):
        check_var(self.left)
        check_var(self.right)


@node
class Eq(Formula):
    left: str
    right: str

    def __post_init__(self):
        check_var(self.left)
        check_var(self.right)


@node
class Rel(Formula):
    rel: str
    left: str
    right: str

    def __post_init__(self):
        check_rel(self.rel)
        check_var(self.left)
        check_var(self.right)


@node
class Or(Formula):
    left: Formula
    right: Formula


@node
class And(Formula):
    left: Formula
    right: Formula


@node
class Implies(Formula):
    left: Formula
    right: Formula


@node
class Not(Formula):
    body: Formula


@node
class Exists(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        check_var(self.var)


@node
class Forall(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        check_var(self.var)


ATOMS = (Pred, Le, Eq, Rel)
SUGAR = (And, Implies, Forall)


def atom_vars(f):
    if isinstance(f, Pred):
        return (f.var,)
    return (f.left, f.right)


def free_vars(f) -> frozenset:
    if isinstance(f, ATOMS):
        return frozenset(atom_vars(f))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    return free_vars(f.left) | free_vars(f.right)


def all_vars(f) -> frozenset:
    """Every variable name occurring in ``f``, free or bound."""
    if isinstance(f, ATOMS):
        return frozenset(atom_vars(f))
    if isinstance(f, Not):
        return all_vars(f.body)
    if isinstance(f, (Exists, Forall)):
        return all_vars(f.body) | {f.var}
    return all_vars(f.left) | all_vars(f.right)


def count_vars(f) -> int:
    return len(all_vars(f))


def signature_of(f) -> Signature:
    preds, rels = set(), set()

    def walk(g):
        if isinstance(g, Pred):
            preds.add(g.pred)
        elif isinstance(g, Rel):
            rels.add(g.rel)
        elif isinstance(g, ATOMS):
            pass
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body)
        else:
            walk(g.left)
            walk(g.right)

    walk(f)
    return Signature(preds, rels)


def quantifier_depth(f) -> int:
    if isinstance(f, ATOMS):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_depth(f.body)
    return max(quantifier_depth(f.left), quantifier_depth(f.right))


def is_desugared(f) -> bool:
    if isinstance(f, SUGAR):
        return False
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return is_desugared(f.body)
    if isinstance(f, Exists):
        return is_desugared(f.body)
    return is_desugared(f.left) and is_desugared(f.right)


def desugar(f):
    """Rewrite And, Implies and Forall into Or / Not / Exists."""
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, desugar(f.body))
    if isinstance(f, Forall):
        return Not(Exists(f.var, Not(desugar(f.body))))
    left, right = desugar(f.left), desugar(f.right)
    if isinstance(f, Or):
        return Or(left, right)
    if isinstance(f, And):
        return Not(Or(Not(left), Not(right)))
    return Or(Not(left), right)


def rename_free(f, old, new):
    """Substitute variable ``new`` for free occurrences of ``old``.

    ``new`` must not be bound anywhere inside ``f``.
    """
    if isinstance(f, Pred):
        return Pred(f.pred, new) if f.var == old else f
    if isinstance(f, ATOMS):
        left = new if f.left == old else f.left
        right = new if f.right == old else f.right
        if isinstance(f, Rel):
            return Rel(f.rel, left, right)
        return type(f)(left, right)
    if isinstance(f, Not):
        return Not(rename_free(f.body, old, new))
    if isinstance(f, (Exists, Forall)):
        if f.var == old:
            return f
        return type(f)(f.var, rename_free(f.body, old, new))
    return type(f)(rename_free(f.left, old, new), rename_free(f.right, old, new))


def prenex_parts(f):
    """Split a desugared formula into a quantifier prefix and a matrix.

    Bound variables are renamed apart to v0, v1, ... (skipping every name
    already in ``f``) in pre-order, so the outermost leftmost quantifier gets
    the smallest fresh name. Returns ``(prefix, matrix)`` where prefix is a
    list of ``("E" | "A", var)`` from outermost to innermost.
    """
    if not is_desugared(f):
        raise ValueError("to_prenex expects a desugared formula")
    avoid = set(all_vars(f))

    def fresh():
        (name,) = fresh_names(avoid, 1)
        avoid.add(name)
        return name

    def go(g):
        if isinstance(g, ATOMS):
            return [], g
        if isinstance(g, Not):
            prefix, matrix = go(g.body)
            flipped = [("A" if q == "E" else "E", v) for q, v in prefix]
            return flipped, Not(matrix)
        if isinstance(g, Exists):
            name = fresh()
            prefix, matrix = go(rename_free(g.body, g.var, name))
            return [("E", name)] + prefix, matrix
        lp, lm = go(g.left)
        rp, rm = go(g.right)
        return lp + rp, Or(lm, rm)

    return go(f)


def to_prenex(f):
    prefix, matrix = prenex_parts(f)
    out = matrix
    for q, v in reversed(prefix):
        out = Exists(v, out) if q == "E" else Forall(v, out)
    return out


def is_quantifier_free(f) -> bool:
    return quantifier_depth(f) == 0
