"""Star-free PDL with converse: state formulas, path formulas and dialects."""

from __future__ import annotations

import enum

from ._node import node
from .names import check_pred, check_rel


class State:
    __slots__ = ()

    def __str__(self):
        from .parser import to_text

        return to_text(self)


class Path:
    __slots__ = ()

    def __str__(self):
        from .parser import to_text

        return to_text(self)


# -- state formulas --------------------------------------------------------

@node
class Prop(State):
    name: str

    def __post_init__(self):
        check_pred(self.name)


@node
class Or(State):
    left: State
    right: State


@node
class And(State):
    left: State
    right: State


@node
class Not(State):
    body: State


@node
class Diamond(State):
    path: Path
    body: State


@node
class Loop(State):
    path: Path


@node
class Top(State):
    pass


@node
class Bot(State):
    pass


TRUE = Top()
FALSE = Bot()


# -- path formulas ---------------------------------------------------------

@node
class Atom(Path):
    name: str

    def __post_init__(self):
        check_rel(self.name)


@node
class LeSym(Path):
    pass


@node
class Test(Path):
    state: State


@node
class Converse(Path):
    path: Path


@node
class Compose(Path):
    left: Path
    right: Path


@node
class Union(Path):
    left: Path
    right: Path


@node
class Inter(Path):
    left: Path
    right: Path


@node
class Complement(Path):
    path: Path


@node
class C1(Path):
    path: Path


@node
class C2(Path):
    path: Path


@node
class C3(Path):
    path: Path


@node
class C4(Path):
    path: Path


C_OPS = (C1, C2, C3, C4)
C_INDEX = {C1: 1, C2: 2, C3: 3, C4: 4}

LE = LeSym()
GE = Converse(LE)
ID = Test(TRUE)

UNARY_PATHS = (Converse, Complement) + C_OPS
BINARY_PATHS = (Compose, Union, Inter)


class Dialect(enum.Enum):
    FULL = "full"
    FRAG_CAP = "cap"     # Union and Complement excluded
    FRAG_LOOP = "loop"   # additionally no Inter (loop(.) carries it implicitly)


_FORBIDDEN = {
    Dialect.FULL: (),
    Dialect.FRAG_CAP: (Union, Complement),
    Dialect.FRAG_LOOP: (Union, Complement, Inter),
}


def dialect_check(f, dialect=Dialect.FULL) -> bool:
    """True iff every path constructor in ``f`` (state or path) is allowed."""
    forbidden = _FORBIDDEN[dialect]
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if forbidden and isinstance(g, forbidden):
            return False
        stack.extend(children(g))
    return True


def dialect_of(f) -> Dialect:
    for d in (Dialect.FRAG_LOOP, Dialect.FRAG_CAP):
        if dialect_check(f, d):
            return d
    return Dialect.FULL


def children(f):
    if isinstance(f, (Prop, Top, Bot, Atom, LeSym)):
        return ()
    if isinstance(f, (Or, And, Compose, Union, Inter)):
        return (f.left, f.right)
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, Diamond):
        return (f.path, f.body)
    if isinstance(f, Test):
        return (f.state,)
    return (f.path,)


def signature_names(f):
    """Return (predicate names, relation names) used by a PDL formula."""
    preds, rels = set(), set()
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, Prop):
            preds.add(g.name)
        elif isinstance(g, Atom):
            rels.add(g.name)
        stack.extend(children(g))
    return preds, rels


def size(f) -> int:
    """Number of nodes counted as a tree (shared subterms counted repeatedly)."""
    memo = {}

    def go(g):
        if g in memo:
            return memo[g]
        out = 1 + sum(go(c) for c in children(g))
        memo[g] = out
        return out

    return go(f)


def dag_size(f) -> int:
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(children(g))
    return len(seen)
