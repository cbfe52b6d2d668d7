"""Identifier classes, reserved words and signatures."""

import re
from dataclasses import dataclass, field

RESERVED = frozenset(
    {"le", "true", "false", "test", "inv", "comp", "loop",
     "c1", "c2", "c3", "c4", "exists", "forall"}
)

# Variables and relation symbols share the lowercase shape; predicates are
# capitalised. The parser relies on this to tell P(x) from r(x,y) and a
# state formula ``P`` from a path formula ``a``.
VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
REL_RE = VAR_RE
PRED_RE = re.compile(r"[A-Z][a-zA-Z0-9_]*\Z")
FRESH_RE = re.compile(r"v[0-9]+\Z")


class InvalidName(ValueError):
    pass


def check_var(name):
    if not isinstance(name, str) or not VAR_RE.match(name) or name in RESERVED:
        raise InvalidName(f"invalid variable name {name!r}")
    return name


def check_pred(name):
    if not isinstance(name, str) or not PRED_RE.match(name):
        raise InvalidName(f"invalid predicate name {name!r}")
    return name


def check_rel(name):
    if not isinstance(name, str) or not REL_RE.match(name) or name in RESERVED:
        raise InvalidName(f"invalid relation symbol {name!r}")
    return name


def fresh_names(avoid, count=1):
    """Return ``count`` names from v0, v1, ... that are not in ``avoid``."""
    out = []
    i = 0
    avoid = set(avoid)
    while len(out) < count:
        name = f"v{i}"
        if name not in avoid:
            out.append(name)
        i += 1
    return out


@dataclass(frozen=True)
class Signature:
    predicates: frozenset = field(default_factory=frozenset)
    relsyms: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "predicates", frozenset(self.predicates))
        object.__setattr__(self, "relsyms", frozenset(self.relsyms))
        for p in self.predicates:
            check_pred(p)
        for r in self.relsyms:
            check_rel(r)
        if self.predicates & self.relsyms:
            raise InvalidName("predicate and relation names overlap")

    def __or__(self, other):
        return Signature(self.predicates | other.predicates, self.relsyms | other.relsyms)
