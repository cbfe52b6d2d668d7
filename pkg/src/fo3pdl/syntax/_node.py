"""Frozen AST node plumbing shared by the three formula sorts."""

from dataclasses import dataclass, fields


def node(cls):
    """Turn ``cls`` into a frozen dataclass with a cached structural hash.

    Translated formulas share subterms heavily and are used as memo keys, so
    recomputing a recursive hash on every lookup would be quadratic.
    """
    cls = dataclass(frozen=True, repr=False)(cls)
    names = tuple(f.name for f in fields(cls))
    tag = cls.__name__

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((tag,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return False
        if hash(self) != hash(other):
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    def __repr__(self):
        args = ", ".join(repr(getattr(self, n)) for n in names)
        return f"{tag}({args})"

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    cls.__repr__ = __repr__
    return cls
