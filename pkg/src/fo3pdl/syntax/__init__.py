"""Formula syntax: FO, star-free PDL, positive boolean combinations."""

from . import fo, pdl
from .names import RESERVED, InvalidName, Signature, fresh_names
from .parser import ParseError, parse_any, parse_fo, parse_path, parse_state, to_text
from .pbc import PAnd, PAtom, POr, atoms, pand, pbc_to_dnf, pbc_vars, por
from .pdl import Dialect, dialect_check

__all__ = [
    "fo", "pdl", "RESERVED", "InvalidName", "Signature", "fresh_names",
    "ParseError", "parse_any", "parse_fo", "parse_path", "parse_state", "to_text",
    "PAnd", "PAtom", "POr", "atoms", "pand", "pbc_to_dnf", "pbc_vars", "por",
    "Dialect", "dialect_check",
]
