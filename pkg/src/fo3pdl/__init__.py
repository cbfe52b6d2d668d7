"""Monadic FO over chains with interval-preserving relations: translation to
star-free PDL and three-variable FO, with a brute-force finite-model oracle."""

__version__ = "0.1.0"
