"""Exact computations with crossed structures of commutative algebras over GF(p)."""

__version__ = "0.1.0"
