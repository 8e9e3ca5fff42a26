"""Exact-arithmetic permutonestohedra: construction and verification."""

__version__ = "0.1.0"
