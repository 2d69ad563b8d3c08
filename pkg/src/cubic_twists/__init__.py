"""Arithmetic of the cubic twists C_N : x^3 + y^3 = N."""

__version__ = "0.1.0"
