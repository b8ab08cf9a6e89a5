"""Numerical kernel for quantum SU(2) and basic hypergeometric orthogonal
polynomials."""

__version__ = "0.1.0"
