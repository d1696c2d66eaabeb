"""Generating-function flows on symplectic groupoids and the free particle on
the standard Poisson SU(N) inside SL(N,C)."""

__version__ = "0.1.0"
