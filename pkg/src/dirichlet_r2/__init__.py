"""Pair correlation of zeros of Dirichlet L-functions: arithmetic, characters, prime-pair densities, closed-form correlation and zero statistics."""

__version__ = "0.1.0"
