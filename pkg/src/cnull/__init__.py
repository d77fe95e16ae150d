"""Exact toolkit for c-algebraic maps on parametrized algebraic sets.

Computes characteristic polynomials relative to proper maps, extracts
and exactly verifies Nullstellensatz certificates g^N = sum h_j f_j,
and evaluates growth exponents (root growth of the characteristic
polynomial, gradient growth of a polynomial).
"""

__version__ = "0.1.0"
