"""Deterministic random draws.

Every randomized operation takes an integer seed and derives an isolated
stream from it, so independent operations never share state and reports
are reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction


def child_rng(seed: int, salt: str) -> random.Random:
    """Return an RNG whose stream depends only on (seed, salt)."""
    digest = hashlib.sha256(f"{salt}:{seed}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def rand_rational(rng: random.Random, height: int = 100) -> Fraction:
    """Random rational with numerator and denominator bounded by height."""
    num = rng.randint(-height, height)
    den = rng.randint(1, height)
    return Fraction(num, den)


def rand_nonzero_rational(rng: random.Random, height: int = 100) -> Fraction:
    while True:
        q = rand_rational(rng, height)
        if q != 0:
            return q


def rand_rational_vector(rng: random.Random, n: int, height: int = 100) -> list[Fraction]:
    return [rand_rational(rng, height) for _ in range(n)]


def rand_nonzero_vector(rng: random.Random, n: int, height: int = 100) -> list[Fraction]:
    while True:
        v = rand_rational_vector(rng, n, height)
        if any(q != 0 for q in v):
            return v
