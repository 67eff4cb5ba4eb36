"""Deterministic rational sampling.

All numeric probes draw their randomness from :class:`random.Random` seeded
with a string ``"{seed}:{label}"``.  String seeding in the stdlib hashes the
bytes with a fixed algorithm, so streams are reproducible across processes
and platforms, and distinct labels give independent streams for the same
user-facing seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import ExactScalar


def rng_for(seed: int, label: str) -> random.Random:
    """A reproducible stream for one analysis under one seed."""
    return random.Random(f"{seed}:{label}")


def rational(rng: random.Random, span: int = 8, den: int = 8,
             nonzero: bool = False) -> Fraction:
    """A random fraction with numerator in ``[-span, span]`` and small denominator."""
    while True:
        q = Fraction(rng.randint(-span, span), rng.randint(1, den))
        if not nonzero or q:
            return q


def gaussian_rational(rng: random.Random, span: int = 8, den: int = 8,
                      nonzero: bool = False) -> ExactScalar:
    """A random Gaussian rational; with ``nonzero`` both parts are nonzero."""
    while True:
        z = ExactScalar(rational(rng, span, den), rational(rng, span, den))
        if not nonzero or (z.re and z.im):
            return z


def rational_point(rng: random.Random, nvars: int, span: int = 8,
                   den: int = 8) -> list[ExactScalar]:
    """A random exact point in a moderate complex box."""
    return [gaussian_rational(rng, span, den) for _ in range(nvars)]


def generic_point(rng: random.Random, nvars: int, span: int = 4,
                  den: int = 8) -> list[ExactScalar]:
    """A random exact point with all real and imaginary parts nonzero.

    Useful when coordinate hyperplanes (or real slices) must be avoided.
    """
    return [gaussian_rational(rng, span, den, nonzero=True)
            for _ in range(nvars)]
