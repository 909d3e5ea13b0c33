"""Seeded random generators for self-tests and round-trip suites.

All functions take an explicit random.Random so runs are reproducible from
a single integer seed; nothing here touches the global RNG state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .fields import FieldSpec, Scalar
from .freealg import MultilinearPoly, Permutation, symmetric_group
from .triangular import StrictUT


def random_scalar(rng: random.Random, spec: FieldSpec, nonzero: bool = False) -> Scalar:
    if spec.is_rational:
        while True:
            value = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
            if not (nonzero and value == 0):
                return spec.scalar(value)
    lo = 1 if nonzero else 0
    return spec.scalar(rng.randrange(lo, spec.p))


def random_poly(rng: random.Random, spec: FieldSpec, m: int) -> MultilinearPoly:
    """A random nonzero polynomial with a bounded, varied support."""
    group = symmetric_group(m)
    keep = min(1.0, 12 / len(group))
    while True:
        coeffs = {
            sigma: random_scalar(rng, spec, nonzero=True)
            for sigma in group
            if rng.random() < keep
        }
        if coeffs:
            return MultilinearPoly(m, spec, coeffs)


def random_pivot_coeffs(
    rng: random.Random, spec: FieldSpec, m: int, force_swap23: bool = False
) -> MultilinearPoly:
    """Coefficients supported on permutations fixing 1, with identity
    coefficient one; optionally force a nonzero coefficient at the swap of
    positions 2 and 3."""
    coeffs = {Permutation.identity(m): spec.one}
    for sigma in symmetric_group(m):
        if not sigma.fixes(1) or sigma.is_identity:
            continue
        if rng.random() < 0.5:
            coeffs[sigma] = random_scalar(rng, spec, nonzero=True)
    if force_swap23 and m >= 3:
        coeffs[Permutation.transposition(m, 2, 3)] = random_scalar(
            rng, spec, nonzero=True
        )
    return MultilinearPoly(m, spec, coeffs)


def random_band_target(
    rng: random.Random, spec: FieldSpec, n: int, m: int
) -> StrictUT:
    """A random matrix supported beyond the level-(m-1) band."""
    pairs = []
    for p in range(1, n + 1):
        for q in range(p + m, n + 1):
            if rng.random() < 0.7:
                pairs.append((p, q, random_scalar(rng, spec)))
    return StrictUT.from_entries(n, spec, pairs)


def random_strict_ut(rng: random.Random, spec: FieldSpec, n: int) -> StrictUT:
    return random_band_target(rng, spec, n, 1)
