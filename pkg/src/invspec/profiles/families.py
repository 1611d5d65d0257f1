"""Seeded generators of admissible (gamma, h) pairs for property sweeps."""
from __future__ import annotations

import numpy as np

from .hermitian import between_hermitian_profile, canonical_hermitian_profile
from .symplectic import Mollifier, bump_profile, mixture_profile


def random_gamma(rng):
    """A bump or mixture profile with parameters drawn from ``rng``.

    Both families stay below gamma_can, so with h >= h_{m,inf} chosen by
    :func:`random_admissible_pair` the comparison hypotheses hold.
    """
    if rng.random() < 0.5:
        half_width = rng.uniform(0.05, 0.25)
        center = rng.uniform(0.25 + half_width, 0.75 - half_width) if half_width < 0.25 else 0.5
        bump = Mollifier(height=rng.uniform(0.02, 0.125), center=center, half_width=half_width)
        return bump_profile(A=rng.uniform(1.0, 6.0), bump=bump)
    return mixture_profile(rng.uniform(0.05, 0.9))


def random_admissible_pair(rng, m):
    gamma = random_gamma(rng)
    if rng.random() < 0.3:
        h = canonical_hermitian_profile(m)
    else:
        h = between_hermitian_profile(m, gamma, rng.uniform(0.0, 1.0))
    return gamma, h


def seeded_pairs(seed, count, ms=(0, 1, 2)):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        m = ms[i % len(ms)]
        out.append((m,) + random_admissible_pair(rng, m))
    return out
