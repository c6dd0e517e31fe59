"""Seeded random inputs for property sweeps.

All randomness goes through numpy's PCG64 bit generator
(``np.random.default_rng(seed)``), a portable 64-bit generator, so a seed
reproduces the same sample set on any platform.
"""

from __future__ import annotations

import numpy as np

MIN_GAP = 1e-3


def rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def distinct_spectra(gen: np.random.Generator, n: int, count: int, low: float = -2.0,
                     high: float = 2.0, min_gap: float = MIN_GAP) -> np.ndarray:
    """(count, n) array of sorted spectra, uniform on [low, high]^n, with all
    gaps >= min_gap (rejection sampling)."""
    out = np.empty((0, n))
    while len(out) < count:
        batch = np.sort(gen.uniform(low, high, size=(2 * (count - len(out)) + 8, n)), axis=1)
        keep = np.all(np.diff(batch, axis=1) >= min_gap, axis=1)
        out = np.concatenate([out, batch[keep]])
    return out[:count]


def gradient_vectors(gen: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Standard normal f_grad vectors, shape (count, n)."""
    return gen.standard_normal(size=(count, n))
