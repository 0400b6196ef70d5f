"""Deterministic 64-bit random number generation for all randomized inputs.

splitmix64 state advance with Box-Muller Gaussians, instead of numpy's
generators, so that every sweep trial is reproducible bit for bit from a
plain integer seed regardless of numpy version or platform BLAS.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 2.0**-53


def derive_stream_seed(seed: int, index: int) -> int:
    """Seed of the independent substream ``index``: seed xor (index * golden)."""
    return (seed ^ ((index * GOLDEN) & MASK64)) & MASK64


class SplitMix64:
    """splitmix64 generator producing uniforms, Gaussians and complex matrices."""

    def __init__(self, seed: int):
        self._state = seed & MASK64
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def normal(self) -> float:
        """Standard Gaussian via Box-Muller; variates are produced in pairs."""
        if self._spare is not None:
            value, self._spare = self._spare, None
            return value
        u1 = ((self.next_u64() >> 11) + 1) * _INV_2_53  # in (0, 1], log-safe
        u2 = (self.next_u64() >> 11) * _INV_2_53
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        self._spare = radius * math.sin(angle)
        return radius * math.cos(angle)

    def complex_normal_matrix(self, rows: int, cols: int) -> np.ndarray:
        """rows x cols matrix of standard complex Gaussians, filled row-major."""
        out = np.empty((rows, cols), dtype=complex)
        for i in range(rows):
            for j in range(cols):
                re = self.normal()
                im = self.normal()
                out[i, j] = complex(re, im)
        return out
