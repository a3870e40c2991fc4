"""Orthonormal discrete wavelet transform matrices (periodized Haar / DB4)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

FAMILIES = ("haar", "daubechies4")

_SQRT2 = np.sqrt(2.0)
_SQRT3 = np.sqrt(3.0)

_LOWPASS = {
    "haar": np.array([1.0, 1.0]) / _SQRT2,
    "daubechies4": np.array(
        [1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3]
    ) / (4.0 * _SQRT2),
}


def _qmf(h: np.ndarray) -> np.ndarray:
    """Quadrature mirror filter: g[k] = (-1)^k h[L-1-k]."""
    g = h[::-1].copy()
    g[1::2] *= -1.0
    return g


@dataclass(frozen=True, eq=False)
class WaveletBasis:
    """Sparsifying basis description: family, decomposition depth, length."""

    family: str
    levels: int
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.n < 2 or self.n & (self.n - 1):
            raise ValidationError(
                f"frame length must be a power of two >= 2, got {self.n} "
                "(zero-pad before transforming)"
            )
        max_levels = int(np.log2(self.n))
        if not 1 <= self.levels <= max_levels:
            raise ValidationError(
                f"levels must lie in [1, {max_levels}] for n={self.n}, got {self.levels}"
            )


def dwt_matrix(basis: WaveletBasis) -> np.ndarray:
    """Orthonormal synthesis matrix W (coefficients -> signal); analysis is W.T.

    Coefficient layout is [approx_L | detail_L | ... | detail_1].
    """
    h = _LOWPASS[basis.family]
    g = _qmf(h)
    n = basis.n
    analysis = np.eye(n)
    q = n
    for _ in range(basis.levels):
        step = np.eye(n)
        block = np.zeros((q, q))
        half = q // 2
        for i in range(half):
            for k in range(h.size):
                col = (2 * i + k) % q
                block[i, col] += h[k]
                block[half + i, col] += g[k]
        step[:q, :q] = block
        analysis = step @ analysis
        q //= 2
    return analysis.T
