"""Bernoulli sensing matrices and compressed measurement acquisition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qrsfilter import FilterMatrix
from .signal import SampledSignal, _frozen_array


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    """m x n matrix with i.i.d. +-1/sqrt(m) entries, deterministic in the seed."""

    entries: np.ndarray
    m: int
    n: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen_array(self.entries))
        if self.entries.shape != (self.m, self.n):
            raise ValidationError("entries shape must match (m, n)")
        scale = 1.0 / np.sqrt(self.m)
        if not np.all(np.isclose(np.abs(self.entries), scale)):
            raise ValidationError("entries must all be +-1/sqrt(m)")


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    """Compressed observation of one frame."""

    values: np.ndarray
    frame_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.values.ndim != 1:
            raise ValidationError("measurement values must be 1-D")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("measurement values must be finite")

    def __len__(self) -> int:
        return self.values.size


def bernoulli_matrix(m: int, n: int, seed: int) -> SensingMatrix:
    """Seeded +-1/sqrt(m) Bernoulli sensing matrix."""
    if m <= 0 or m > n:
        raise ValidationError(f"need 0 < m <= n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(m, n)) * 2 - 1
    return SensingMatrix(signs / np.sqrt(m), m, n, seed)


def measure(phi: SensingMatrix, x, frame_id: int = 0) -> MeasurementVector:
    """y = Phi @ x for one frame (accepts a SampledSignal or a plain vector)."""
    vec = x.samples if isinstance(x, SampledSignal) else np.asarray(x, dtype=float)
    if vec.shape != (phi.n,):
        raise ValidationError(
            f"frame length {vec.shape} does not match sensing width {phi.n}"
        )
    return MeasurementVector(phi.entries @ vec, frame_id)


def effective_matrix(phi: SensingMatrix, filt: FilterMatrix) -> np.ndarray:
    """Fold the band-stop filter into sensing: A0 = Phi @ F.

    Applying A0 to raw samples equals measuring the filtered signal with Phi,
    so the sensor can stay a single matrix multiply while recovery targets the
    morphology-suppressed signal.
    """
    if filt.n != phi.n:
        raise ValidationError(
            f"filter size {filt.n} does not match sensing width {phi.n}"
        )
    return phi.entries @ filt.entries
