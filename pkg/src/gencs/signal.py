"""Sampled-signal containers plus resampling and windowing primitives."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Uniformly sampled real-valued waveform (millivolts) at rate ``fs`` Hz."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = _frozen_array(self.samples)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "fs", float(self.fs))
        if samples.ndim != 1 or samples.size == 0:
            raise ValidationError("samples must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples must all be finite")
        if not self.fs > 0:
            raise ValidationError(f"fs must be positive, got {self.fs}")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        """Signal length in seconds."""
        return self.samples.size / self.fs

    def time_axis(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.fs


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """R-peak sample indices and the RR intervals (seconds) they imply."""

    r_peaks: np.ndarray
    rr_intervals: np.ndarray

    def __post_init__(self):
        peaks = _frozen_array(self.r_peaks, dtype=np.int64)
        rr = _frozen_array(self.rr_intervals)
        object.__setattr__(self, "r_peaks", peaks)
        object.__setattr__(self, "rr_intervals", rr)
        if peaks.ndim != 1 or rr.ndim != 1:
            raise ValidationError("r_peaks and rr_intervals must be 1-D")
        if peaks.size and np.any(np.diff(peaks) <= 0):
            raise ValidationError("r_peaks must be strictly increasing")
        if rr.size != max(peaks.size - 1, 0):
            raise ValidationError("rr_intervals must have one entry per peak pair")
        if rr.size and np.any(rr <= 0):
            raise ValidationError("rr_intervals must be positive")

    @classmethod
    def from_peaks(cls, r_peaks, fs: float) -> "GroundTruth":
        peaks = np.asarray(r_peaks, dtype=np.int64)
        rr = np.diff(peaks) / float(fs) if peaks.size > 1 else np.empty(0)
        return cls(peaks, rr)

    def __len__(self) -> int:
        return self.r_peaks.size


def resample(sig: SampledSignal, target_fs: float) -> SampledSignal:
    """Linear-interpolation resampling of ``sig`` onto a new rate.

    Output length is round(len * target_fs / fs); end samples clamp to the
    nearest input sample.
    """
    if not target_fs > 0:
        raise ValidationError(f"target_fs must be positive, got {target_fs}")
    if target_fs == sig.fs:
        return SampledSignal(sig.samples, sig.fs)
    n_out = int(round(len(sig) * target_fs / sig.fs))
    if n_out < 1:
        raise ValidationError("resampled signal would be empty")
    t_out = np.arange(n_out) / target_fs
    resampled = np.interp(t_out, sig.time_axis(), sig.samples)
    return SampledSignal(resampled, target_fs)


def window(sig: SampledSignal, start: int, length: int) -> SampledSignal:
    """Contiguous sub-signal of ``length`` samples starting at ``start``."""
    if length <= 0:
        raise ValidationError(f"window length must be positive, got {length}")
    if start < 0 or start + length > len(sig):
        raise ValidationError(
            f"window [{start}, {start + length}) out of range for signal of "
            f"length {len(sig)}"
        )
    return SampledSignal(sig.samples[start:start + length], sig.fs)
