"""Fidelity metrics and compression-ratio accounting."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .signal import GroundTruth, SampledSignal


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark run: method, operating point, fidelity, and cost."""

    method: str
    cr: float
    seed: int
    rpeak_f1: float
    rr_rmse_s: float
    prd_pct: float
    mac_count: int
    transmitted_bits: int
    wall_time_s: float
    n_frames: int = 0
    sensing_mac_count: int = 0
    skipped: bool = False

    def __post_init__(self):
        if not self.skipped:
            if self.cr < 1.0:
                raise ValidationError(f"cr must be >= 1, got {self.cr}")
            if np.isfinite(self.rpeak_f1) and not 0.0 <= self.rpeak_f1 <= 1.0:
                raise ValidationError(f"rpeak_f1 must lie in [0, 1], got {self.rpeak_f1}")
            if np.isfinite(self.prd_pct) and self.prd_pct < 0:
                raise ValidationError(f"prd must be >= 0, got {self.prd_pct}")


def _match_peaks(detected: np.ndarray, truth: np.ndarray, tol: int) -> list[tuple[int, int]]:
    """Greedy in-order one-to-one matching within +-tol samples."""
    pairs = []
    i = j = 0
    while i < detected.size and j < truth.size:
        if abs(int(detected[i]) - int(truth[j])) <= tol:
            pairs.append((i, j))
            i += 1
            j += 1
        elif detected[i] < truth[j]:
            i += 1
        else:
            j += 1
    return pairs


def _as_peaks(x) -> np.ndarray:
    if isinstance(x, GroundTruth):
        return x.r_peaks
    return np.asarray(x, dtype=np.int64)


def rpeak_f1(
    detected, truth, tol_s: float, fs: float = 200.0
) -> tuple[float, float, float]:
    """(f1, precision, recall) of detected R peaks against ground truth.

    Matching is greedy one-to-one within +-tol_s.  Two empty lists score 1;
    an empty side against a non-empty one scores 0.
    """
    if tol_s <= 0:
        raise ValidationError(f"tol_s must be positive, got {tol_s}")
    det = _as_peaks(detected)
    tru = _as_peaks(truth)
    if det.size == 0 and tru.size == 0:
        return 1.0, 1.0, 1.0
    if det.size == 0 or tru.size == 0:
        return 0.0, 0.0, 0.0
    tol = int(round(tol_s * fs))
    matches = len(_match_peaks(det, tru, tol))
    precision = matches / det.size
    recall = matches / tru.size
    if precision + recall == 0:
        return 0.0, 0.0, 0.0
    f1 = 2 * precision * recall / (precision + recall)
    return f1, precision, recall


def rr_rmse(detected, truth, tol_s: float, fs: float = 200.0) -> float:
    """RMS error (seconds) between matched consecutive RR intervals.

    Returns NaN when fewer than two peaks match.
    """
    det = _as_peaks(detected)
    tru = _as_peaks(truth)
    pairs = _match_peaks(det, tru, int(round(tol_s * fs)))
    if len(pairs) < 2:
        return float("nan")
    det_idx = np.array([det[i] for i, _ in pairs], dtype=float)
    tru_idx = np.array([tru[j] for _, j in pairs], dtype=float)
    err = (np.diff(det_idx) - np.diff(tru_idx)) / fs
    return float(np.sqrt(np.mean(err**2)))


def prd(reference: SampledSignal, test: SampledSignal) -> float:
    """Percentage RMS difference: 100 * ||ref - test|| / ||ref - mean(ref)||."""
    if len(reference) != len(test):
        raise ValidationError(
            f"signals must have equal length, got {len(reference)} and {len(test)}"
        )
    ref = reference.samples
    denom = float(np.linalg.norm(ref - ref.mean()))
    if denom == 0.0:
        raise NumericalError("PRD undefined for a constant reference signal")
    return 100.0 * float(np.linalg.norm(ref - test.samples)) / denom


def compression_ratio(
    n_samples: int, bits_per_sample: int, transmitted_bits: int
) -> float:
    """Raw bits over transmitted bits."""
    if n_samples <= 0 or bits_per_sample <= 0:
        raise ValidationError("n_samples and bits_per_sample must be positive")
    if transmitted_bits <= 0:
        raise ValidationError(
            f"transmitted_bits must be positive, got {transmitted_bits}"
        )
    return n_samples * bits_per_sample / transmitted_bits
