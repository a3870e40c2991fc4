"""Integer-coefficient band-stop filter cascade and R-peak detection.

The cascade suppresses beat morphology and keeps only the R-peak structure.
Both stages are causal recurrences with zero initial conditions, designed for
a 200 Hz sampling rate (the integer tap spacings 6/12/16/32 assume it).

Two high-pass variants exist:

* ``verbatim``  -- z[i] = 32*x[i-16] - z[i-1] + x[i] - x[i-32]
* ``canonical`` -- r[i] = r[i-1] + x[i] - x[i-32];  out[i] = 32*x[i-16] - r[i]

The canonical form rejects DC, which is what eliminating P/T morphology
requires; the verbatim form is retained for fidelity experiments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz
from scipy.ndimage import maximum_filter1d
from scipy.signal import find_peaks, lfilter

from .errors import ValidationError
from .signal import GroundTruth, SampledSignal, _frozen_array

DESIGN_FS = 200.0
VARIANTS = ("canonical", "verbatim")
MIN_MATRIX_SIZE = 33  # longest tap (x[i-32]) plus one

DEFAULT_THRESHOLD_FRAC = 0.5
DEFAULT_REFRACTORY_S = 0.2
_RUNNING_MAX_WINDOW_S = 2.0

# Low pass: y[i] = 2y[i-1] - y[i-2] + x[i] - 2x[i-6] + x[i-12]
_LP_B = np.zeros(13)
_LP_B[[0, 6, 12]] = (1.0, -2.0, 1.0)
_LP_A = np.array([1.0, -2.0, 1.0])

_HP_VERBATIM_B = np.zeros(33)
_HP_VERBATIM_B[[0, 16, 32]] = (1.0, 32.0, -1.0)
_HP_VERBATIM_A = np.array([1.0, 1.0])

# Canonical single-recurrence form of 32*x[i-16] minus a 32-sample running sum.
_HP_CANONICAL_B = np.zeros(33)
_HP_CANONICAL_B[[0, 16, 17, 32]] = (-1.0, 32.0, -32.0, 1.0)
_HP_CANONICAL_A = np.array([1.0, -1.0])


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValidationError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _check_rate(sig: SampledSignal) -> None:
    if abs(sig.fs - DESIGN_FS) > 1e-6:
        raise ValidationError(
            f"filter is designed for {DESIGN_FS:g} Hz; resample the signal "
            f"(got {sig.fs:g} Hz)"
        )


@dataclass(frozen=True, eq=False)
class FilterMatrix:
    """Causal LTI matrix form of the cascade: F @ x == cascade(x)."""

    entries: np.ndarray
    variant: str

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen_array(self.entries))
        _check_variant(self.variant)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValidationError("filter matrix must be square")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def lowpass(sig: SampledSignal) -> SampledSignal:
    """Triangular low-pass stage of the cascade (DC gain 36)."""
    _check_rate(sig)
    return SampledSignal(lfilter(_LP_B, _LP_A, sig.samples), sig.fs)


def highpass(sig: SampledSignal, variant: str = "canonical") -> SampledSignal:
    """High-pass stage in the requested variant."""
    _check_rate(sig)
    _check_variant(variant)
    if variant == "canonical":
        out = lfilter(_HP_CANONICAL_B, _HP_CANONICAL_A, sig.samples)
    else:
        out = lfilter(_HP_VERBATIM_B, _HP_VERBATIM_A, sig.samples)
    return SampledSignal(out, sig.fs)


def bandstop_cascade(sig: SampledSignal, variant: str = "canonical") -> SampledSignal:
    """Low pass then high pass: morphology suppressed, R peaks kept."""
    return highpass(lowpass(sig), variant)


def cascade_impulse_response(n: int, variant: str = "canonical") -> np.ndarray:
    impulse = np.zeros(n)
    impulse[0] = 1.0
    return bandstop_cascade(SampledSignal(impulse, DESIGN_FS), variant).samples


def group_delay(variant: str = "canonical") -> int:
    """Constant delay of the cascade, measured at the impulse-response peak."""
    h = cascade_impulse_response(64, variant)
    return int(np.argmax(np.abs(h)))


def filter_matrix(n: int, variant: str = "canonical") -> FilterMatrix:
    """Matrix F with F @ x equal to the streaming cascade for length-n inputs."""
    _check_variant(variant)
    if n < MIN_MATRIX_SIZE:
        raise ValidationError(
            f"matrix size must be at least {MIN_MATRIX_SIZE}, got {n}"
        )
    h = cascade_impulse_response(n, variant)
    return FilterMatrix(toeplitz(h, np.zeros(n)), variant)


def detect_r_peaks(
    z: SampledSignal,
    threshold_frac: float = DEFAULT_THRESHOLD_FRAC,
    refractory_s: float = DEFAULT_REFRACTORY_S,
) -> GroundTruth:
    """Detect R peaks on a morphology-suppressed signal.

    Picks local maxima of |z| above ``threshold_frac`` of the running maximum
    over the trailing 2 s, keeping peaks at least ``refractory_s`` apart.
    Indices refer to the filtered signal's own time axis; subtract the
    cascade's group delay to align with the raw signal.
    """
    if len(z) < int(round(_RUNNING_MAX_WINDOW_S * z.fs)):
        raise ValidationError(
            f"need at least {_RUNNING_MAX_WINDOW_S:g} s of signal to detect peaks"
        )
    if not 0 < threshold_frac < 1:
        raise ValidationError("threshold_frac must lie in (0, 1)")
    mag = np.abs(z.samples)
    win = int(round(_RUNNING_MAX_WINDOW_S * z.fs))
    # Trailing window [i - win + 1, i]; zero padding is neutral since mag >= 0.
    running_max = maximum_filter1d(
        mag, size=win, mode="constant", cval=0.0, origin=win - 1 - win // 2
    )
    # The trailing window has no context before the first beat; seed it with
    # the first full window so filter start-up transients stay sub-threshold.
    running_max[:win] = np.max(mag[:win])
    threshold = threshold_frac * running_max
    distance = max(1, int(round(refractory_s * z.fs)))
    peaks, _ = find_peaks(mag, height=threshold, distance=distance)
    return GroundTruth.from_peaks(peaks.astype(np.int64), z.fs)
