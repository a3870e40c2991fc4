"""Morphological beat templates: learning, rendering, and full reconstruction.

A beat is modelled as a sum of Gaussians over beat phase [-pi, pi) with the
R wave at phase 0.  Under heart-rate scaling the R Gaussian keeps its absolute
width in seconds while every other component stretches linearly with the RR
interval.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .signal import GroundTruth, SampledSignal, _frozen_array

TWO_PI = 2.0 * np.pi

# Crossfade between adjacent beats when splicing them onto one canvas.
CROSSFADE_S = 0.010


@dataclass(frozen=True, eq=False)
class BeatTemplate:
    """Sum-of-Gaussians beat morphology.

    gaussians: rows of (amplitude_mv, center_phase, width_phase) with phase
    in [-pi, pi); reference_rr is the RR interval (seconds) the template was
    learned at; fit_residual is the RMS error of the fit in millivolts.
    """

    gaussians: np.ndarray
    reference_rr: float
    fit_residual: float = 0.0
    converged: bool = True

    def __post_init__(self):
        g = _frozen_array(self.gaussians)
        object.__setattr__(self, "gaussians", g)
        if g.ndim != 2 or g.shape[1] != 3 or g.shape[0] == 0:
            raise ValidationError("gaussians must be a non-empty (k, 3) array")
        if not np.all(np.isfinite(g)):
            raise ValidationError("gaussian parameters must be finite")
        if np.any(g[:, 2] <= 0):
            raise ValidationError("gaussian widths must be positive")
        if np.any(g[:, 1] < -np.pi) or np.any(g[:, 1] >= np.pi):
            raise ValidationError("gaussian centers must lie in [-pi, pi)")
        if not self.reference_rr > 0:
            raise ValidationError("reference_rr must be positive")
        if self.fit_residual < 0:
            raise ValidationError("fit_residual must be non-negative")

    @property
    def r_index(self) -> int:
        """Index of the R-wave Gaussian: largest |amplitude|, ties broken by
        the center nearest phase 0."""
        amps = np.abs(self.gaussians[:, 0])
        best = np.flatnonzero(amps == amps.max())
        if best.size == 1:
            return int(best[0])
        return int(best[np.argmin(np.abs(self.gaussians[best, 1]))])


def default_template() -> BeatTemplate:
    """P,Q,R,S,T morphology with a dominant narrow R wave at heart rate 60."""
    centers_deg = np.array([-70.0, -15.0, 0.0, 15.0, 100.0])
    amps_mv = np.array([0.12, -0.10, 1.00, -0.25, 0.30])
    widths_s = np.array([0.045, 0.010, 0.010, 0.010, 0.080])
    reference_rr = 1.0
    gaussians = np.column_stack(
        [amps_mv, np.deg2rad(centers_deg), widths_s * TWO_PI / reference_rr]
    )
    return BeatTemplate(gaussians, reference_rr)


def beat_waveform(template: BeatTemplate, rr: float, t: np.ndarray) -> np.ndarray:
    """Evaluate one beat at time offsets ``t`` (seconds, R peak at t = 0).

    The evaluation is not wrapped: offsets beyond +-rr/2 decay to the
    isoelectric baseline, which is what splicing relies on.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    r_idx = template.r_index
    for k, (amp, center, width) in enumerate(template.gaussians):
        t_k = center / TWO_PI * rr
        scale_rr = template.reference_rr if k == r_idx else rr
        sigma = width / TWO_PI * scale_rr
        out += amp * np.exp(-0.5 * ((t - t_k) / sigma) ** 2)
    return out


def render_beat(template: BeatTemplate, rr: float, fs: float) -> SampledSignal:
    """Render a single beat of duration ``rr`` seconds.

    The R maximum lands at sample round(rr * fs / 2).
    """
    if not 0.3 <= rr <= 2.0:
        raise ValidationError(f"rr must lie in [0.3, 2.0] s, got {rr}")
    n = int(round(rr * fs))
    r_pos = int(round(rr * fs / 2))
    t = (np.arange(n) - r_pos) / fs
    return SampledSignal(beat_waveform(template, rr, t), fs)


def _beat_rrs(r_peaks: np.ndarray, fs: float, fallback_rr: float) -> np.ndarray:
    """Forward RR per beat; the last beat reuses the nearest full RR."""
    if r_peaks.size == 1:
        return np.array([fallback_rr])
    rr = np.diff(r_peaks) / fs
    return np.append(rr, rr[-1])


def render_beats_on_canvas(
    template: BeatTemplate, r_peaks, n: int, fs: float
) -> np.ndarray:
    """Render beats centered at ``r_peaks`` onto a length-``n`` canvas.

    Each beat owns the span between the midpoints to its neighbours, scaled
    by its forward RR (edge beats reuse the nearest full RR and extend to the
    canvas boundary, where the Gaussian tails decay to the isoelectric
    baseline).  Adjacent spans are joined with a linear crossfade.
    """
    peaks = np.asarray(r_peaks, dtype=np.int64)
    if peaks.size == 0:
        return np.zeros(n)
    rrs = _beat_rrs(peaks, fs, np.clip(template.reference_rr, 0.3, 2.0))
    rrs = np.clip(rrs, 0.3, 2.0)

    mids = (peaks[:-1] + peaks[1:]) // 2
    fade = max(1, int(round(CROSSFADE_S * fs)))
    canvas = np.zeros(n)
    for i in range(peaks.size):
        left = -fade if i == 0 else int(mids[i - 1]) - fade // 2
        right = n + fade if i == peaks.size - 1 else int(mids[i]) - fade // 2 + fade
        lo, hi = max(left, 0), min(right, n)
        if lo >= hi:
            continue
        idx = np.arange(lo, hi)
        wave = beat_waveform(template, rrs[i], (idx - peaks[i]) / fs)
        weight = np.ones(hi - lo)
        if i > 0:
            ramp_start = int(mids[i - 1]) - fade // 2
            k = idx - ramp_start
            in_ramp = (k >= 0) & (k < fade)
            weight[in_ramp] = (k[in_ramp] + 0.5) / fade
        if i < peaks.size - 1:
            ramp_start = int(mids[i]) - fade // 2
            k = idx - ramp_start
            in_ramp = (k >= 0) & (k < fade)
            weight[in_ramp] = np.minimum(weight[in_ramp], 1.0 - (k[in_ramp] + 0.5) / fade)
            weight[idx >= ramp_start + fade] = 0.0
        canvas[lo:hi] += weight * wave
    return canvas


def reconstruct(
    template: BeatTemplate, temporal: GroundTruth, n: int, fs: float
) -> SampledSignal:
    """Re-synthesize a full signal from a template plus R-peak indices."""
    peaks = temporal.r_peaks
    if peaks.size and (peaks[0] < 0 or peaks[-1] >= n):
        raise ValidationError("temporal indices must lie in [0, n)")
    if peaks.size == 0:
        warnings.warn("no temporal parameters: returning isoelectric signal")
        return SampledSignal(np.zeros(n), fs)
    return SampledSignal(render_beats_on_canvas(template, peaks, n, fs), fs)


def _segment_mean_beat(
    snippet: SampledSignal, peaks: np.ndarray, grid: np.ndarray
) -> tuple[np.ndarray, float]:
    """Average peak-to-peak segments on a common phase grid in [-pi, pi).

    Cubic interpolation keeps the narrow R wave from being flattened between
    samples, which linear interpolation does noticeably at 200 Hz.
    """
    from scipy.interpolate import CubicSpline

    x = snippet.samples
    fs = snippet.fs
    spline = CubicSpline(np.arange(x.size), x)
    acc = np.zeros_like(grid)
    phase_wrapped = np.mod(grid, TWO_PI)  # segment-local phase in [0, 2pi)
    count = 0
    for a, b in zip(peaks[:-1], peaks[1:]):
        seg_t = a + phase_wrapped / TWO_PI * (b - a)
        acc += spline(seg_t)
        count += 1
    mean_rr = float(np.mean(np.diff(peaks))) / fs
    return acc / count, mean_rr


def _gaussian_sum(params: np.ndarray, grid: np.ndarray) -> np.ndarray:
    amps = params[0::3]
    centers = params[1::3]
    widths = params[2::3]
    z = (grid[:, None] - centers[None, :]) / widths[None, :]
    return np.sum(amps[None, :] * np.exp(-0.5 * z**2), axis=1)


def _gaussian_sum_jacobian(params: np.ndarray, grid: np.ndarray) -> np.ndarray:
    amps = params[0::3]
    centers = params[1::3]
    widths = params[2::3]
    z = (grid[:, None] - centers[None, :]) / widths[None, :]
    e = np.exp(-0.5 * z**2)
    jac = np.empty((grid.size, params.size))
    jac[:, 0::3] = e
    jac[:, 1::3] = amps[None, :] * e * z / widths[None, :]
    jac[:, 2::3] = amps[None, :] * e * z**2 / widths[None, :]
    return jac


def _fit_gaussians(
    target: np.ndarray, grid: np.ndarray, init: np.ndarray, max_iter: int = 200
) -> tuple[np.ndarray, float, bool]:
    """Gauss-Newton least squares with backtracking line search."""
    params = init.copy()
    min_width = 1e-3
    residual = _gaussian_sum(params, grid) - target
    cost = 0.5 * float(residual @ residual)
    converged = False
    for _ in range(max_iter):
        jac = _gaussian_sum_jacobian(params, grid)
        step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        t = 1.0
        improved = False
        for _ in range(25):
            trial = params + t * step
            trial[2::3] = np.maximum(trial[2::3], min_width)
            trial_res = _gaussian_sum(trial, grid) - target
            trial_cost = 0.5 * float(trial_res @ trial_res)
            if trial_cost < cost:
                improved = True
                break
            t /= 2.0
        if not improved:
            converged = True
            break
        rel_drop = (cost - trial_cost) / max(cost, 1e-30)
        params, residual, cost = trial, trial_res, trial_cost
        if rel_drop < 1e-12 or np.linalg.norm(t * step) < 1e-12:
            converged = True
            break
    rms = float(np.sqrt(np.mean(residual**2)))
    return params, rms, converged


def learn_template(snippet: SampledSignal, peaks: GroundTruth) -> BeatTemplate:
    """Learn a 5-Gaussian beat template from a Nyquist-rate snippet.

    Beats are segmented peak to peak, phase-normalized, averaged pointwise,
    and fit by Gauss-Newton starting from the default P,Q,R,S,T layout.
    """
    if abs(snippet.fs - 200.0) > 1e-6:
        raise ValidationError(
            f"templates are learned at 200 Hz; resample first (got {snippet.fs} Hz)"
        )
    r_peaks = peaks.r_peaks
    if r_peaks.size < 6:
        raise ValidationError(
            f"need at least 5 complete beats (6 peaks), got {r_peaks.size} peaks"
        )
    if r_peaks[-1] >= len(snippet):
        raise ValidationError("peak indices exceed snippet length")

    # 1024 phase points keep interpolation error well under the narrow R wave.
    grid = np.linspace(-np.pi, np.pi, 1024, endpoint=False)
    mean_beat, mean_rr = _segment_mean_beat(snippet, r_peaks, grid)

    init_tpl = default_template()
    init = init_tpl.gaussians[:, [0, 1, 2]].reshape(-1).copy()
    # Align the initial amplitude scale with the observed beat.
    observed = float(np.max(np.abs(mean_beat)))
    if observed > 0:
        init[0::3] *= observed / np.max(np.abs(init[0::3]))

    params, rms, converged = _fit_gaussians(mean_beat, grid, init)
    gaussians = params.reshape(-1, 3)
    order = np.argsort(gaussians[:, 1])
    gaussians = gaussians[order]
    centers = np.mod(gaussians[:, 1] + np.pi, TWO_PI) - np.pi
    gaussians = np.column_stack([gaussians[:, 0], centers, np.abs(gaussians[:, 2])])
    return BeatTemplate(gaussians, mean_rr, fit_residual=rms, converged=converged)
