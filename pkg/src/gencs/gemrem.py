"""Model-based encoder/decoder baseline: transmit only deviations from a
pre-learned beat template.

Per detected beat the encoder transmits nothing when both timing and
morphology match the decoder's prediction, a one-scalar RR update when only
timing drifts, and the raw beat samples when morphology deviates.  The
decoder replays the predictor to re-synthesize the signal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .qrsfilter import bandstop_cascade, detect_r_peaks, group_delay
from .signal import GroundTruth, SampledSignal
from .template import BeatTemplate, render_beats_on_canvas

DEFAULT_HR_TOL = 0.02
DEFAULT_MORPH_TOL_MV = 0.05

# Bit accounting for compression ratios.
HEADER_BITS_PER_PARAM = 32
RR_UPDATE_BITS = 16
ESCAPE_OVERHEAD_BITS = 32  # beat index + sample count
DEFAULT_BITS_PER_SAMPLE = 12

# RR intervals are quantized to, and transmitted at, millisecond resolution.
RR_QUANTUM_S = 1e-3


@dataclass(frozen=True, eq=False)
class GemremStream:
    """Header template plus per-beat deviation records."""

    template: BeatTemplate
    updates: tuple[tuple[int, float], ...] = ()
    escapes: tuple[tuple[int, np.ndarray], ...] = field(default_factory=tuple)
    n_beats: int = 0

    def __post_init__(self):
        beats = [b for b, _ in self.updates]
        if beats != sorted(beats):
            raise ValidationError("updates must be sorted by beat index")
        esc = [b for b, _ in self.escapes]
        if esc != sorted(esc):
            raise ValidationError("escapes must be sorted by beat index")


def header_bits(template: BeatTemplate) -> int:
    n_params = template.gaussians.size + 2  # gaussians + reference_rr + fit_residual
    return HEADER_BITS_PER_PARAM * n_params


def stream_bits(
    stream: GemremStream, bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE
) -> tuple[int, int]:
    """(total_bits, payload_bits_without_header) of an encoded stream."""
    payload = RR_UPDATE_BITS * len(stream.updates)
    for _, samples in stream.escapes:
        payload += ESCAPE_OVERHEAD_BITS + bits_per_sample * len(samples)
    header = header_bits(stream.template)
    return header + payload, payload


def _quantize_rr(rr: float) -> float:
    return round(rr / RR_QUANTUM_S) * RR_QUANTUM_S


def _beat_regions(bounds: np.ndarray, n: int) -> list[tuple[int, int]]:
    """Half-open sample regions per beat: midpoints between adjacent peaks."""
    peaks = bounds
    mids = (peaks[:-1] + peaks[1:]) // 2
    edges = np.concatenate([[0], mids, [n]])
    return [(int(edges[i]), int(edges[i + 1])) for i in range(peaks.size)]


def detect_beats(sig: SampledSignal, variant: str = "canonical") -> GroundTruth:
    """Filter, detect, and delay-compensate R peaks on a raw signal."""
    z = bandstop_cascade(sig, variant)
    detected = detect_r_peaks(z)
    peaks = detected.r_peaks - group_delay(variant)
    peaks = peaks[(peaks >= 0) & (peaks < len(sig))]
    return GroundTruth.from_peaks(peaks, sig.fs)


def gemrem_encode(
    sig: SampledSignal,
    template: BeatTemplate,
    hr_tol: float = DEFAULT_HR_TOL,
    morph_tol: float = DEFAULT_MORPH_TOL_MV,
) -> GemremStream:
    """Encode a signal against a pre-learned template.

    The encoder replays the decoder's RR predictor (which starts at the
    template's reference RR and moves to each transmitted update) and sends
    an RR update whenever the decoder's projected R-peak placement would
    drift more than ``hr_tol`` of one interval from the actual peak.  Closing
    the loop on the decoder's state keeps placement errors bounded instead of
    letting them accumulate between updates.
    """
    if template is None:
        raise ValidationError("gemrem requires a learned template")
    if hr_tol < 0 or morph_tol < 0:
        raise ValidationError("hr_tol and morph_tol must be >= 0")
    truth = detect_beats(sig)
    peaks = truth.r_peaks
    if peaks.size < 2:
        raise ValidationError("need at least two beats to encode")

    n = len(sig)
    fs = sig.fs
    regions = _beat_regions(peaks, n)
    rendered = render_beats_on_canvas(template, peaks, n, fs)

    predicted = _quantize_rr(template.reference_rr)
    decoder_peak = int(round(predicted * fs / 2))
    updates: list[tuple[int, float]] = []
    escapes: list[tuple[int, np.ndarray]] = []
    for i, (lo, hi) in enumerate(regions):
        if i < peaks.size - 1:
            actual_next = int(peaks[i + 1])
            projected = decoder_peak + int(round(predicted * fs))
            if abs(projected - actual_next) > hr_tol * predicted * fs:
                rr_q = max(
                    _quantize_rr((actual_next - decoder_peak) / fs), RR_QUANTUM_S
                )
                updates.append((i, rr_q))
                predicted = rr_q
                decoder_peak += int(round(predicted * fs))
            else:
                decoder_peak = projected
        rms = float(np.sqrt(np.mean((sig.samples[lo:hi] - rendered[lo:hi]) ** 2)))
        if rms > morph_tol:
            escapes.append((i, sig.samples[lo:hi].copy()))
    return GemremStream(
        template, tuple(updates), tuple(escapes), n_beats=int(peaks.size)
    )


def gemrem_decode(stream: GemremStream, n: int, fs: float) -> SampledSignal:
    """Re-synthesize the signal a stream describes.

    Replays the RR predictor to place beats (the first R sits half an RR
    interval in), renders the template at each local RR, and splices raw
    escapes verbatim over their beat regions.
    """
    if n <= 0:
        raise ValidationError(f"n must be positive, got {n}")
    updates = dict(stream.updates)
    predicted = _quantize_rr(stream.template.reference_rr)
    # The anchor depends only on the header; updates shift intervals, and an
    # update at beat 0 absorbs any anchor offset into the first interval.
    peaks = [int(round(predicted * fs / 2))]
    beat = 0
    while True:
        if beat in updates:
            predicted = updates[beat]
        nxt = peaks[-1] + int(round(predicted * fs))
        if nxt >= n:
            break
        peaks.append(nxt)
        beat += 1
    peaks_arr = np.asarray(peaks, dtype=np.int64)
    out = render_beats_on_canvas(stream.template, peaks_arr, n, fs)
    regions = _beat_regions(peaks_arr, n)
    for beat_idx, samples in stream.escapes:
        if beat_idx >= len(regions):
            continue
        lo, hi = regions[beat_idx]
        take = min(hi - lo, len(samples))
        out[lo:lo + take] = samples[:take]
    return SampledSignal(out, fs)
