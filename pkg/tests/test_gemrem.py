import numpy as np
import pytest

from gencs import (
    SampledSignal,
    SyntheticEcgSpec,
    ValidationError,
    default_template,
    gemrem_decode,
    gemrem_encode,
    stream_bits,
    synthesize_ecg,
)
from gencs.gemrem import detect_beats, header_bits


def model_exact(duration=30.0, jitter=0.0, seed=5, hr=60.0):
    spec = SyntheticEcgSpec(
        duration=duration, fs=200.0, mean_hr=hr, hr_jitter=jitter, seed=seed
    )
    return synthesize_ecg(spec)


def test_constant_hr_is_header_only(template):
    sig, _ = model_exact()
    stream = gemrem_encode(sig, template)
    assert len(stream.updates) == 0
    assert len(stream.escapes) == 0


def test_round_trip_constant_hr(template):
    sig, truth = model_exact()
    stream = gemrem_encode(sig, template)
    decoded = gemrem_decode(stream, len(sig), 200.0)
    peaks = detect_beats(decoded).r_peaks
    assert len(peaks) == len(truth.r_peaks)
    assert np.all(np.abs(peaks - truth.r_peaks) <= 1)


def test_round_trip_jittered_keeps_peaks_in_tolerance(template):
    sig, truth = model_exact(duration=60.0, jitter=0.05, seed=2)
    stream = gemrem_encode(sig, template)
    decoded = gemrem_decode(stream, len(sig), 200.0)
    peaks = detect_beats(decoded).r_peaks
    # Placement error is bounded by hr_tol of one interval (plus rounding).
    for t in truth.r_peaks[1:-1]:
        assert np.min(np.abs(peaks - t)) <= int(0.02 * 1.2 * 200) + 2


def test_header_only_stream_decodes_constant_hr(template):
    from gencs.gemrem import GemremStream

    stream = GemremStream(template)
    decoded = gemrem_decode(stream, 2000, 200.0)
    peaks = detect_beats(decoded).r_peaks
    np.testing.assert_array_equal(np.diff(peaks), 200)


def test_hr_ramp_updates_bounded(template):
    from gencs.template import render_beats_on_canvas

    fs = 200.0
    t, peaks = 0.5, []
    while t < 60.0:
        peaks.append(int(round(t * fs)))
        hr = 60.0 + 30.0 * min(t / 60.0, 1.0)
        t += 60.0 / hr
    canvas = render_beats_on_canvas(template, np.array(peaks), int(60 * fs), fs)
    stream = gemrem_encode(SampledSignal(canvas, fs), template, hr_tol=0.02)
    assert 0 < len(stream.updates) <= stream.n_beats
    assert len(stream.escapes) == 0


def test_artifact_causes_exactly_one_escape(template):
    sig, truth = model_exact()
    corrupted = sig.samples.copy()
    beat = truth.r_peaks[4]
    corrupted[beat + 20:beat + 28] += 0.5  # 40 ms square artifact
    stream = gemrem_encode(SampledSignal(corrupted, 200.0), template)
    assert len(stream.escapes) == 1
    assert len(stream.updates) == 0


def test_escape_samples_spliced_verbatim(template):
    sig, truth = model_exact()
    corrupted = sig.samples.copy()
    beat = truth.r_peaks[4]
    corrupted[beat + 20:beat + 28] += 0.5
    stream = gemrem_encode(SampledSignal(corrupted, 200.0), template)
    decoded = gemrem_decode(stream, len(sig), 200.0)
    escape_beat, samples = stream.escapes[0]
    # The escape payload appears verbatim in the decoded output.
    hits = np.flatnonzero(np.isclose(decoded.samples, samples[0]))
    found = any(
        np.allclose(decoded.samples[h:h + len(samples)], samples)
        for h in hits
        if h + len(samples) <= len(decoded)
    )
    assert found


def test_unlearned_template_rejected():
    sig, _ = model_exact()
    with pytest.raises(ValidationError):
        gemrem_encode(sig, None)


def test_stream_bits_accounting(template):
    sig, truth = model_exact(duration=60.0, jitter=0.05, seed=2)
    stream = gemrem_encode(sig, template)
    total, payload = stream_bits(stream)
    expected_payload = 16 * len(stream.updates) + sum(
        32 + 12 * len(s) for _, s in stream.escapes
    )
    assert payload == expected_payload
    assert total == payload + header_bits(template)
    assert header_bits(template) == 32 * (template.gaussians.size + 2)


def test_model_exact_cr_at_least_30(template):
    sig, _ = model_exact(duration=60.0)
    stream = gemrem_encode(sig, template)
    total, _ = stream_bits(stream)
    cr = len(sig) * 12 / total
    assert cr >= 30.0
