import numpy as np
import pytest

from gencs import SyntheticEcgSpec, ValidationError, synthesize_ecg


def test_zero_jitter_periodic_peaks():
    spec = SyntheticEcgSpec(duration=10.0, fs=200.0, mean_hr=60.0, seed=0)
    sig, truth = synthesize_ecg(spec)
    assert len(sig) == 2000
    assert len(truth) == 10
    np.testing.assert_array_equal(truth.r_peaks, 100 + 200 * np.arange(10))


def test_determinism_same_seed():
    spec = SyntheticEcgSpec(
        duration=10.0, fs=200.0, mean_hr=72.0, hr_jitter=0.05, noise_std=0.02, seed=1
    )
    sig_a, truth_a = synthesize_ecg(spec)
    sig_b, truth_b = synthesize_ecg(spec)
    np.testing.assert_array_equal(sig_a.samples, sig_b.samples)
    np.testing.assert_array_equal(truth_a.r_peaks, truth_b.r_peaks)


def test_different_seeds_differ():
    base = dict(duration=10.0, fs=200.0, mean_hr=60.0, hr_jitter=0.05)
    sig_a, _ = synthesize_ecg(SyntheticEcgSpec(seed=1, **base))
    sig_b, _ = synthesize_ecg(SyntheticEcgSpec(seed=2, **base))
    assert not np.array_equal(sig_a.samples, sig_b.samples)


def test_rr_jitter_statistics_match_rng_draws():
    # Oracle: the drawn RR intervals have std 0.05 s = 10 samples at 200 Hz.
    spec = SyntheticEcgSpec(duration=310.0, fs=200.0, mean_hr=60.0, hr_jitter=0.05, seed=7)
    _, truth = synthesize_ecg(spec)
    assert len(truth) >= 300
    rr_std_samples = np.std(np.diff(truth.r_peaks))
    assert abs(rr_std_samples - 10.0) <= 2.0


def test_peaks_are_local_maxima(clean_10s):
    sig, truth = clean_10s
    x = sig.samples
    for p in truth.r_peaks:
        lo, hi = max(0, p - 1), min(len(x), p + 2)
        window_max = np.argmax(x[max(0, p - 5):min(len(x), p + 6)]) + max(0, p - 5)
        assert abs(window_max - p) <= 1


def test_noise_added_after_clean_render():
    base = dict(duration=10.0, fs=200.0, mean_hr=60.0, seed=3)
    clean, _ = synthesize_ecg(SyntheticEcgSpec(noise_std=0.0, **base))
    noisy, _ = synthesize_ecg(SyntheticEcgSpec(noise_std=0.05, **base))
    resid = noisy.samples - clean.samples
    assert 0.03 < np.std(resid) < 0.07


@pytest.mark.parametrize(
    "field,kwargs",
    [
        ("mean_hr", dict(mean_hr=10.0)),
        ("mean_hr", dict(mean_hr=500.0)),
        ("hr_jitter", dict(hr_jitter=-0.1)),
        ("noise_std", dict(noise_std=-1.0)),
        ("fs", dict(fs=-200.0)),
        ("duration", dict(duration=0.1)),
    ],
)
def test_invalid_spec_names_field(field, kwargs):
    base = dict(duration=10.0, fs=200.0, mean_hr=60.0)
    base.update(kwargs)
    with pytest.raises(ValidationError) as err:
        SyntheticEcgSpec(**base).validate()
    assert field in str(err.value) or "duration" in str(err.value)
