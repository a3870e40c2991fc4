import numpy as np
import pytest

from gencs import (
    SampledSignal,
    ValidationError,
    bernoulli_matrix,
    effective_matrix,
    measure,
)
from gencs.qrsfilter import FilterMatrix, bandstop_cascade, filter_matrix


def test_single_entry_is_unit():
    phi = bernoulli_matrix(1, 1, seed=9)
    assert phi.entries.shape == (1, 1)
    assert abs(phi.entries[0, 0]) == 1.0


def test_deterministic_in_seed():
    a = bernoulli_matrix(32, 64, seed=42)
    b = bernoulli_matrix(32, 64, seed=42)
    np.testing.assert_array_equal(a.entries, b.entries)


def test_entries_are_balanced():
    phi = bernoulli_matrix(128, 256, seed=7)
    frac_positive = np.mean(phi.entries > 0)
    assert 0.45 <= frac_positive <= 0.55


def test_entry_magnitudes():
    phi = bernoulli_matrix(50, 64, seed=0)
    np.testing.assert_allclose(np.abs(phi.entries), 1 / np.sqrt(50))


def test_invalid_shapes_rejected():
    with pytest.raises(ValidationError):
        bernoulli_matrix(0, 4, seed=0)
    with pytest.raises(ValidationError):
        bernoulli_matrix(5, 4, seed=0)


def test_measure_zero():
    phi = bernoulli_matrix(8, 16, seed=1)
    y = measure(phi, np.zeros(16))
    np.testing.assert_array_equal(y.values, 0.0)


def test_measure_unit_vector_picks_column():
    phi = bernoulli_matrix(8, 16, seed=2)
    e5 = np.zeros(16)
    e5[5] = 1.0
    y = measure(phi, e5)
    np.testing.assert_array_equal(y.values, phi.entries[:, 5])


def test_measure_matches_row_dot_products():
    phi = bernoulli_matrix(32, 64, seed=3)
    x = np.random.default_rng(5).standard_normal(64)
    y = measure(phi, SampledSignal(x, 200.0))
    naive = np.array([float(row @ x) for row in phi.entries])
    np.testing.assert_allclose(y.values, naive, atol=1e-12)


def test_measure_length_mismatch():
    phi = bernoulli_matrix(8, 16, seed=1)
    with pytest.raises(ValidationError):
        measure(phi, np.zeros(15))


def test_effective_matrix_identity_filter():
    phi = bernoulli_matrix(16, 64, seed=4)
    ident = FilterMatrix(np.eye(64), "canonical")
    np.testing.assert_array_equal(effective_matrix(phi, ident), phi.entries)


def test_effective_matrix_two_step_equivalence():
    phi = bernoulli_matrix(16, 64, seed=4)
    F = filter_matrix(64)
    A0 = effective_matrix(phi, F)
    x = np.random.default_rng(6).standard_normal(64)
    np.testing.assert_allclose(A0 @ x, phi.entries @ (F.entries @ x), atol=1e-9)


def test_effective_matrix_impulse_hits_cascade_response():
    phi = bernoulli_matrix(16, 64, seed=4)
    F = filter_matrix(64)
    A0 = effective_matrix(phi, F)
    x = np.zeros(64)
    x[0] = 1.0
    h = bandstop_cascade(SampledSignal(x, 200.0)).samples
    np.testing.assert_allclose(A0 @ x, phi.entries @ h, atol=1e-9)


def test_effective_matrix_dimension_mismatch():
    phi = bernoulli_matrix(16, 128, seed=4)
    with pytest.raises(ValidationError):
        effective_matrix(phi, filter_matrix(64))
