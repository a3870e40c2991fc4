import numpy as np
import pytest

from gencs import ValidationError, WaveletBasis, dwt_matrix


def test_haar_two_point():
    W = dwt_matrix(WaveletBasis("haar", 1, 2))
    np.testing.assert_allclose(W, np.array([[1, 1], [1, -1]]) / np.sqrt(2))


@pytest.mark.parametrize("family", ["haar", "daubechies4"])
@pytest.mark.parametrize("n,levels", [(8, 3), (64, 5), (512, 5), (512, 2)])
def test_orthonormality(family, n, levels):
    W = dwt_matrix(WaveletBasis(family, levels, n))
    assert np.max(np.abs(W.T @ W - np.eye(n))) < 1e-10


def test_db4_roundtrip():
    basis = WaveletBasis("daubechies4", 5, 64)
    W = dwt_matrix(basis)
    x = np.random.default_rng(1).standard_normal(64)
    np.testing.assert_allclose(W @ (W.T @ x), x, atol=1e-9)


def test_non_power_of_two_rejected():
    with pytest.raises(ValidationError, match="power of two"):
        WaveletBasis("haar", 2, 400)


def test_excessive_levels_rejected():
    with pytest.raises(ValidationError):
        WaveletBasis("haar", 7, 64)


def test_unknown_family_rejected():
    with pytest.raises(ValidationError):
        WaveletBasis("symlet", 2, 64)
