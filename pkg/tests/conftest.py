import numpy as np
import pytest

from gencs import SyntheticEcgSpec, default_template, synthesize_ecg


@pytest.fixture(scope="session")
def clean_10s():
    """Zero-jitter, zero-noise 10 s recording at HR 60."""
    spec = SyntheticEcgSpec(duration=10.0, fs=200.0, mean_hr=60.0, seed=1)
    return synthesize_ecg(spec)


@pytest.fixture(scope="session")
def jittered_60s():
    """60 s recording with 5 % RR jitter, the default benchmark texture."""
    spec = SyntheticEcgSpec(
        duration=60.0, fs=200.0, mean_hr=60.0, hr_jitter=0.05, seed=1
    )
    return synthesize_ecg(spec)


@pytest.fixture(scope="session")
def template():
    return default_template()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
