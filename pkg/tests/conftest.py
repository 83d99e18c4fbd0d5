import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from entcomm.qcore import PureState

# SDP-backed properties are slow per example
settings.register_profile(
    "entcomm",
    max_examples=15,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("entcomm")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def trine():
    """Three real qubit states at 120 degrees."""
    angles = [0.0, 2 * np.pi / 3, 4 * np.pi / 3]
    return [PureState([np.cos(a / 2), np.sin(a / 2)]).density() for a in angles]

