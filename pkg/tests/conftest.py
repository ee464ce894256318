import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cavity_ququart.models import SystemParams

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def transfer_params():
    return SystemParams.reference_transfer()


@pytest.fixture(scope="session")
def mismatch_params():
    return SystemParams.reference_mismatch()
