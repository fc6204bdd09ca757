import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from robinspec import domains, femrobin, trial

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def gallery():
    return domains.default_gallery()


@pytest.fixture(scope="session")
def mesh12():
    return femrobin.build_disk_mesh(12)


@pytest.fixture(scope="session")
def mesh20():
    return femrobin.build_disk_mesh(20)


def normalized_to_double_disk_area(domain):
    """Copy of the domain dilated to area 2*pi (the comparison chain's
    natural normalization)."""
    return domains.scale_coeffs(domain, math.sqrt(2.0 * math.pi / domain.area))


@pytest.fixture(scope="session")
def limacon_ctx():
    """Trial context for the limaçon at alpha = -2*pi, area-normalized."""
    dom = normalized_to_double_disk_area(domains.make_domain([1.0, 0.3], name="limacon"))
    return trial.make_trial_context(dom, -2.0 * math.pi, n_rings=14)


@pytest.fixture(scope="session")
def disk_ctx():
    dom = domains.make_domain([1.0], name="disk")
    return trial.make_trial_context(dom, -2.0 * math.pi, n_rings=12)
