"""Pytest configuration and fixtures."""

import pytest
from hypothesis import HealthCheck, settings

from apps.core.tolerances import Tolerances
from apps.geometry.kernel import Surface

# Property checks run geometry that is slow to set up; keep them at desk scale.
settings.register_profile(
    "kp",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kp")


@pytest.fixture
def tol():
    """Default tolerances, independent of environment overrides."""
    return Tolerances()


@pytest.fixture(params=list(Surface), ids=lambda s: s.value)
def surface(request):
    """Run a test once per surface."""
    return request.param
