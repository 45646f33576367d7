import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qtfa.grid import GridSpec

settings.register_profile(
    "qtfa", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("qtfa")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_grid():
    return GridSpec(1, 16, 6.0)


@pytest.fixture
def default_grid():
    return GridSpec(1, 32, 8.0)


def random_quaternions(rng, shape):
    return rng.standard_normal(tuple(shape) + (4,))


def pytest_terminal_summary(terminalreporter):
    # verdict lines printed during the run are swallowed by output capture
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
