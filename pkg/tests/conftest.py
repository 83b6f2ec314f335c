import math
import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from eigenmoment import ModelSpace, lambda1_sandwich, space_form_warping  # noqa: E402

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def model(b, m, R):
    return ModelSpace(m, space_form_warping(b), R)


@lru_cache(maxsize=None)
def sandwich(b, m, R, tol=1e-4, N=4097, k_max=200):
    return lambda1_sandwich(model(b, m, R), tol, k_max, N=N)


@pytest.fixture
def ball3():
    return model(0.0, 3, 1.0)


@pytest.fixture
def disk():
    return model(0.0, 2, 1.0)


@pytest.fixture
def hemisphere():
    return model(1.0, 2, math.pi / 2)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
