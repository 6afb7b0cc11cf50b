import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wfcrack import params_from_eta, derive_params, ElasticHalfPlane

settings.register_profile(
    "wfcrack",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("wfcrack")


@pytest.fixture(scope="session")
def params():
    """eta = 0.5 with nu+ = 0.2, nu- = 0.3 (mu+ = 1, mu- = 3)."""
    return params_from_eta(0.5, 0.2, 0.3)


@pytest.fixture(scope="session")
def same():
    m = ElasticHalfPlane(1.0, 0.3)
    return derive_params(m, m)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


ROOT_2_OVER_PI = math.sqrt(2.0 / math.pi)


VERDICTS = {}


def record_verdict(number: int, ok: bool, detail: str):
    """Store one acceptance line; printed in the terminal summary."""
    VERDICTS[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(VERDICTS[number])


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
