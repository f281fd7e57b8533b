import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pdmosc.params import OscParams

settings.register_profile("pdmosc", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pdmosc")


@pytest.fixture
def p_alpha1():
    return OscParams(1.0, 1.0, 0.0)


@pytest.fixture
def p_const():
    return OscParams(1.0, 0.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES = {}


def record_acceptance(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
