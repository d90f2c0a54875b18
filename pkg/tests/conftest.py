import math

import pytest
from hypothesis import settings

from gscqc.optimizer import optimize_params

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def optimum():
    return optimize_params(2 * math.pi, 1)


@pytest.fixture(scope="session")
def opt_params(optimum):
    return optimum.params


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
