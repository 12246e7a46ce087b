import math
from functools import lru_cache

import pytest

from funnelzeta.hyperbolic import make_surface
from funnelzeta.zetacore import CoefficientTable

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@lru_cache(maxsize=None)
def table_for(b: float, n_max: int = 14) -> CoefficientTable:
    return CoefficientTable.build(make_surface(b), n_max)


@pytest.fixture(scope="session")
def table4():
    return table_for(4.0)


@pytest.fixture(scope="session")
def table6():
    return table_for(6.0)


@pytest.fixture(scope="session")
def table_3pi():
    return table_for(1.5 * math.pi)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
