import sys
from fractions import Fraction

import mpmath
import pytest

from smoothdiv.ball import mpf_to_fraction

ORACLE_DPS = 120
# slack for the oracle's own rounding; far below any ball radius at 128 bits
ORACLE_EPS = Fraction(1, 10**100)


def to_fraction(v) -> Fraction:
    return mpf_to_fraction(mpmath.mpf(v)._mpf_)


def encloses(ball, value) -> bool:
    """True when the ball contains an mpmath reference value computed at ORACLE_DPS."""
    q = to_fraction(value)
    return ball.lower_fraction() - ORACLE_EPS <= q <= ball.upper_fraction() + ORACLE_EPS


@pytest.fixture
def hp():
    """mpmath context at oracle precision."""
    with mpmath.workdps(ORACLE_DPS):
        yield mpmath.mp


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
