"""Shared parameter sets and hypothesis strategies."""

from fractions import Fraction as F

import pytest
from hypothesis import strategies as st

from nigwh.nig_core import NigParams

# (theta, sigma, kappa, mu) and killing rates of the reference parameter sets
SIGNED_SET = NigParams(-1, 1, 16, F(7, 32))
SIGNED_Q = F(19, 64)
CUMULANT_SET = NigParams(-1, 1, F(187, 64), -4)
CUMULANT_Q = 1
RUIN_PS1 = NigParams(-1, 2, 1, F(3, 2))
RUIN_PS2 = NigParams(-1, 2, F(1, 2), 4)


def random_params(draw_float):
    """Parameter tuple drawn from the box used by the property tests."""
    return (
        draw_float(-2.0, 2.0),
        draw_float(0.2, 2.0),
        draw_float(0.1, 3.0),
        draw_float(-3.0, 3.0),
        draw_float(0.05, 3.0),
    )


@st.composite
def nig_with_q(draw):
    """A valid ``(NigParams, q)`` pair with ``q > 0``."""
    fl = lambda lo, hi: draw(st.floats(lo, hi, allow_nan=False, allow_infinity=False))  # noqa: E731
    th, s, k, mu, q = random_params(fl)
    return NigParams(th, s, k, mu), q


@pytest.fixture
def signed_set():
    return SIGNED_SET, SIGNED_Q


@pytest.fixture
def cumulant_set():
    return CUMULANT_SET, CUMULANT_Q


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
