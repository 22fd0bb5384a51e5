import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nigwh.errors import NonFiniteError
from nigwh.moments import stieltjes_power_integral
from nigwh.quadrature import integrate_half_line, tanh_sinh_nodes, tanh_sinh_quadrature


def test_nodes_symmetric_and_weights_sum_to_two():
    x, dl, dr, w = tanh_sinh_nodes()
    assert np.allclose(x, -x[::-1])
    assert abs(w.sum() - 2) < 1e-14
    assert np.allclose(dl + dr, 2)


def test_endpoint_singularity_arcsine():
    val = tanh_sinh_quadrature(lambda x, dl, dr: 1 / np.sqrt(dl * dr), complements=True)
    assert abs(val - math.pi) < 1e-12


def test_log_singularity():
    # int_{-1}^{1} log(1 - x) dx = 2 log 2 - 2
    val = tanh_sinh_quadrature(lambda x, dl, dr: np.log(dr), complements=True)
    assert abs(val - (2 * math.log(2) - 2)) < 1e-12


def test_half_line_matches_arctan_closed_form():
    C, R = -1.3, 2.0
    val = integrate_half_line(lambda u, ur: 1 / (u * np.sqrt((u - C) * ur)), R)
    assert abs(val - float(stieltjes_power_integral(1, C, R))) < 1e-12 * abs(val)


def test_interior_non_finite_raises():
    with pytest.raises(NonFiniteError):
        with np.errstate(divide="ignore"):
            tanh_sinh_quadrature(lambda x: 1 / x)


def test_half_line_rejects_non_positive_edge():
    with pytest.raises(ValueError):
        integrate_half_line(lambda u, ur: u, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 6.0))
def test_polynomials_integrated_exactly(k):
    n = int(k)
    exact = 0.0 if n % 2 else 2.0 / (n + 1)
    assert abs(tanh_sinh_quadrature(lambda x: x**n) - exact) < 1e-13
