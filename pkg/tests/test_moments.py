from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from mpmath import mp

from conftest import CUMULANT_Q, CUMULANT_SET, SIGNED_SET, SIGNED_Q, nig_with_q
from nigwh.errors import DomainError
from nigwh.factorization import Side, jordan_decomposition, omega_measure, thorin_measure
from nigwh.moments import (
    MomentSequence,
    cumulants_to_moments,
    moment_sequence,
    negative_moment,
    negative_moments,
    partial_fraction_coeffs,
    pole_integral_complex,
    pole_integral_real,
    stieltjes_power_integral,
    stieltjes_power_integrals,
)
from nigwh.nig_core import characteristic_roots
from nigwh.validation import quadrature_moment_oracle


def _quad(f, R):
    return mpmath.quad(f, [R, R + 1, R + 10, mp.inf])


def test_first_integral_arctan_form():
    with mp.workdps(40):
        R, C = characteristic_roots(SIGNED_SET)
        s = mpmath.sqrt(-R * C)
        ref = (mpmath.atan(-(R + C) / (2 * s)) + mp.pi / 2) / s
        assert abs(stieltjes_power_integral(1, C, R) - ref) < mp.mpf(10) ** -35


def test_power_integral_against_quadrature():
    with mp.workdps(30):
        C, R = mp.mpf(-2), mp.mpf(1)
        ref = _quad(lambda x: x**-3 / mpmath.sqrt((x - C) * (x - R)), R)
        assert abs(stieltjes_power_integral(3, C, R) / ref - 1) < 1e-12


def test_power_integrals_small_C_recursion():
    with mp.workdps(30):
        C, R = mp.mpf("-0.01"), mp.mpf(3)
        Js = stieltjes_power_integrals(6, C, R)
        for k in (1, 4, 6):
            ref = _quad(lambda x: x**-k / mpmath.sqrt((x - C) * (x - R)), R)
            assert abs(Js[k - 1] / ref - 1) < 1e-12


def test_real_pole_integral():
    with mp.workdps(30):
        ref = _quad(lambda x: 1 / ((x + mp.mpf("0.5")) * mpmath.sqrt((x + 1) * (x - 1))), 1)
        assert abs(pole_integral_real(-0.5, -1, 1) / ref - 1) < 1e-12


def test_complex_pole_integral():
    with mp.workdps(30):
        D = mp.mpc("0.3", "0.4")
        ref = _quad(lambda x: 1 / ((x - D) * mpmath.sqrt((x + 1) * (x - 1))), 1)
        assert abs(pole_integral_complex(D, -1, 1) / ref - 1) < 1e-12


def test_domain_checks():
    with pytest.raises(DomainError):
        stieltjes_power_integral(1, 1, 2)
    with pytest.raises(DomainError):
        pole_integral_real(2, -1, 1)
    with pytest.raises(DomainError):
        pole_integral_complex(0.5, -1, 1)
    with pytest.raises(DomainError):
        partial_fraction_coeffs(1, 1, 0, 2, 1)


@pytest.mark.parametrize("D,E", [(2.5, -1.5), (mp.mpc(1, 2), mp.mpc(1, -2)), (0.7, 0.7)])
@pytest.mark.parametrize("k", [1, 2, 5])
def test_partial_fractions_reassemble(D, E, k):
    A, B = mp.mpf("1.25"), mp.mpf("-0.5")
    with mp.workdps(30):
        pf = partial_fraction_coeffs(A, B, D, E, k)
        D, E = mp.mpmathify(D), mp.mpmathify(E)
        for x in (2, 3, 5, 7, 11):
            x = mp.mpf(x)
            lhs = (A * x + B) / (x**k * (x - D) * (x - E))
            rhs = sum(pf.a1[k - j] / x**j for j in range(1, k + 1))
            rhs += (pf.a21 * x + pf.a20) / ((x - D) * (x - E))
            assert abs(lhs - rhs) < mp.mpf(10) ** -25


def test_first_cumulant_identity():
    mp_ = negative_moment(thorin_measure(CUMULANT_SET, CUMULANT_Q, Side.PLUS), 1, 30)
    mm_ = negative_moment(thorin_measure(CUMULANT_SET, CUMULANT_Q, Side.MINUS), 1, 30)
    assert abs(mp_ - mm_ + 5) < mp.mpf(10) ** -25


def test_signed_measure_against_quadrature():
    t = thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS)
    ms = negative_moments(t, 10, 30)
    for k in range(1, 11):
        oracle = quadrature_moment_oracle(t, k, dps=30)
        assert abs(oracle / float(ms[k - 1]) - 1) < 1e-10


def test_signed_measure_jordan_assembly():
    t = thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS)
    pair = jordan_decomposition(t)
    for k in (1, 3):
        g = lambda u: u ** (-float(k))  # noqa: E731
        assembled = pair.positive_part.integrate(g) - pair.negative_part.integrate(g)
        assert abs(assembled / float(negative_moment(t, k)) - 1) < 1e-10


def test_rejects_non_thorin_and_parts():
    with pytest.raises(DomainError):
        negative_moments(omega_measure(CUMULANT_SET, CUMULANT_Q, Side.MINUS), 3)
    pair = jordan_decomposition(thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS))
    with pytest.raises(DomainError):
        negative_moments(pair.positive_part, 3)


def test_first_raw_moment_equals_first_negative_moment():
    ms = moment_sequence(thorin_measure(CUMULANT_SET, CUMULANT_Q, Side.PLUS), 4, 40)
    assert ms.mu_raw[1] == ms.m[0]
    with mp.workdps(40):
        assert abs(ms.kappa_cum[2] - 2 * ms.m[2]) < mp.mpf(10) ** -38 * abs(ms.m[2])


def test_single_gamma_moments():
    alpha, beta = F(3, 2), F(2)
    with mp.workdps(30):
        a, b = mp.mpf(3) / 2, mp.mpf(2)
        ms = cumulants_to_moments(MomentSequence([a / b**k for k in range(1, 5)]))
        # raw moments of Gamma(alpha, beta): alpha (alpha+1)...(alpha+k-1) / beta^k
        for k in range(1, 5):
            ref = mpmath.rf(a, k) / b**k
            assert abs(ms.mu_raw[k] - ref) < mp.mpf(10) ** -25
    assert float(alpha / beta) == float(ms.mu_raw[1])


def test_precision_is_honoured():
    t = thorin_measure(CUMULANT_SET, CUMULANT_Q, Side.PLUS)
    lo = negative_moments(t, 15, 30)
    hi = negative_moments(t, 15, 80)
    with mp.workdps(80):
        for a, b in zip(lo, hi):
            assert abs(a / b - 1) < mp.mpf(10) ** -28


@settings(max_examples=12, deadline=None)
@given(nig_with_q())
def test_closed_form_matches_quadrature(pq):
    p, q = pq
    for side in Side:
        t = thorin_measure(p, q, side)
        ms = negative_moments(t, 8, 30)
        for k in (1, 8):
            oracle = quadrature_moment_oracle(t, k, dps=30)
            assert abs(oracle - float(ms[k - 1])) <= 1e-10 * abs(float(ms[k - 1]))


@settings(max_examples=30, deadline=None)
@given(nig_with_q())
def test_ggc_moments_positive_and_log_convex(pq):
    p, q = pq
    for side in Side:
        t = thorin_measure(p, q, side)
        ms = [float(v) for v in negative_moments(t, 6, 30)]
        if jordan_decomposition(t).negative_is_empty:
            assert all(v > 0 for v in ms)
            # Cauchy-Schwarz: m_k^2 <= m_{k-1} m_{k+1}
            assert all(ms[i] ** 2 <= ms[i - 1] * ms[i + 1] * (1 + 1e-12) for i in range(1, 5))
        assert np.all(np.isfinite(ms))
