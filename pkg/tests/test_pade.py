from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from mpmath import mp

from conftest import CUMULANT_Q, CUMULANT_SET, SIGNED_SET, SIGNED_Q, RUIN_PS1, RUIN_PS2, nig_with_q
from nigwh.errors import DomainError, NotGGCError, SingularSystemError
from nigwh.factorization import Side, is_ggc, support_infimum, thorin_measure
from nigwh.moments import moment_sequence
from nigwh.pade import exp_mixture, gamma_convolution, pade_n_minus_1_n, polynomial_roots


def test_cubic_roots_recovered():
    with mp.workdps(50):
        # (z-1)(z-2)(z-3) = -6 + 11 z - 6 z^2 + z^3
        roots = polynomial_roots([-6, 11, -6, 1])
        for r, ref in zip(roots, (1, 2, 3)):
            assert abs(r - ref) < mp.mpf(10) ** -30


def test_complex_roots_recovered():
    with mp.workdps(50):
        roots = polynomial_roots([5, -2, 1])  # 1 +- 2i
        assert all(abs(r - mp.mpc(1, s)) < mp.mpf(10) ** -30 for r, s in zip(roots, (-2, 2)))


def test_rational_function_reproduced():
    # f(z) = (1 + z) / ((1 - z/2)(1 - z/3)) is its own [1/2] approximant
    with mp.workdps(50):
        f = lambda z: (1 + z) / ((1 - z / 2) * (1 - z / 3))  # noqa: E731
        c = mpmath.taylor(f, 0, 3)
        pa = pade_n_minus_1_n(c, 2)
        assert all(abs(r) < mp.mpf(10) ** -40 for r in pa.residual(c))
        assert abs(pa(mp.mpf("0.7")) - f(mp.mpf("0.7"))) < mp.mpf(10) ** -40
        assert abs(pa.denom[1] + mp.mpf(5) / 6) < mp.mpf(10) ** -40


def test_singular_hankel_raises():
    with mp.workdps(50):
        with pytest.raises(SingularSystemError):
            pade_n_minus_1_n([1, 1, 1, 1], 2)  # 1/(1-z) has rank-one Hankel matrix


def test_too_few_coefficients():
    with pytest.raises(DomainError):
        pade_n_minus_1_n([1, 2, 3], 2)


def test_gamma_convolution_rejects_signed_measure():
    with pytest.raises(NotGGCError):
        gamma_convolution(thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS), 3, 100)


def test_mixture_for_signed_measure_exists():
    e = exp_mixture(thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS), 4, 100)
    # MGF equals 1 at the origin, so the weights sum to one
    assert all(w > 0 for w in e.omega)
    assert abs(sum(e.omega) - 1) < 1e-12


def test_ruin_set1_n15_table_values():
    e = exp_mixture(thorin_measure(RUIN_PS1, 0, Side.MINUS), 15)
    assert abs(e.eta[0] - mp.mpf("0.16")) < 5e-18
    assert mpmath.nstr(e.omega[0], 17) == "0.73382714607669872"


def test_ruin_set2_n50_smallest_rate():
    e = exp_mixture(thorin_measure(RUIN_PS2, 0, Side.MINUS), 50)
    assert mpmath.nstr(e.eta[0], 17) == "0.50000120963128605"


def test_poles_beyond_radius():
    for side in Side:
        t = thorin_measure(CUMULANT_SET, CUMULANT_Q, side)
        R = support_infimum(t)
        g = gamma_convolution(t, 5)
        e = exp_mixture(t, 5)
        assert min(g.beta) >= R * (1 - 1e-8)
        assert min(e.eta) >= R * (1 - 1e-8)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_moment_matching_cumulant_set(n):
    for side in Side:
        t = thorin_measure(CUMULANT_SET, CUMULANT_Q, side)
        ms = moment_sequence(t, 2 * n - 1, 100)
        g = gamma_convolution(t, n, 100)
        e = exp_mixture(t, n, 100)
        with mp.workdps(100):
            for k in range(1, 2 * n):
                assert abs(g.cumulant(k) / ms.kappa_cum[k - 1] - 1) < mp.mpf(10) ** -60
                assert abs(e.cumulant(k) / ms.kappa_cum[k - 1] - 1) < mp.mpf(10) ** -60


@settings(max_examples=15, deadline=None)
@given(nig_with_q())
def test_moment_matching_random(pq):
    p, q = pq
    n = 3
    for side in Side:
        t = thorin_measure(p, q, side)
        ms = moment_sequence(t, 2 * n - 1, 120)
        e = exp_mixture(t, n, 120)
        with mp.workdps(120):
            for k in range(1, 2 * n):
                assert abs(e.cumulant(k) / ms.kappa_cum[k - 1] - 1) < mp.mpf(10) ** -12
            assert all(w > 0 for w in e.omega) and abs(sum(e.omega) - 1) < mp.mpf(10) ** -12
        if is_ggc(t):
            g = gamma_convolution(t, n, 120)
            with mp.workdps(120):
                for k in range(1, 2 * n):
                    assert abs(g.cumulant(k) / ms.kappa_cum[k - 1] - 1) < mp.mpf(10) ** -12
