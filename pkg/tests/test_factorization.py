from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from mpmath import mp

from conftest import CUMULANT_Q, CUMULANT_SET, SIGNED_SET, SIGNED_Q, RUIN_PS1, RUIN_PS2, nig_with_q
from nigwh.errors import DomainError
from nigwh.factorization import (
    Family,
    Side,
    abc_constants,
    crossover_rational,
    is_ggc,
    jordan_decomposition,
    levy_density,
    omega_measure,
    radius_of_convergence,
    support_infimum,
    thorin_measure,
)
from nigwh.nig_core import NigParams, characteristic_roots, zeta_roots


def test_crossover_is_exact_rational():
    assert crossover_rational(SIGNED_SET, SIGNED_Q) == F(127, 8)
    # floats enter at their exact binary value, which is the same here
    assert crossover_rational(NigParams(-1.0, 1.0, 16.0, 0.21875), 0.296875) == F(127, 8)


def test_crossover_none_when_slope_vanishes():
    # b = theta mu kappa + (q kappa - 1) sigma^2 = 0 for mu = 0, q = 1/kappa
    assert crossover_rational(NigParams(1, 1, 2, 0), F(1, 2)) is None


def test_signed_set_plus_measure_shape():
    m = omega_measure(SIGNED_SET, SIGNED_Q, Side.PLUS)
    assert m.family is Family.MU
    r = zeta_roots(SIGNED_SET, SIGNED_Q)
    assert len(m.atoms) == 1 and m.atoms[0].mass == 1
    assert abs(m.atoms[0].location - mpmath.re(r.zeta)) < 1e-14
    a, b, c = abc_constants(SIGNED_SET, SIGNED_Q)
    for u in (5, 20, 100):
        ref = a * (b * u - c) / (mp.pi * (u - r.zeta) * (u - r.zeta_hat) * mpmath.sqrt((u - r.rho) * (u - r.rho_hat)))
        assert abs(m.density(u) - mpmath.re(ref)) < 1e-15 * abs(ref)


def test_density_vanishes_off_support():
    m = omega_measure(SIGNED_SET, SIGNED_Q, Side.PLUS)
    rho, _ = characteristic_roots(SIGNED_SET)
    assert m.density(rho / 2) == 0


def test_degenerate_plus_is_half_atom_at_rho():
    p = NigParams(F(1, 2), 1, 2, 0)
    m = omega_measure(p, F(1, 2), Side.PLUS)
    assert m.family is Family.ATOMS_ONLY
    (atom,) = m.atoms
    assert atom.weight == F(1, 2)
    assert abs(atom.location - characteristic_roots(p)[0]) < 1e-15


def test_boundary_root_minus_side():
    m = omega_measure(RUIN_PS2, 0, Side.MINUS)
    assert m.family is Family.LAMBDA
    (atom,) = m.atoms
    assert atom.mass == -1 and abs(atom.location + 0.5) < 1e-15
    t = thorin_measure(RUIN_PS2, 0, Side.MINUS)
    assert t.atoms[0].mass == 1 and abs(t.atoms[0].location - 0.5) < 1e-15


def test_ruin_set_minus_atom():
    t = thorin_measure(RUIN_PS1, 0, Side.MINUS)
    assert any(abs(a.location - 0.16) < 1e-15 for a in t.atoms)


def test_radius_of_convergence():
    r = zeta_roots(SIGNED_SET, SIGNED_Q)
    assert abs(radius_of_convergence(SIGNED_SET, SIGNED_Q, Side.PLUS) - mpmath.re(r.zeta)) < 1e-15
    assert abs(radius_of_convergence(RUIN_PS2, 0, Side.MINUS) - 0.5) < 1e-15


def test_q0_rejects_side_with_infinite_extremum():
    # theta + mu > 0: the supremum is infinite, so the plus factor does not exist at q = 0
    with pytest.raises(DomainError):
        thorin_measure(RUIN_PS1, 0, Side.PLUS)


def test_signed_set_jordan_parts():
    t = thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS)
    pair = jordan_decomposition(t)
    rho, _ = characteristic_roots(SIGNED_SET)
    assert pair.crossover == mp.mpf(127) / 8
    lo, hi = pair.negative_part.window
    assert abs(lo - rho) < 1e-15 and hi == mp.mpf(127) / 8
    assert pair.positive_part.window == (mp.mpf(127) / 8, mp.inf)
    assert len(pair.positive_part.atoms) == 1
    assert not is_ggc(t)


def test_total_variation_matches_absolute_density():
    t = thorin_measure(SIGNED_SET, SIGNED_Q, Side.PLUS)
    pair = jordan_decomposition(t)
    one = lambda u: np.ones_like(u)  # noqa: E731
    tv = pair.positive_part.integrate(one) + pair.negative_part.integrate(one)
    with mp.workdps(30):
        rho, _ = characteristic_roots(SIGNED_SET)
        x0 = mp.mpf(127) / 8
        tt = t.at_precision(30)
        absint = mpmath.quad(lambda u: abs(tt.density(u)), [rho, rho + mp.mpf("1e-6"), 3, x0, 100, mp.inf])
    assert abs(tv - (1 + float(absint))) < 1e-12


def test_cumulant_set_is_ggc_both_sides():
    for side in Side:
        assert is_ggc(thorin_measure(CUMULANT_SET, CUMULANT_Q, side))


def test_levy_density_completely_monotone():
    t = thorin_measure(CUMULANT_SET, CUMULANT_Q, Side.PLUS)
    h = 1e-2
    for x in (0.5, 1.0, 2.0):
        f = [(x + j * h) * levy_density(t, x + j * h) for j in range(4)]
        d1 = f[1] - f[0]
        d2 = f[2] - 2 * f[1] + f[0]
        d3 = f[3] - 3 * f[2] + 3 * f[1] - f[0]
        assert f[0] > 0 and d1 < 0 and d2 > 0 and d3 < 0


def test_levy_density_sign_domain():
    t = thorin_measure(CUMULANT_SET, CUMULANT_Q, Side.PLUS)
    with pytest.raises(DomainError):
        levy_density(t, -1.0)


@settings(max_examples=40, deadline=None)
@given(nig_with_q())
def test_support_starts_at_radius(pq):
    p, q = pq
    for side in Side:
        t = thorin_measure(p, q, side)
        assert abs(support_infimum(t) - radius_of_convergence(p, q, side)) < 1e-12 * max(1, abs(support_infimum(t)))
        assert t.is_thorin


@settings(max_examples=40, deadline=None)
@given(nig_with_q())
def test_signed_iff_negative_part(pq):
    p, q = pq
    for side in Side:
        t = thorin_measure(p, q, side)
        pair = jordan_decomposition(t)
        neg_mass = pair.negative_part.integrate(lambda u: np.ones_like(u)) if not pair.negative_is_empty else 0.0
        assert is_ggc(t) == pair.negative_is_empty
        assert neg_mass >= 0
