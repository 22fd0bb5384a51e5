"""Exact negative moments of the Thorin measures.

Every continuous Thorin density has the shape

    (A x + B) / (prod_i (x - p_i) * sqrt((x - C)(x - R))),   x > R,

with at most two poles.  Its negative moments reduce, by partial fractions,
to the integrals

    J_k = int_R^inf x^{-k} / sqrt((x - C)(x - R)) dx
    G(J) = int_R^inf 1 / ((x - J) sqrt((x - C)(x - R))) dx

which have closed forms (arctan / log antiderivatives and a three-term
recursion in ``k``).  No numerical quadrature is involved.

The ``J_k`` recursion and the partial-fraction coefficients both grow like
``(R/|C|)^k`` and ``(R/|p|)^k`` before cancelling, so all arithmetic is done
with guard digits on top of the requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, factorial

import mpmath
from mpmath import mp

from .errors import DomainError
from .factorization import SpectralMeasure

__all__ = [
    "MomentSequence",
    "PartialFractionCoeffs",
    "stieltjes_power_integral",
    "stieltjes_power_integrals",
    "pole_integral_real",
    "pole_integral_complex",
    "partial_fraction_coeffs",
    "negative_moment",
    "negative_moments",
    "cumulants_to_moments",
    "moment_sequence",
]


@dataclass
class MomentSequence:
    """Negative moments ``m_k`` of a Thorin measure and derived quantities.

    ``kappa_cum[k-1]`` is the k-th cumulant ``(k-1)! m_k`` and ``mu_raw[k]``
    the k-th raw moment (``mu_raw[0] == 1``).
    """

    m: list
    kappa_cum: list = field(default_factory=list)
    mu_raw: list = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.m)

    def __post_init__(self):
        if not self.kappa_cum:
            self.kappa_cum = [factorial(k - 1) * mk for k, mk in enumerate(self.m, start=1)]


@dataclass
class PartialFractionCoeffs:
    """``(Ax+B)/(x^k (x-D)(x-E)) = sum_j a1[k-j]/x^j + (a21 x + a20)/((x-D)(x-E))``."""

    a1: list
    a20: object
    a21: object


def _check_CR(C, R):
    if not C < 0 < R:
        raise DomainError(f"need C < 0 < R, got C={C}, R={R}")


def stieltjes_power_integrals(K: int, C, R) -> list:
    """``[J_1, ..., J_K]`` with ``J_k = int_R^inf x^{-k} ((x-C)(x-R))^{-1/2} dx``.

    Evaluated from the arctan antiderivative and the standard reduction
    formula for ``int dx / (x^k sqrt(a + b x + x^2))`` with ``a = C R < 0``.
    Runs at the ambient precision; callers needing high ``K`` should add
    roughly ``K log10(R/|C|)`` guard digits when ``R > |C|``.
    """
    C = mp.mpf(C)
    R = mp.mpf(R)
    _check_CR(C, R)
    a = C * R
    b = -(C + R)
    sa = mpmath.sqrt(-a)
    out = []
    if K < 1:
        return out
    j1 = (mpmath.atan(b / (2 * sa)) + mp.pi / 2) / sa
    out.append(j1)
    if K >= 2:
        out.append(-1 / a - b / (2 * a) * j1)
    for k in range(3, K + 1):
        jk = -(2 * k - 3) * b / (2 * (k - 1) * a) * out[-1] - (k - 2) / ((k - 1) * a) * out[-2]
        out.append(jk)
    return out


def stieltjes_power_integral(k: int, C, R):
    """Single ``J_k``; see :func:`stieltjes_power_integrals`."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return stieltjes_power_integrals(k, C, R)[-1]


def pole_integral_real(J, C, R):
    """``int_R^inf dx / ((x - J) sqrt((x - C)(x - R)))`` for real ``C < J < R``."""
    J = mp.mpf(J)
    C = mp.mpf(C)
    R = mp.mpf(R)
    if J >= R:
        raise DomainError("pole at or beyond the lower limit is not integrable")
    if not (C - J) * (R - J) < 0:
        raise DomainError("pole must lie strictly between C and R")
    return stieltjes_power_integrals(1, C - J, R - J)[0]


def pole_integral_complex(D, C, R):
    """Same integral for a non-real pole ``D``, via the Euler substitution sqrt(P) = x + t."""
    D = mp.mpc(D)
    if mpmath.im(D) == 0:
        raise DomainError("pole_integral_complex needs Im(D) != 0")
    C = mp.mpf(C)
    R = mp.mpf(R)
    _check_CR(C, R)
    s = mpmath.sqrt((D - C) * (D - R))
    rp = -D + s
    rm = -D - s
    top = -(C + R) / 2
    bot = -R
    return 2 / (rp - rm) * (mpmath.log(top - rp) + mpmath.log(bot - rm) - mpmath.log(top - rm) - mpmath.log(bot - rp))


def _pole_integral(p, C, R):
    if mpmath.im(p) == 0:
        return pole_integral_real(mpmath.re(p), C, R)
    return pole_integral_complex(p, C, R)


def _a1_sequence(A, B, D, E, n):
    """a_{1,0} .. a_{1,n-1}, with the convention a_{1,-1} = -A."""
    DE = D * E
    S = D + E
    a1 = []
    prev2, prev1 = None, None
    for j in range(n):
        if j == 0:
            v = B / DE
        elif j == 1:
            v = A / DE + B * S / DE**2
        else:
            v = (prev1 * S - prev2) / DE
        a1.append(v)
        prev2, prev1 = prev1, v
    return a1


def partial_fraction_coeffs(A, B, D, E, k: int) -> PartialFractionCoeffs:
    """Partial fraction coefficients of ``(Ax+B) / (x^k (x-D)(x-E))``.

    Raises
    ------
    DomainError
        If ``D`` or ``E`` is zero, or ``A = B = 0``.
    """
    if D == 0 or E == 0:
        raise DomainError("poles must be non-zero")
    if A == 0 and B == 0:
        raise DomainError("numerator must not vanish identically")
    if k < 1:
        raise DomainError("k must be >= 1")
    A, B, D, E = (mp.mpmathify(v) for v in (A, B, D, E))
    a1 = _a1_sequence(A, B, D, E, k)
    last = a1[k - 1]
    before = a1[k - 2] if k >= 2 else -A
    return PartialFractionCoeffs(a1=a1, a20=last * (D + E) - before, a21=-last)


def _guard_digits(K, C, R, poles):
    g = 0.0
    if abs(C) < R:
        g = max(g, K * math.log10(float(R / abs(C))))
    for p in poles:
        ap = float(abs(p))
        if 0 < ap < float(R):
            g = max(g, K * math.log10(float(R) / ap))
    return int(g) + 20


def _continuous_moments(A, B, C, R, poles, K):
    """m_1..m_K of the continuous part, at ambient precision."""
    zero_poles = sum(1 for p in poles if p == 0)
    poles = [p for p in poles if p != 0]
    n_max = K + zero_poles
    Js = stieltjes_power_integrals(n_max, C, R)

    def J(n):
        if n == 0:
            raise DomainError("moment integral diverges (x^0 / sqrt(P) at infinity)")
        return Js[n - 1]

    out = []
    if not poles:
        for k in range(1, K + 1):
            n = k + zero_poles
            val = B * J(n)
            if A != 0:
                val += A * J(n - 1)
            out.append(val)
        return out

    if len(poles) == 1:
        E = mp.mpc(poles[0])
        G = _pole_integral(E, C, R)
        # g(m) = int 1/(x^m (x-E) sqrt P) = E^-m G - sum_{j=1}^m E^{-(m-j+1)} J_j
        g = [G]
        acc = mp.mpc(0)
        Einv = 1 / E
        for m_ in range(1, n_max + 1):
            # acc_m = sum_{j=1}^m E^{-(m-j+1)} J_j = E^-1 (acc_{m-1} + J_m)
            acc = Einv * (acc + J(m_))
            g.append(Einv**m_ * G - acc)
        for k in range(1, K + 1):
            n = k + zero_poles
            val = B * g[n]
            if A != 0:
                val += A * g[n - 1]
            out.append(val)
        return [_realify(v) for v in out]

    D, E = mp.mpc(poles[0]), mp.mpc(poles[1])
    if D == E:
        if mpmath.im(D) != 0:
            raise DomainError("double pole must be real")
        GD = _pole_integral(D, C, R)
        Dr = mpmath.re(D)
        P0 = stieltjes_power_integrals(2, C - Dr, R - Dr)[1]
        P1 = Dr * P0 + GD
    else:
        GD = _pole_integral(D, C, R)
        GE = _pole_integral(E, C, R)
        P0 = (GD - GE) / (D - E)
        P1 = (D * GD - E * GE) / (D - E)
    a1 = _a1_sequence(A, B, D, E, n_max)
    for k in range(1, K + 1):
        n = k + zero_poles
        last = a1[n - 1]
        before = a1[n - 2] if n >= 2 else -A
        a21 = -last
        a20 = last * (D + E) - before
        val = sum(a1[n - j] * J(j) for j in range(1, n + 1)) + a21 * P1 + a20 * P0
        out.append(_realify(val))
    return out


def _realify(v):
    if isinstance(v, mpmath.mpc):
        scale = max(abs(v), mp.mpf(10) ** (-mp.dps))
        if abs(mpmath.im(v)) > scale * mp.mpf(10) ** (-mp.dps // 2):
            raise ArithmeticError(f"moment has non-negligible imaginary part: {v}")
        return mpmath.re(v)
    return v


def negative_moments(m: SpectralMeasure, K: int, precision: int | None = None) -> list:
    """``[m_1, ..., m_K]`` with ``m_k = int u^{-k} tau(du)``, in closed form.

    Parameters
    ----------
    m : SpectralMeasure
        A Thorin measure (plus side, or mirrored minus side).
    K : int
        Highest order.
    precision : int, optional
        Decimal digits of the result; defaults to the ambient ``mp.dps``.
        Guard digits are added internally.
    """
    if not m.is_thorin:
        raise DomainError("negative moments are defined for Thorin measures (positive half-line)")
    if K < 1:
        raise DomainError("K must be >= 1")
    if m.window is not None or m.scale != 1:
        raise DomainError("closed-form moments need the full measure; integrate Jordan parts numerically")
    dps = precision or mp.dps
    with mp.workdps(dps + 20):
        probe = m.template()
    A, B, C, R, poles = probe
    guard = _guard_digits(K + 2, C, R, poles) if m.has_density else 20
    with mp.workdps(dps + guard):
        mm = m.at_precision(dps + guard) if m.params is not None else m
        res = [mp.zero] * K
        if mm.has_density:
            A, B, C, R, poles = mm.template()
            res = _continuous_moments(A, B, C, R, poles, K)
        for at in mm.atoms:
            w = at.mass
            inv = 1 / at.location
            pw = mp.one
            for k in range(K):
                pw *= inv
                res[k] += w * pw
    with mp.workdps(dps):
        return [+v for v in res]


def negative_moment(m: SpectralMeasure, k: int, precision: int | None = None):
    """Single negative moment ``m_k``."""
    return negative_moments(m, k, precision)[k - 1]


def cumulants_to_moments(ms: MomentSequence) -> MomentSequence:
    """Fill ``mu_raw`` from the negative moments via the cumulant recursion."""
    m = ms.m
    K = len(m)
    mu = [mp.one]
    for k in range(1, K + 1):
        v = factorial(k - 1) * m[k - 1]
        for j in range(1, k):
            v += comb(k - 1, j - 1) * factorial(j - 1) * m[j - 1] * mu[k - j]
        mu.append(v)
    ms.mu_raw = mu
    return ms


def moment_sequence(m: SpectralMeasure, K: int, precision: int | None = None) -> MomentSequence:
    """Negative moments, cumulants and raw moments up to order ``K``."""
    dps = precision or mp.dps
    vals = negative_moments(m, K, dps)
    with mp.workdps(dps):
        return cumulants_to_moments(MomentSequence(vals))
