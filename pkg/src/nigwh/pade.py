"""[n-1/n] Padé approximants at high precision and their partial fractions.

For a Thorin measure the series of the CGF derivative (coefficients
``m_{k+1}``) and of the MGF (coefficients ``mu_k / k!``) are Stieltjes-type,
so their ``[n-1/n]`` approximants have real simple poles beyond the radius
of convergence.  The partial fractions of the first give a gamma
convolution, those of the second a finite exponential mixture.

The Hankel systems involved are badly conditioned, so everything here runs
at a working precision of ``P`` decimal digits (default 500).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath
import numpy as np
from mpmath import mp

from .distributions import ExponentialMixture, GammaConvolution
from .errors import (
    ConvergenceError,
    DomainError,
    NegativeWeightError,
    NonPositiveResidueError,
    NotGGCError,
    SingularSystemError,
)
from .factorization import SpectralMeasure, is_ggc, support_infimum
from .moments import MomentSequence, moment_sequence

DEFAULT_PRECISION = 500

__all__ = [
    "DEFAULT_PRECISION",
    "PadeSource",
    "PadeApproximant",
    "pade_n_minus_1_n",
    "polynomial_roots",
    "gamma_convolution_from_cgf",
    "exp_mixture_from_mgf",
    "gamma_convolution",
    "exp_mixture",
]


class PadeSource(str, enum.Enum):
    CGF_DERIV = "cgf_deriv"
    MGF = "mgf"
    OTHER = "other"


@dataclass
class PadeApproximant:
    """``P(z)/Q(z)`` with ``numer = [a_0..a_{n-1}]`` and ``denom = [1, b_1..b_n]``."""

    numer: list
    denom: list
    n: int
    source: PadeSource = PadeSource.OTHER

    def __call__(self, z):
        return mpmath.polyval(self.numer[::-1], z) / mpmath.polyval(self.denom[::-1], z)

    def residual(self, c) -> list:
        """Taylor coefficients 0..2n-1 of ``P - f Q``."""
        out = []
        for j in range(2 * self.n):
            fq = mpmath.fsum(self.denom[i] * c[j - i] for i in range(min(j, self.n) + 1))
            a = self.numer[j] if j < self.n else 0
            out.append(a - fq)
        return out


def _solve(A, rhs):
    """Gaussian elimination with partial pivoting at the ambient precision."""
    n = len(rhs)
    M = [list(row) + [r] for row, r in zip(A, rhs)]
    scale = max((abs(x) for row in A for x in row), default=mp.zero)
    if scale == 0:
        raise SingularSystemError("Hankel matrix is zero")
    tiny = scale * mp.mpf(10) ** (-(mp.dps - 5))
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[piv][col]) <= tiny:
            raise SingularSystemError(
                f"Hankel matrix numerically singular at {mp.dps} digits (column {col}); increase precision or lower n"
            )
        M[col], M[piv] = M[piv], M[col]
        pr = M[col]
        inv = 1 / pr[col]
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f:
                row = M[r]
                for j in range(col, n + 1):
                    row[j] -= f * pr[j]
    x = [mp.zero] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - mpmath.fsum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return x


def pade_n_minus_1_n(c, n: int, source: PadeSource = PadeSource.OTHER) -> PadeApproximant:
    """[n-1/n] Padé approximant of ``sum c_k z^k`` at the ambient precision.

    The denominator solves the order conditions
    ``sum_{i=1}^n c_{n+r-i} b_i = -c_{n+r}`` for ``r = 0..n-1``, which use
    ``c_0..c_{2n-1}``; further coefficients are ignored.  The numerator is
    ``a_j = sum_{i=0}^j b_i c_{j-i}``.

    Raises
    ------
    SingularSystemError
        If the Hankel system is numerically singular.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if len(c) < 2 * n:
        raise DomainError(f"need {2 * n} Taylor coefficients, got {len(c)}")
    c = [mp.mpf(x) for x in c[: 2 * n]]
    A = [[c[n + r - i] for i in range(1, n + 1)] for r in range(n)]
    rhs = [-c[n + r] for r in range(n)]
    b = [mp.one] + _solve(A, rhs)
    a = [mpmath.fsum(b[i] * c[j - i] for i in range(j + 1)) for j in range(n)]
    return PadeApproximant(a, b, n, source)


def _aberth(coeffs, seeds, maxiter: int = 500):
    """Aberth-Ehrlich iteration; ``coeffs`` highest degree first.

    A root is frozen once ``|p(z)|`` falls to the round-off level of Horner's
    rule, ``eps * sum |c_i| |z|^(n-i)``, or its update stops mattering.
    """
    z = [mp.mpc(s) for s in seeds]
    n = len(z)
    dcoeffs = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    acoeffs = [abs(c) for c in coeffs]
    eps = mp.mpf(10) ** (-(mp.dps - 5))
    done = [False] * n
    for _ in range(maxiter):
        for i in range(n):
            if done[i]:
                continue
            pz = mpmath.polyval(coeffs, z[i])
            if abs(pz) <= 8 * eps * mpmath.polyval(acoeffs, abs(z[i])):
                done[i] = True
                continue
            ratio = pz / mpmath.polyval(dcoeffs, z[i])
            s = mpmath.fsum(1 / (z[i] - z[j]) for j in range(n) if j != i)
            w = ratio / (1 - ratio * s)
            z[i] -= w
            if abs(w) <= eps * abs(z[i]):
                done[i] = True
        if all(done):
            return z
    raise ConvergenceError(f"Aberth iteration did not converge at {mp.dps} digits")


def _seeds(coeffs):
    """Double-precision starting points; coeffs highest degree first."""
    n = len(coeffs) - 1
    try:
        with np.errstate(all="ignore"):
            r = np.roots([complex(c) for c in coeffs])
        if len(r) == n and np.all(np.isfinite(r)):
            # Aberth needs distinct starting points
            r = r + 1e-9 * (np.abs(r).max() + 1) * np.exp(1j * (np.arange(n) + 0.5))
            return list(r)
    except (np.linalg.LinAlgError, OverflowError, ValueError):
        pass
    rad = float(max(abs(c) for c in coeffs[1:]) / abs(coeffs[0])) + 1
    return [rad * np.exp(2j * np.pi * (k + 0.25) / n) for k in range(n)]


def polynomial_roots(q) -> list:
    """All roots of ``q_0 + q_1 z + ... + q_n z^n`` at the ambient precision.

    The roots are found for the reversed polynomial (roots ``1/z``), which is
    bounded for the denominators met here, then inverted.  Real roots come
    back with zero imaginary part when the imaginary part is below
    ``10^{-dps/2}`` relative.

    Raises
    ------
    ConvergenceError
        If the simultaneous iteration fails.
    """
    q = [mp.mpf(x) if not isinstance(x, mpmath.mpc) else x for x in q]
    while len(q) > 1 and q[-1] == 0:
        q = q[:-1]
    n = len(q) - 1
    if n < 1:
        return []
    if q[0] == 0:
        raise DomainError("zero root; polynomial must have q_0 != 0")
    # reversed polynomial w^n q(1/w) = q_0 w^n + q_1 w^{n-1} + ... + q_n, highest first
    rev = [x / q[0] for x in q]
    w = _aberth(rev, _seeds(rev))
    tol = mp.mpf(10) ** (-(mp.dps // 2))
    out = []
    for wi in w:
        zi = 1 / wi
        if abs(mpmath.im(zi)) <= tol * abs(zi):
            zi = mp.mpc(mpmath.re(zi), 0)
        out.append(zi)
    out.sort(key=lambda x: (abs(x), mpmath.im(x)))
    # polish against the original polynomial
    hi = q[::-1]
    if any(abs(mpmath.polyval(hi, r)) > mp.mpf(10) ** (-(mp.dps // 2)) * max(abs(x) for x in q) * max(1, abs(r)) ** n for r in out):
        raise ConvergenceError("root residual too large")
    return out


def _real_poles(pa: PadeApproximant, R, what: str):
    roots = polynomial_roots(pa.denom)
    tol = mp.mpf(10) ** (-(mp.dps // 2))
    poles = []
    for r in roots:
        if abs(mpmath.im(r)) > tol * abs(r):
            raise ConvergenceError(f"{what}: non-real pole {mpmath.nstr(r, 10)}; precision exhausted or measure not Stieltjes")
        poles.append(mpmath.re(r))
    if R is not None:
        low = min(poles)
        if low < mp.mpf(R) * (1 - mp.mpf("1e-8")):
            raise ConvergenceError(f"{what}: pole {mpmath.nstr(low, 10)} inside the radius {mpmath.nstr(R, 10)}")
    return sorted(poles)


def _derivative(poly):
    return [i * poly[i] for i in range(1, len(poly))]


def gamma_convolution_from_cgf(
    mom: MomentSequence,
    n: int,
    R=None,
    precision: int | None = None,
    measure: SpectralMeasure | None = None,
) -> GammaConvolution:
    """Gamma convolution from the [n-1/n] approximant of the CGF derivative.

    Uses ``c_k = m_{k+1}``; shapes are ``alpha_i = -P(beta_i)/Q'(beta_i)``.
    The moments should carry at least ``precision`` digits.

    Raises
    ------
    NotGGCError
        If ``measure`` is given and is not non-negative.
    NonPositiveResidueError
        If a shape comes out non-positive.
    """
    if measure is not None and not is_ggc(measure):
        raise NotGGCError("Thorin measure has a negative part; use the exponential mixture instead")
    if mom.K < 2 * n:
        raise DomainError(f"need {2 * n} negative moments, have {mom.K}")
    with mp.workdps(precision or mp.dps):
        pa = pade_n_minus_1_n(mom.m[: 2 * n], n, PadeSource.CGF_DERIV)
        betas = _real_poles(pa, R, "gamma convolution")
        dq = _derivative(pa.denom)
        alphas = []
        for b in betas:
            a = -mpmath.polyval(pa.numer[::-1], b) / mpmath.polyval(dq[::-1], b)
            if not a > 0:
                raise NonPositiveResidueError(f"shape {mpmath.nstr(a, 10)} at rate {mpmath.nstr(b, 10)}")
            alphas.append(a)
        return GammaConvolution(tuple(alphas), tuple(betas))


def exp_mixture_from_mgf(
    mom: MomentSequence,
    n: int,
    R=None,
    precision: int | None = None,
) -> ExponentialMixture:
    """Exponential mixture from the [n-1/n] approximant of the MGF.

    Uses ``c_k = mu_k / k!``; weights are ``omega_i = -P(eta_i)/(eta_i Q'(eta_i))``.

    Raises
    ------
    NegativeWeightError
        If a weight comes out non-positive.
    """
    if len(mom.mu_raw) < 2 * n:
        raise DomainError(f"need raw moments up to order {2 * n - 1}")
    with mp.workdps(precision or mp.dps):
        c = [mom.mu_raw[k] / mpmath.factorial(k) for k in range(2 * n)]
        pa = pade_n_minus_1_n(c, n, PadeSource.MGF)
        etas = _real_poles(pa, R, "exponential mixture")
        dq = _derivative(pa.denom)
        omegas = []
        for e in etas:
            w = -mpmath.polyval(pa.numer[::-1], e) / (e * mpmath.polyval(dq[::-1], e))
            if not w > 0:
                raise NegativeWeightError(f"weight {mpmath.nstr(w, 10)} at rate {mpmath.nstr(e, 10)}")
            omegas.append(w)
        return ExponentialMixture(tuple(omegas), tuple(etas))


def gamma_convolution(m: SpectralMeasure, n: int, precision: int = DEFAULT_PRECISION) -> GammaConvolution:
    """Moments plus Padé plus partial fractions for a Thorin measure."""
    if not is_ggc(m):
        raise NotGGCError("Thorin measure has a negative part; use the exponential mixture instead")
    mom = moment_sequence(m, 2 * n, precision)
    with mp.workdps(precision):
        R = support_infimum(m)
    return gamma_convolution_from_cgf(mom, n, R, precision)


def exp_mixture(m: SpectralMeasure, n: int, precision: int = DEFAULT_PRECISION) -> ExponentialMixture:
    """Moments plus Padé plus partial fractions, mixture form."""
    mom = moment_sequence(m, 2 * n - 1, precision)
    with mp.workdps(precision):
        R = support_infimum(m)
    return exp_mixture_from_mgf(mom, n, R, precision)
