"""The NIG Levy process: Laplace exponent, distinguished roots, case labels.

The process is Brownian motion with drift ``theta`` and diffusion ``sigma``
time-changed by an inverse Gaussian subordinator of unit mean rate and
variance ``kappa``, plus a linear drift ``mu``.  Its Laplace exponent is

    psi(z) = 1/kappa - sqrt(1 - 2 kappa theta z - kappa sigma^2 z^2)/kappa + mu z

which is analytic on C minus (-inf, rho_hat] U [rho, inf).

All arithmetic runs in :mod:`mpmath` at the ambient ``mp.dps``; wrap calls in
``mp.workdps(...)`` for more digits.  Parameters may be given as ints,
floats or :class:`fractions.Fraction`; rationals are converted exactly at
whatever precision is active.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import mpmath
from mpmath import mp

from .errors import DomainError, PoleError

DEFAULT_TOL = 1e-12


def to_mpf(x) -> mpmath.mpf:
    """Convert an int/float/Fraction/mpf to mpf at the current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


@dataclass(frozen=True)
class NigParams:
    """Parameters ``(theta, sigma, kappa, mu)`` of an NIG process."""

    theta: Real
    sigma: Real
    kappa: Real
    mu: Real

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")

    def as_mp(self):
        """Return ``(theta, sigma, kappa, mu)`` as mpf at the current precision."""
        return tuple(to_mpf(v) for v in (self.theta, self.sigma, self.kappa, self.mu))

    @property
    def mean(self):
        """E[X_1] = theta + mu."""
        return self.theta + self.mu


class PlusCase(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"


class MinusCase(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class CaseLabel:
    plus_case: PlusCase
    minus_case: MinusCase

    def __str__(self):
        return f"{self.plus_case.value}-{self.minus_case.value}"


@dataclass(frozen=True)
class RootSet:
    """Roots of p(z) and of the associated quadratic p(z) = r(z)^2."""

    rho: mpmath.mpf
    rho_hat: mpmath.mpf
    zeta: mpmath.mpc
    zeta_hat: mpmath.mpc
    d: mpmath.mpf
    zeta_solves: bool
    zeta_hat_solves: bool

    @property
    def real(self) -> bool:
        return mpmath.im(self.zeta) == 0


def _p(theta, sigma, kappa, z):
    return 1 - 2 * kappa * theta * z - kappa * sigma**2 * z**2


def laplace_exponent(p: NigParams, z):
    """Principal-branch Laplace exponent psi_X(z).

    Real ``z`` inside (rho_hat, rho) gives an mpf; anything else an mpc.
    """
    theta, sigma, kappa, mu = p.as_mp()
    arg = _p(theta, sigma, kappa, mp.mpmathify(z))
    val = 1 / kappa - mpmath.sqrt(arg) / kappa + mu * z
    return val


def laplace_exponent_derivative(p: NigParams, z):
    """psi_X'(z) = (theta + sigma^2 z) / sqrt(p(z)) + mu."""
    theta, sigma, kappa, mu = p.as_mp()
    z = mp.mpmathify(z)
    return (theta + sigma**2 * z) / mpmath.sqrt(_p(theta, sigma, kappa, z)) + mu


def characteristic_roots(p: NigParams):
    """Zeros ``(rho, rho_hat)`` of p(z) = 1 - 2 kappa theta z - kappa sigma^2 z^2."""
    theta, sigma, kappa, _ = p.as_mp()
    s = mpmath.sqrt(theta**2 + sigma**2 / kappa)
    return (-theta + s) / sigma**2, (-theta - s) / sigma**2


def _discriminant(theta, sigma, kappa, mu, q):
    return theta**2 + mu**2 - 2 * theta * mu * (q * kappa - 1) + q * sigma**2 * (2 - q * kappa)


def _is_real(z, tol):
    return abs(mpmath.im(z)) <= tol * max(1, abs(z))


def _solves(p: NigParams, q, z0, rho, rho_hat, d, tol) -> bool:
    if not _is_real(z0, tol) or not d > 0:
        return False
    x = mpmath.re(z0)
    if x == 0:
        return False
    scale = max(1, abs(rho), abs(rho_hat))
    if not (rho_hat - tol * scale <= x <= rho + tol * scale):
        return False
    _, _, kappa, mu = p.as_mp()
    lhs = q - 1 / kappa
    rhs = mu * x
    return lhs <= rhs + tol * max(1, abs(lhs), abs(rhs))


def zeta_roots(p: NigParams, q=0, tol: float = DEFAULT_TOL) -> RootSet:
    """Compute rho, rho_hat, zeta(q), zeta_hat(q) and which of the latter solve psi_X = q.

    At ``q == 0`` the quadratic roots are ``{0, -2(theta+mu)/(kappa mu^2 + sigma^2)}``
    and the zero root goes to ``zeta`` when ``theta + mu > 0``.
    """
    if q < 0:
        raise DomainError(f"killing rate must be non-negative, got {q}")
    theta, sigma, kappa, mu = p.as_mp()
    qm = to_mpf(q)
    rho, rho_hat = characteristic_roots(p)
    denom = kappa * mu**2 + sigma**2
    if q == 0:
        d = (theta + mu) ** 2
        other = -2 * (theta + mu) / denom
        if theta + mu > 0:
            zeta, zeta_hat = mp.mpf(0), other
        else:
            zeta, zeta_hat = other, mp.mpf(0)
        zeta, zeta_hat = mp.mpc(zeta), mp.mpc(zeta_hat)
    else:
        d = _discriminant(theta, sigma, kappa, mu, qm)
        sd = mpmath.sqrt(d) if d >= 0 else mp.mpc(0, mpmath.sqrt(-d))
        centre = -theta - mu + kappa * mu * qm
        zeta = mp.mpc((centre + sd) / denom)
        zeta_hat = mp.mpc((centre - sd) / denom)
    zs = _solves(p, qm, zeta, rho, rho_hat, d, tol)
    zhs = _solves(p, qm, zeta_hat, rho, rho_hat, d, tol)
    # a solving zeta must be positive, a solving zeta_hat negative
    zs = zs and mpmath.re(zeta) > 0
    zhs = zhs and mpmath.re(zeta_hat) < 0
    return RootSet(rho, rho_hat, zeta, zeta_hat, d, zs, zhs)


def is_solution(p: NigParams, q, z0, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``z0`` (one of zeta, zeta_hat) satisfies psi_X(z0) = q.

    Uses the algebraic criterion: z0 real, z0 in [rho_hat, 0) U (0, rho],
    d > 0 and q - 1/kappa <= mu z0.
    """
    theta, sigma, kappa, mu = p.as_mp()
    rho, rho_hat = characteristic_roots(p)
    qm = to_mpf(q)
    d = (theta + mu) ** 2 if q == 0 else _discriminant(theta, sigma, kappa, mu, qm)
    return _solves(p, qm, mp.mpmathify(z0), rho, rho_hat, d, tol)


def classify_case(p: NigParams, q=0, tol: float = DEFAULT_TOL, roots: RootSet | None = None) -> CaseLabel:
    """Case label (I/II/III, A/B/C) selecting the form of the spectral measures."""
    r = roots if roots is not None else zeta_roots(p, q, tol)
    if _is_real(r.zeta, tol) and abs(mpmath.re(r.zeta) - r.rho) <= tol * max(1, abs(r.rho)):
        plus = PlusCase.III
    elif r.zeta_solves:
        plus = PlusCase.II
    else:
        plus = PlusCase.I
    if _is_real(r.zeta_hat, tol) and abs(mpmath.re(r.zeta_hat) - r.rho_hat) <= tol * max(1, abs(r.rho_hat)):
        minus = MinusCase.C
    elif r.zeta_hat_solves:
        minus = MinusCase.B
    else:
        minus = MinusCase.A
    return CaseLabel(plus, minus)


def count_solutions(p: NigParams, q, tol: float = DEFAULT_TOL) -> int:
    r = zeta_roots(p, q, tol)
    return int(r.zeta_solves) + int(r.zeta_hat_solves)


def phi_q(p: NigParams, q, z):
    """Logarithmic derivative psi_X'(z) / (q - psi_X(z)) of the law of X at an exp(q) time."""
    denom = to_mpf(q) - laplace_exponent(p, z)
    if abs(denom) <= mp.eps * max(1, abs(to_mpf(q))):
        raise PoleError(f"q - psi_X(z) vanishes at z={z}")
    return laplace_exponent_derivative(p, z) / denom
