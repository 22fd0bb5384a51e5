"""Approximating laws, exact Wiener-Hopf factors and CDF recovery.

Two families approximate the laws of ``S`` (supremum) and ``-I`` (negated
infimum) of the killed process:

* :class:`GammaConvolution`, MGF ``prod_i (1 - z/beta_i)^(-alpha_i)``
* :class:`ExponentialMixture`, MGF ``sum_i omega_i eta_i / (eta_i - z)``

The exact factors are evaluated from their Thorin representation by
tanh-sinh quadrature in double precision, and CDFs are recovered by the
fixed-Talbot inverse Laplace transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
from mpmath import mp

from .errors import BranchError, ConvergenceError, DomainError
from .factorization import Side, SpectralMeasure, thorin_measure
from .nig_core import DEFAULT_TOL, NigParams
from .quadrature import tanh_sinh_quadrature

__all__ = [
    "GammaConvolution",
    "ExponentialMixture",
    "gc_mgf",
    "me_mgf",
    "me_cdf",
    "me_density",
    "exact_factor",
    "ExactFactor",
    "tanh_sinh_quadrature",
    "laplace_invert_cdf",
]


@dataclass(frozen=True)
class GammaConvolution:
    """Finite convolution of gamma laws with shapes ``alpha`` and rates ``beta``.

    Entries may be mpf (as produced by the Padé engine) or floats.
    """

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        if len(self.alpha) != len(self.beta) or not self.alpha:
            raise DomainError("need matching, non-empty alpha and beta")
        if any(b <= 0 for b in self.beta) or any(a <= 0 for a in self.alpha):
            raise DomainError("gamma convolution needs positive shapes and rates")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def components(self):
        return list(zip(self.alpha, self.beta))

    def cumulant(self, k: int):
        """k-th cumulant ``(k-1)! sum alpha_i beta_i^{-k}``."""
        return mpmath.factorial(k - 1) * mpmath.fsum(a * mp.mpf(b) ** -k for a, b in self.components)

    def to_dict(self, digits: int = 17) -> dict:
        return {
            "alpha": [mpmath.nstr(a, digits) for a in self.alpha],
            "beta": [mpmath.nstr(b, digits) for b in self.beta],
        }


@dataclass(frozen=True)
class ExponentialMixture:
    """Finite mixture of exponential laws, weights ``omega`` and rates ``eta``.

    Components are kept sorted by increasing rate.
    """

    omega: tuple
    eta: tuple

    def __post_init__(self):
        if len(self.omega) != len(self.eta) or not self.omega:
            raise DomainError("need matching, non-empty omega and eta")
        if any(e <= 0 for e in self.eta) or any(w <= 0 for w in self.omega):
            raise DomainError("exponential mixture needs positive weights and rates")
        order = sorted(range(len(self.eta)), key=lambda i: self.eta[i])
        object.__setattr__(self, "omega", tuple(self.omega[i] for i in order))
        object.__setattr__(self, "eta", tuple(self.eta[i] for i in order))

    @property
    def n(self) -> int:
        return len(self.omega)

    @property
    def components(self):
        return list(zip(self.omega, self.eta))

    def raw_moment(self, k: int):
        """``E[Y^k] = k! sum omega_i eta_i^{-k}``."""
        return mpmath.factorial(k) * mpmath.fsum(w * mp.mpf(e) ** -k for w, e in self.components)

    def cumulant(self, k: int):
        """k-th cumulant via the moment-cumulant recursion."""
        mu = [self.raw_moment(j) for j in range(k + 1)]
        kap = [mp.zero] * (k + 1)
        for j in range(1, k + 1):
            kap[j] = mu[j] - mpmath.fsum(mpmath.binomial(j - 1, i - 1) * kap[i] * mu[j - i] for i in range(1, j))
        return kap[k]

    def to_dict(self, digits: int = 17) -> dict:
        return {
            "omega": [mpmath.nstr(w, digits) for w in self.omega],
            "eta": [mpmath.nstr(e, digits) for e in self.eta],
        }


def gc_mgf(g: GammaConvolution, z, continuation: bool = False):
    """MGF of a gamma convolution, principal powers.

    With ``continuation`` the analytic continuation off the real ray
    ``[min beta, inf)`` is returned (needed on inversion contours).

    Raises
    ------
    DomainError
        If ``Re(z)`` is not below the smallest rate (or, with
        ``continuation``, if ``z`` lies on the cut).
    """
    z = mp.mpmathify(z)
    on_cut = mpmath.im(z) == 0 and mpmath.re(z) >= min(g.beta)
    if on_cut or (not continuation and mpmath.re(z) >= min(g.beta)):
        raise DomainError("z outside the strip of convergence")
    out = mp.one
    for a, b in g.components:
        out *= (1 - z / b) ** (-a)
    return out


def me_mgf(e: ExponentialMixture, z):
    """MGF of a finite exponential mixture (meromorphic, poles at the rates)."""
    z = mp.mpmathify(z)
    if any(z == eta for eta in e.eta):
        raise DomainError("z coincides with a rate")
    return mpmath.fsum(w * eta / (eta - z) for w, eta in e.components)


def _as_arrays(e: ExponentialMixture):
    return np.array([float(w) for w in e.omega]), np.array([float(x) for x in e.eta])


def me_cdf(e: ExponentialMixture, x):
    """``sum omega_i (1 - exp(-eta_i x))``; vectorized over ``x >= 0``."""
    w, eta = _as_arrays(e)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("me_cdf needs x >= 0")
    return np.sum(w * -np.expm1(-np.multiply.outer(x, eta)), axis=-1)


def me_density(e: ExponentialMixture, x):
    """``sum omega_i eta_i exp(-eta_i x)``; vectorized over ``x >= 0``."""
    w, eta = _as_arrays(e)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("me_density needs x >= 0")
    return np.sum(w * eta * np.exp(-np.multiply.outer(x, eta)), axis=-1)


class ExactFactor:
    """Wiener-Hopf factor evaluated from its Thorin representation.

    ``PLUS`` gives ``E[exp(z S)]``, ``MINUS`` gives ``E[exp(z I)]`` so that the
    product of the two equals ``q / (q - psi_X(z))``.  Quadrature runs in
    double precision with step ``h`` and truncation ``p``.
    """

    def __init__(self, p: NigParams, q=0, side=Side.PLUS, h: float = 2.0**-7, prec: int = 60, tol: float = DEFAULT_TOL):
        self.side = Side(side)
        self.measure: SpectralMeasure = thorin_measure(p, q, self.side, tol)
        self.h = h
        self.prec = prec
        lo = min(
            [float(at.location) for at in self.measure.atoms]
            + ([float(self.measure.template()[3])] if self.measure.has_density else [])
        )
        self.radius = lo

    def log(self, z) -> complex:
        """``log E[exp(w Y)]`` with ``Y = S`` or ``-I`` and ``w = z`` or ``-z``."""
        w = complex(z) if self.side is Side.PLUS else -complex(z)
        if w.imag == 0 and w.real >= self.radius:
            raise BranchError(f"z={z} lies on the support ray of the Thorin measure")
        # log(u/(u-w)) = -log1p(-w/u); principal branch is continuous off the ray
        return complex(self.measure.integrate(lambda u: -np.log1p(-w / u + 0j), self.h, self.prec))

    def __call__(self, z) -> complex:
        return complex(np.exp(self.log(z)))


def exact_factor(p: NigParams, q, side, z, h: float = 2.0**-7, prec: int = 60) -> complex:
    """One-shot evaluation of :class:`ExactFactor`."""
    return ExactFactor(p, q, side, h, prec)(z)


def laplace_invert_cdf(mgf_evaluator, x_grid, degree: int | None = None, eps: float = 1e-6) -> list:
    """CDF of a non-negative variable from its MGF, by fixed-Talbot inversion.

    The transform inverted is ``F(s) = mgf(-s) / s``.

    Parameters
    ----------
    mgf_evaluator : callable
        ``z -> E[exp(z Y)]``, accepting complex arguments with ``Re(z) > 0``
        and returning complex or mpc.  Must be analytic off the positive real
        ray where its singularities lie.
    x_grid : iterable of float
        Points ``x > 0``; ``x == 0`` returns 0.
    degree : int, optional
        Number of Talbot nodes.  Defaults to 24, adequate for double-precision
        evaluators (larger values amplify evaluator round-off).
    eps : float
        Values outside ``[-eps, 1 + eps]`` are rejected before clamping.

    Raises
    ------
    ConvergenceError
        If an inverted value is non-finite or outside the tolerance band.
    """
    M = degree or 24
    out = []
    with mp.workdps(max(mp.dps, 15)):
        for x in x_grid:
            x = float(x)
            if x < 0:
                raise DomainError("CDF grid must be non-negative")
            if x == 0:
                out.append(0.0)
                continue
            v = mpmath.invertlaplace(lambda s: mp.mpmathify(mgf_evaluator(-s)) / s, x, method="talbot", degree=M)
            v = float(mpmath.re(v))
            if not np.isfinite(v) or v < -eps or v > 1 + eps:
                raise ConvergenceError(f"inversion at x={x} gave {v}")
            out.append(min(1.0, max(0.0, v)))
    return out
