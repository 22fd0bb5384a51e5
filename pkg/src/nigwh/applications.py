"""Ruin asymptotics under Cramér's condition and perpetual put prices."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .distributions import ExactFactor, ExponentialMixture
from .errors import DomainError
from .factorization import Side, thorin_measure
from .nig_core import NigParams, laplace_exponent, to_mpf, zeta_roots
from .pade import DEFAULT_PRECISION, exp_mixture

__all__ = ["RuinReport", "OptionQuote", "cramer_constant", "ruin_probability", "perpetual_put", "risk_neutral_drift", "RISK_NEUTRAL_TOL"]

RISK_NEUTRAL_TOL = 1e-5


@dataclass
class RuinReport:
    """Cramér exponent ``gamma``, constant ``C`` and optional mixture approximation."""

    gamma: float
    C: float
    me_approx: ExponentialMixture | None = None
    gamma_mp: object = field(default=None, repr=False)
    C_mp: object = field(default=None, repr=False)

    def asymptotic(self, x):
        """``C exp(-gamma x)``."""
        return self.C * math.exp(-self.gamma * x)

    def to_dict(self, digits: int = 17) -> dict:
        d = {
            "gamma": mpmath.nstr(self.gamma_mp if self.gamma_mp is not None else self.gamma, digits),
            "C": mpmath.nstr(self.C_mp if self.C_mp is not None else self.C, digits),
        }
        if self.me_approx is not None:
            d["mixture"] = self.me_approx.to_dict(digits)
        return d


@dataclass
class OptionQuote:
    """Perpetual put: ``C_factor = E[exp(I_e(r))]``, exercise boundary ``K C`` and value."""

    C_factor: float
    boundary: float
    value: float
    n: int

    def to_dict(self, digits: int = 17) -> dict:
        return {k: (mpmath.nstr(v, digits) if k != "n" else v) for k, v in self.__dict__.items()}


def risk_neutral_drift(theta, sigma, kappa, r):
    """Drift ``mu`` making ``psi_X(1) = r``, i.e. ``exp(-r t) A_t`` a martingale.

    Exact for rational inputs at the ambient precision; returns an mpf.
    """
    theta, sigma, kappa, r = (to_mpf(v) for v in (theta, sigma, kappa, r))
    arg = 1 - 2 * kappa * theta - kappa * sigma**2
    if not arg > 0:
        raise DomainError("psi_X(1) is not finite for these parameters")
    return r - 1 / kappa + mpmath.sqrt(arg) / kappa


def cramer_constant(p: NigParams, n: int | None = None, precision: int = DEFAULT_PRECISION, dps: int = 50) -> RuinReport:
    """Exponent and constant of ``P(-I_inf > x) ~ C exp(-gamma x)``.

    ``gamma = -zeta_hat(0)``.  ``C`` is ``exp`` of the integral of
    ``log(u / (u - gamma))`` against the Thorin measure of ``-I_inf`` with
    its atom at ``gamma`` removed (that atom is the pole producing the
    exponential tail).  The integral is done by tanh-sinh quadrature at
    ``dps`` digits.  With ``n`` given, the ``n``-term exponential mixture is
    attached as well.

    Raises
    ------
    DomainError
        If ``theta + mu <= 0`` (the infimum is not finite).
    """
    if not p.mean > 0:
        raise DomainError("ruin asymptotics need theta + mu > 0")
    with mp.workdps(dps):
        roots = zeta_roots(p, 0)
        gamma = -mpmath.re(roots.zeta_hat)
        m = thorin_measure(p, 0, Side.MINUS)
        total = mp.zero
        for at in m.atoms:
            if abs(at.location - gamma) <= mp.eps * 100 * gamma:
                continue
            total += at.mass * mpmath.log(at.location / (at.location - gamma))
        if m.has_density:
            lo, _ = m.continuous_interval()
            total += mpmath.quad(
                lambda u: mpmath.log(u / (u - gamma)) * m.density(u), [lo, lo + 1, lo + 10, mp.inf], method="tanh-sinh"
            )
        C = mpmath.exp(total)
    me = exp_mixture(m, n, precision) if n else None
    return RuinReport(float(gamma), float(C), me, gamma, C)


def ruin_probability(p: NigParams, x: float, n: int, precision: int = DEFAULT_PRECISION, report: RuinReport | None = None):
    """``(C exp(-gamma x), sum omega_i exp(-eta_i x))`` for initial capital ``x``."""
    if not x >= 0:
        raise DomainError("initial capital must be non-negative")
    rep = report if report is not None and report.me_approx is not None and report.me_approx.n == n else cramer_constant(p, n, precision)
    me = rep.me_approx
    tail = math.fsum(float(w) * math.exp(-float(e) * x) for w, e in me.components)
    return rep.asymptotic(x), tail


def _put_value(me: ExponentialMixture, C, K, A0):
    comps = [(float(w), float(e)) for w, e in me.components]
    lg = math.log(C * K / A0)
    if lg < 0:
        # (C/A0)^eta K^(eta+1) = K (CK/A0)^eta
        return math.fsum(w * K * math.exp(e * lg) / (1 + e) for w, e in comps)
    return math.fsum(w * (K - A0 / C * e / (1 + e)) for w, e in comps)


def perpetual_put(
    p: NigParams,
    r,
    K: float,
    A0: float,
    n: int,
    precision: int = DEFAULT_PRECISION,
    mixture: ExponentialMixture | None = None,
) -> OptionQuote:
    """Perpetual American put on ``A_t = A0 exp(X_t)`` with rate ``r``.

    ``C = E[exp(I_e(r))]`` comes from the exact factor; the expectation in
    the value formula uses the ``n``-term exponential mixture for ``-I``.
    A warning is issued if ``|psi_X(1) - r|`` exceeds ``RISK_NEUTRAL_TOL``.
    """
    if not r > 0 or not K > 0 or not A0 > 0:
        raise DomainError("need r, K, A0 > 0")
    with mp.workdps(30):
        drift_gap = abs(float(mpmath.re(laplace_exponent(p, 1))) - float(r))
    if drift_gap > RISK_NEUTRAL_TOL:
        warnings.warn(f"psi_X(1) differs from r by {drift_gap:.3g}; discounted price is not a martingale", stacklevel=2)
    C = ExactFactor(p, r, Side.MINUS)(1.0).real
    me = mixture if mixture is not None else exp_mixture(thorin_measure(p, r, Side.MINUS), n, precision)
    return OptionQuote(C, K * C, _put_value(me, C, K, A0), me.n)
