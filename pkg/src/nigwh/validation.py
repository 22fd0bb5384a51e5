"""Independent oracles: Monte Carlo extrema, quadrature moments, cumulant checks.

Nothing here shares code paths with the closed-form moment engine, so the
functions can be used to test it:

* cumulants of ``X_e(q)`` come from exact rational power-series arithmetic
  on ``-log(1 - psi_X(z)/q)`` (or from numerical differentiation),
* negative moments come from tanh-sinh quadrature of the density,
* laws of the extrema come from simulated, discretized paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np
from mpmath import mp

from .errors import DomainError, NotGGCError
from .factorization import Side, SpectralMeasure, is_ggc, thorin_measure
from .moments import negative_moments
from .nig_core import NigParams, laplace_exponent, to_mpf
from .pade import DEFAULT_PRECISION, exp_mixture, gamma_convolution

__all__ = [
    "McConfig",
    "sample_nig_increment",
    "simulate_extrema",
    "simulate_extrema_cdf",
    "kolmogorov_distance",
    "exact_cumulants",
    "finite_difference_cumulants",
    "CumulantRow",
    "cumulant_identity_table",
    "quadrature_moment_oracle",
]


@dataclass(frozen=True)
class McConfig:
    """Path discretization step, number of paths and seed."""

    step: float = 1e-3
    n_paths: int = 10**6
    seed: int = 0

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError("step must be positive")
        if self.n_paths < 1:
            raise DomainError("n_paths must be >= 1")


def sample_nig_increment(p: NigParams, dt, rng: np.random.Generator, size=None):
    """Draw ``X_dt``: ``theta U + sigma sqrt(U) N + mu dt`` with ``U`` inverse Gaussian.

    ``U`` has mean ``dt`` and variance ``kappa dt`` (shape ``dt^2/kappa``);
    numpy's Wald sampler uses the Michael-Schucany-Haas transform.  ``dt``
    may be an array (one step length per draw).
    """
    dt = np.asarray(dt, dtype=float)
    if np.any(dt <= 0):
        raise DomainError("dt must be positive")
    theta, sigma, kappa, mu = (float(v) for v in (p.theta, p.sigma, p.kappa, p.mu))
    shape = size if size is not None else dt.shape
    u = rng.wald(dt, dt * dt / kappa, size=shape)
    z = rng.standard_normal(shape)
    return theta * u + sigma * np.sqrt(u) * z + mu * dt


def simulate_extrema(p: NigParams, q, cfg: McConfig):
    """Samples of ``S_e(q)`` and ``-I_e(q)`` from discretized killed paths.

    Each path gets its own exponential horizon ``T``; it is advanced by
    ``floor(T/step)`` full steps and one final step of length ``T mod step``.
    The running extrema include time 0.
    """
    if not q > 0:
        raise DomainError("simulation needs a positive killing rate")
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_paths
    T = rng.exponential(1.0 / float(q), size=n)
    full = np.floor(T / cfg.step).astype(np.int64)
    rest = T - full * cfg.step
    x = np.zeros(n)
    sup = np.zeros(n)
    inf = np.zeros(n)
    for j in range(int(full.max(initial=0))):
        idx = np.nonzero(full > j)[0]
        x[idx] += sample_nig_increment(p, cfg.step, rng, size=idx.size)
        np.maximum(sup, x, out=sup)
        np.minimum(inf, x, out=inf)
    idx = np.nonzero(rest > 0)[0]
    if idx.size:
        x[idx] += sample_nig_increment(p, rest[idx], rng)
        np.maximum(sup, x, out=sup)
        np.minimum(inf, x, out=inf)
    return sup, -inf


def simulate_extrema_cdf(p: NigParams, q, cfg: McConfig, grid):
    """Empirical CDFs of ``S_e(q)`` and ``-I_e(q)`` on ``grid``."""
    sup, neg_inf = simulate_extrema(p, q, cfg)
    grid = np.asarray(grid, dtype=float)
    sup.sort()
    neg_inf.sort()
    n = sup.size
    return np.searchsorted(sup, grid, side="right") / n, np.searchsorted(neg_inf, grid, side="right") / n


def kolmogorov_distance(samples, cdf) -> float:
    """``sup_x |F_emp(x) - cdf(x)|`` for a continuous vectorized ``cdf``."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    f = np.asarray(cdf(s), dtype=float)
    hi = np.arange(1, n + 1) / n - f
    lo = f - np.arange(0, n) / n
    return float(max(hi.max(), lo.max()))


# -- exact cumulants of X_e(q) ---------------------------------------------


def _exact(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _series_sqrt(a, K):
    s = [Fraction(0)] * K
    s[0] = Fraction(1)
    for n in range(1, K):
        s[n] = (a[n] - sum(s[k] * s[n - k] for k in range(1, n))) / 2
    return s


def _series_log(f, K):
    """log f for f_0 = 1 via g' = f'/f."""
    df = [(n + 1) * f[n + 1] for n in range(K - 1)]
    h = [Fraction(0)] * (K - 1)
    for n in range(K - 1):
        h[n] = df[n] - sum(f[k] * h[n - k] for k in range(1, n + 1))
    return [Fraction(0)] + [h[n - 1] / n for n in range(1, K)]


def exact_cumulants(p: NigParams, q, k_max: int) -> list:
    """``[kappa_1, ..., kappa_kmax]`` of ``X_e(q)`` as exact fractions.

    Every parameter is converted exactly (floats are dyadic rationals), the
    power series of ``psi_X`` is built with rational arithmetic, and the
    cumulants are ``k!`` times the coefficients of ``-log(1 - psi_X/q)``.
    """
    if not q > 0:
        raise DomainError("cumulants of X_e(q) need q > 0")
    theta, sigma, kappa, mu, qq = (_exact(v) for v in (p.theta, p.sigma, p.kappa, p.mu, q))
    K = k_max + 1
    a = [Fraction(0)] * K
    a[0] = Fraction(1)
    a[1] = -2 * kappa * theta
    if K > 2:
        a[2] = -kappa * sigma**2
    root = _series_sqrt(a, K)
    psi = [(Fraction(int(n == 0)) - root[n]) / kappa for n in range(K)]
    psi[1] += mu
    f = [Fraction(int(n == 0)) - psi[n] / qq for n in range(K)]
    lg = _series_log(f, K)
    return [-lg[k] * factorial(k) for k in range(1, K)]


def finite_difference_cumulants(p: NigParams, q, k_max: int, dps: int = 60) -> list:
    """Same cumulants by numerical differentiation of ``log(q/(q - psi_X(z)))`` at 0."""
    with mp.workdps(dps):
        qm = to_mpf(q)
        f = lambda z: mpmath.log(qm / (qm - laplace_exponent(p, z)))  # noqa: E731
        return [mpmath.diff(f, 0, k) for k in range(1, k_max + 1)]


# -- cumulant identity ------------------------------------------------------


@dataclass
class CumulantRow:
    k: int
    direct: object
    exact: object
    gamma: object = None
    mixture: object = None


def cumulant_identity_table(p: NigParams, q, k_max: int = 9, n: int = 5, P: int = DEFAULT_PRECISION) -> list:
    """Rows comparing ``kappa_k(X_e(q))`` with the Wiener-Hopf side sums.

    ``direct`` is the exact series value, ``exact`` the closed-form moments
    ``kappa_k(S) + (-1)^k kappa_k(-I)``, ``gamma`` and ``mixture`` the same
    sum for the ``n``-term approximations (``gamma`` is None when either
    Thorin measure is signed).  Approximation columns are filled for
    ``k <= 2n - 1`` only.
    """
    direct = exact_cumulants(p, q, k_max)
    plus = thorin_measure(p, q, Side.PLUS)
    minus = thorin_measure(p, q, Side.MINUS)
    mp_ = negative_moments(plus, k_max, P)
    mm_ = negative_moments(minus, k_max, P)
    try:
        if not (is_ggc(plus) and is_ggc(minus)):
            raise NotGGCError("signed Thorin measure")
        gp, gm = gamma_convolution(plus, n, P), gamma_convolution(minus, n, P)
    except NotGGCError:
        gp = gm = None
    ep, em = exp_mixture(plus, n, P), exp_mixture(minus, n, P)
    rows = []
    with mp.workdps(P):
        for k in range(1, k_max + 1):
            sgn = (-1) ** k
            ex = factorial(k - 1) * (mp_[k - 1] + sgn * mm_[k - 1])
            row = CumulantRow(k, mp.mpf(direct[k - 1].numerator) / direct[k - 1].denominator, ex)
            if k <= 2 * n - 1:
                if gp is not None:
                    row.gamma = gp.cumulant(k) + sgn * gm.cumulant(k)
                row.mixture = ep.cumulant(k) + sgn * em.cumulant(k)
            rows.append(row)
    return rows


def quadrature_moment_oracle(m: SpectralMeasure, k: int, h: float = 2.0**-7, p: int = 60, dps: int | None = None) -> float:
    """``int u^{-k} m(du)`` by tanh-sinh quadrature plus atom sums.

    By default the double-precision rule is used.  With ``dps`` the
    integral is done by mpmath's tanh-sinh at that many digits after the
    substitution ``u = lo + s^2``, which removes the square-root edge
    singularity.  ``u`` is formed at twice the working digits so the gap
    ``u - lo`` stays accurate for small ``s``, and the integrand is
    rescaled to order one because the quadrature error target is
    absolute.  Breakpoints are graded
    towards the nearest pole of the density so that poles sitting just
    below the support edge are resolved.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if dps is None:
        return float(m.integrate(lambda u: u ** (-float(k)), h, p))
    wide = 2 * dps
    with mp.workdps(wide):
        mm = m.at_precision(wide) if m.params is not None else m
        if mm.has_density:
            lo, hi = mm.continuous_interval()
            _, _, _, _, poles = mm.template()
    with mp.workdps(dps):
        total = mpmath.fsum(at.mass * at.location ** (-k) for at in mm.atoms)
        if mm.has_density:
            gap = min([abs(lo - pp) for pp in poles] + [mp.one])
            pts = [mp.zero]
            step = gap
            while step < 1:
                pts.append(step)
                step *= 16
            pts += [mp.one, mp.mpf(16), hi - lo]
            pts = [mpmath.sqrt(x) for x in pts if x <= hi - lo]

            # quad's error target is absolute, so integrate an O(1) quantity
            probe = lo + min(mp.one, (hi - lo) / 2)
            scale = lo ** (-k) * (abs(mm.density(probe)) or mp.one)

            def f(s):
                with mp.workdps(wide):
                    u = lo + s * s
                    return 2 * s * (lo / u) ** k * mm.density(u) / (scale * lo**k)

            total += scale * mpmath.quad(f, pts)
        return float(total)
