"""Spectral measures of the Wiener-Hopf factors of an NIG process.

For killing rate ``q`` the Levy density of the supremum factor is
``x^{-1} int e^{-xu} omega_plus(du)`` and similarly for the infimum.  The
measures ``omega_plus`` / ``omega_minus`` are a continuous density of one of
three shapes plus at most one Dirac atom; which shape and which atom is
decided by the case label of :func:`nigwh.nig_core.classify_case`.

The Thorin measure of ``S`` is ``omega_plus`` itself; the one of ``-I`` is
the reflection of ``-omega_minus`` onto the positive half-line.  Both are in
general *signed*; the factor is a generalized gamma convolution exactly
when the Thorin measure is non-negative.

Measures are kept symbolically (family, constants, poles, atoms).  Numbers
are mpf at the precision active when the measure was built; use
:meth:`SpectralMeasure.at_precision` to rebuild with more digits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp

from .errors import DomainError
from .nig_core import (
    DEFAULT_TOL,
    CaseLabel,
    MinusCase,
    NigParams,
    PlusCase,
    classify_case,
    to_mpf,
    zeta_roots,
)
from .quadrature import integrate_half_line


class Family(str, enum.Enum):
    MU = "mu"
    NU = "nu"
    LAMBDA = "lambda"
    ATOMS_ONLY = "atoms_only"


class Side(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class Atom:
    location: mpmath.mpf
    weight: Fraction
    sign: int

    @property
    def mass(self):
        return self.sign * to_mpf(self.weight)


@dataclass(frozen=True)
class SpectralMeasure:
    """A signed measure: continuous density of a given family plus atoms.

    ``mirrored`` is False for omega (minus side lives on the negative axis)
    and True for the reflected Thorin measure of ``-I``.  ``scale`` and
    ``window`` are used by Jordan parts: the density is multiplied by
    ``scale`` and restricted to ``window`` when given.
    """

    family: Family
    side: Side
    a: mpmath.mpf
    b: mpmath.mpf
    c: mpmath.mpf
    support_edge: mpmath.mpf
    far_root: mpmath.mpf
    pole1: mpmath.mpc | None
    pole2: mpmath.mpc | None
    atoms: tuple = ()
    mirrored: bool = False
    params: NigParams | None = None
    q: object = 0
    case: CaseLabel | None = None
    scale: int = 1
    window: tuple | None = None
    _float_template: dict = field(default=None, compare=False, repr=False)

    # -- geometry -------------------------------------------------------

    @property
    def is_thorin(self) -> bool:
        """True if the measure lives on the positive half-line."""
        return self.side is Side.PLUS or self.mirrored

    @property
    def has_density(self) -> bool:
        return self.family is not Family.ATOMS_ONLY

    def support(self):
        """Open interval carrying the continuous part (before any window)."""
        if self.side is Side.PLUS:
            return self.support_edge, mp.inf
        if self.mirrored:
            return -self.support_edge, mp.inf
        return -mp.inf, self.support_edge

    def continuous_interval(self):
        lo, hi = self.support()
        if self.window is not None:
            lo, hi = max(lo, self.window[0]), min(hi, self.window[1])
        return lo, hi

    def crossover(self):
        """Zero of the numerator line in this measure's own coordinate, or None."""
        if self.family is not Family.MU or self.b == 0:
            return None
        x = self.c / self.b
        return -x if self.mirrored else x

    # -- evaluation -------------------------------------------------------

    def _omega_density(self, u):
        rho, rho_hat = (
            (self.support_edge, self.far_root) if self.side is Side.PLUS else (self.far_root, self.support_edge)
        )
        if self.family is Family.MU:
            num = self.a * (self.b * u - self.c)
        else:
            num = self.a * self.b
        den = mp.pi * mpmath.sqrt((u - rho) * (u - rho_hat))
        for pole in (self.pole1, self.pole2):
            if pole is not None:
                den = den * (u - pole)
        return mpmath.re(num / den)

    def density(self, u):
        """Value of the continuous density at ``u`` (zero off the support)."""
        if not self.has_density:
            return mp.zero
        u = mp.mpf(u)
        lo, hi = self.continuous_interval()
        if not lo < u < hi:
            return mp.zero
        val = -self._omega_density(-u) if self.mirrored else self._omega_density(u)
        return self.scale * val

    def template(self):
        """Thorin-coordinate form ``(A x + B) / (prod(x - poles) sqrt((x - C)(x - R)))``.

        Returns ``(A, B, C, R, poles)`` with pi absorbed into A and B.
        """
        if not self.is_thorin:
            raise DomainError("template is defined for measures on the positive half-line")
        if not self.has_density:
            return mp.zero, mp.zero, None, None, []
        a, b, c = self.a, self.b, self.c
        if self.mirrored:
            C, R = -self.far_root, -self.support_edge
            flip = -1
        else:
            C, R = self.far_root, self.support_edge
            flip = 1
        if self.family is Family.MU:
            A, B = a * b / mp.pi, -flip * a * c / mp.pi
        else:
            A, B = mp.zero, a * b / mp.pi
        poles = [flip * p for p in (self.pole1, self.pole2) if p is not None]
        return self.scale * A, self.scale * B, C, R, poles

    def float_template(self):
        """Double-precision template with accurate offsets from the edge R."""
        if self._float_template is None:
            A, B, C, R, poles = self.template()
            t = {
                "A": float(A),
                "B": float(B),
                "R": float(R) if R is not None else None,
                "R_minus_C": float(R - C) if R is not None else None,
                "R_minus_poles": [complex(R - p) for p in poles],
                "poles": [complex(p) for p in poles],
            }
            object.__setattr__(self, "_float_template", t)
        return self._float_template

    def density_np(self, u, ur):
        """Vectorized Thorin-coordinate density at ``u`` given ``ur = u - R`` accurately."""
        t = self.float_template()
        num = t["A"] * u + t["B"]
        den = np.sqrt(ur * (ur + t["R_minus_C"])).astype(complex)
        for off in t["R_minus_poles"]:
            den = den * (ur + off)
        val = (num / den).real
        if self.window is not None:
            lo, hi = float(self.window[0]), float(self.window[1])
            val = np.where((u > lo) & (u < hi), val, 0.0)
        return val

    def integrate(self, g, h: float = 2.0**-7, p: int = 60):
        """Integrate ``g(u)`` (vectorized, numpy) against the full signed measure.

        The continuous part uses tanh-sinh quadrature on the support.  The
        window of a Jordan part is honoured by splitting at its endpoints.
        """
        if not self.is_thorin:
            raise DomainError("integrate works in Thorin coordinates; mirror first")
        total = sum(float(at.mass) * g(np.array([float(at.location)]))[0] for at in self.atoms)
        if self.has_density:
            total = total + self._integrate_density(g, h, p)
        return total

    def _integrate_density(self, g, h, p):
        t = self.float_template()
        R = t["R"]
        if self.window is None:
            return integrate_half_line(lambda u, ur: g(u) * self.density_np(u, ur), R, h, p)
        lo, hi = float(self.window[0]), float(self.window[1])
        full = replace(self, window=None, _float_template=None)
        if hi == float("inf"):
            # int over (lo, inf): edge-adapted map from lo
            if lo <= R:
                return integrate_half_line(lambda u, ur: g(u) * full.density_np(u, ur), R, h, p)
            return integrate_half_line(lambda u, ur: g(u) * full.density_np(u, u - R), lo, h, p)
        from .quadrature import tanh_sinh_quadrature

        a = max(lo, R)
        half = 0.5 * (hi - a)

        def f(x, dl, dr):
            ur = (a - R) + half * dl
            u = R + ur
            return g(u) * full.density_np(u, ur) * half

        return tanh_sinh_quadrature(f, h, p, complements=True)

    def total_mass(self):
        return self.integrate(lambda u: np.ones_like(u))

    def at_precision(self, dps: int) -> "SpectralMeasure":
        """Rebuild this measure with constants computed at ``dps`` digits."""
        if self.params is None:
            raise DomainError("measure has no parameters attached")
        with mp.workdps(dps):
            base = _build(self.params, self.q, self.side, DEFAULT_TOL)
            if self.mirrored:
                base = _mirror(base)
        return replace(base, scale=self.scale, window=self.window)

    def to_dict(self, digits: int = 17) -> dict:
        """JSON-ready description (numbers as decimal strings)."""

        def s(x):
            if x is None:
                return None
            if isinstance(x, mpmath.mpc):
                if mpmath.im(x) == 0:
                    x = mpmath.re(x)
                else:
                    return {"re": mpmath.nstr(mpmath.re(x), digits), "im": mpmath.nstr(mpmath.im(x), digits)}
            return mpmath.nstr(x, digits)

        A, B, C, R, poles = self.template() if self.is_thorin else (None,) * 4 + ([],)
        return {
            "family": self.family.value,
            "side": self.side.value,
            "mirrored": self.mirrored,
            "case": str(self.case) if self.case else None,
            "a": s(self.a),
            "b": s(self.b),
            "c": s(self.c),
            "support_edge": s(self.support_edge),
            "far_root": s(self.far_root),
            "pole1": s(self.pole1),
            "pole2": s(self.pole2),
            "atoms": [
                {"location": s(at.location), "weight": str(at.weight), "sign": at.sign} for at in self.atoms
            ],
            "support_lower": s(self.continuous_interval()[0]) if self.has_density else None,
        }


@dataclass(frozen=True)
class JordanPair:
    """``m = positive_part - negative_part`` with both parts non-negative."""

    positive_part: SpectralMeasure
    negative_part: SpectralMeasure
    crossover: mpmath.mpf | None

    @property
    def negative_is_empty(self) -> bool:
        return not self.negative_part.atoms and self.negative_part.window is not None and (
            self.negative_part.window[0] >= self.negative_part.window[1]
        )


def abc_constants(p: NigParams, q=0):
    """Constants ``(a, b, c)`` of the spectral densities."""
    theta, sigma, kappa, mu = p.as_mp()
    qm = to_mpf(q)
    a = 1 / (sigma * kappa ** mp.mpf(1.5) * (mu**2 + sigma**2 / kappa))
    b = theta * mu * kappa + (qm * kappa - 1) * sigma**2
    c = mu - theta * (qm * kappa - 1)
    return a, b, c


def crossover_rational(p: NigParams, q=0) -> Fraction | None:
    """Zero ``c/b`` of the numerator line, exactly, for rational (or float) inputs.

    Floats are taken at their exact binary value.  Returns None when ``b = 0``.
    """
    theta, sigma, kappa, mu, qq = (Fraction(v) for v in (p.theta, p.sigma, p.kappa, p.mu, q))
    b = theta * mu * kappa + (qq * kappa - 1) * sigma**2
    c = mu - theta * (qq * kappa - 1)
    return None if b == 0 else c / b


def _check_q0(p: NigParams, side: Side):
    m = p.mean
    if side is Side.PLUS and not m < 0:
        raise DomainError("at q=0 the supremum is finite only when theta + mu < 0")
    if side is Side.MINUS and not m > 0:
        raise DomainError("at q=0 the infimum is finite only when theta + mu > 0")


def _build(p: NigParams, q, side: Side, tol) -> SpectralMeasure:
    side = Side(side)
    if q < 0:
        raise DomainError("killing rate must be non-negative")
    if q == 0:
        _check_q0(p, side)
    roots = zeta_roots(p, q, tol)
    case = classify_case(p, q, tol, roots)
    a, b, c = abc_constants(p, q)
    zeta, zeta_hat = roots.zeta, roots.zeta_hat
    plus_iii = case.plus_case is PlusCase.III
    minus_c = case.minus_case is MinusCase.C
    if q == 0:
        # only the relevant side's case matters at q = 0
        if side is Side.PLUS:
            minus_c = False
        else:
            plus_iii = False

    if plus_iii and minus_c:
        family = Family.ATOMS_ONLY
    elif plus_iii:
        family = Family.NU
    elif minus_c:
        family = Family.LAMBDA
    else:
        family = Family.MU
    pole1 = None if family in (Family.NU, Family.ATOMS_ONLY) else zeta
    pole2 = None if family in (Family.LAMBDA, Family.ATOMS_ONLY) else zeta_hat

    atoms = []
    if side is Side.PLUS:
        edge, far = roots.rho, roots.rho_hat
        if plus_iii:
            atoms.append(Atom(roots.rho, Fraction(1) if q == 0 else Fraction(1, 2), +1))
        elif case.plus_case is PlusCase.II:
            atoms.append(Atom(mpmath.re(zeta), Fraction(1), +1))
    else:
        edge, far = roots.rho_hat, roots.rho
        if minus_c:
            atoms.append(Atom(roots.rho_hat, Fraction(1) if q == 0 else Fraction(1, 2), -1))
        elif case.minus_case is MinusCase.B:
            atoms.append(Atom(mpmath.re(zeta_hat), Fraction(1), -1))
    return SpectralMeasure(
        family=family,
        side=side,
        a=a,
        b=b,
        c=c,
        support_edge=edge,
        far_root=far,
        pole1=pole1,
        pole2=pole2,
        atoms=tuple(atoms),
        mirrored=False,
        params=p,
        q=q,
        case=case,
    )


def _mirror(m: SpectralMeasure) -> SpectralMeasure:
    atoms = tuple(Atom(-at.location, at.weight, -at.sign) for at in m.atoms)
    return replace(m, atoms=atoms, mirrored=True, _float_template=None)


def omega_measure(p: NigParams, q=0, side=Side.PLUS, tol: float = DEFAULT_TOL) -> SpectralMeasure:
    """Spectral measure omega_q^+ or omega_q^- (minus side on the negative axis).

    Raises
    ------
    DomainError
        At ``q = 0`` when the requested extremum is a.s. infinite.
    """
    return _build(p, q, Side(side), tol)


def thorin_measure(p: NigParams, q=0, side=Side.PLUS, tol: float = DEFAULT_TOL) -> SpectralMeasure:
    """Thorin measure of S (PLUS) or of -I (MINUS), supported on the positive axis."""
    m = _build(p, q, Side(side), tol)
    return m if m.side is Side.PLUS else _mirror(m)


def radius_of_convergence(p: NigParams, q=0, side=Side.PLUS, tol: float = DEFAULT_TOL):
    """Radius R of the Thorin-form CGF: ``zeta`` / ``-zeta_hat`` if it solves, else ``rho`` / ``-rho_hat``."""
    side = Side(side)
    if q == 0:
        _check_q0(p, side)
    r = zeta_roots(p, q, tol)
    if side is Side.PLUS:
        return mpmath.re(r.zeta) if r.zeta_solves else r.rho
    return -mpmath.re(r.zeta_hat) if r.zeta_hat_solves else -r.rho_hat


def support_infimum(m: SpectralMeasure):
    """Smallest point charged by ``m`` (atoms included)."""
    pts = [at.location for at in m.atoms]
    if m.has_density:
        pts.append(m.continuous_interval()[0])
    return min(pts)


def _sign_on(m: SpectralMeasure, lo, hi):
    if hi == mp.inf:
        probe = lo + max(1, abs(lo))
    elif lo == -mp.inf:
        probe = hi - max(1, abs(hi))
    else:
        probe = (lo + hi) / 2
    v = m.density(probe)
    return 0 if v == 0 else (1 if v > 0 else -1)


def jordan_decomposition(m: SpectralMeasure) -> JordanPair:
    """Split ``m`` into non-negative parts ``m = positive - negative``.

    The density changes sign at most once, at the zero of its numerator
    line; atoms are routed by sign.
    """
    lo, hi = m.support() if m.has_density else (mp.zero, mp.zero)
    x0 = m.crossover() if m.has_density else None
    if x0 is not None and not lo < x0 < hi:
        x0 = None
    pieces = [(lo, hi)] if x0 is None else [(lo, x0), (x0, hi)]
    pos_win = neg_win = None
    for a_, b_ in pieces:
        if not m.has_density:
            break
        s = _sign_on(m, a_, b_)
        if s > 0:
            pos_win = (a_, b_)
        elif s < 0:
            neg_win = (a_, b_)
    empty = (mp.zero, mp.zero)
    pos_atoms = tuple(at for at in m.atoms if at.sign > 0)
    neg_atoms = tuple(Atom(at.location, at.weight, +1) for at in m.atoms if at.sign < 0)
    positive = replace(m, atoms=pos_atoms, window=pos_win or empty, scale=1, _float_template=None)
    negative = replace(m, atoms=neg_atoms, window=neg_win or empty, scale=-1, _float_template=None)
    if not m.has_density:
        positive = replace(positive, window=None)
        negative = replace(negative, window=empty)
    return JordanPair(positive, negative, x0)


def is_ggc(m: SpectralMeasure) -> bool:
    """True iff the (Thorin) measure is non-negative, i.e. the law is a GGC."""
    pair = jordan_decomposition(m)
    return pair.negative_is_empty


def levy_density(m: SpectralMeasure, x: float) -> float:
    """Levy density of the corresponding Wiener-Hopf factor at ``x``.

    PLUS: ``x > 0``; MINUS: ``x < 0``.  Accepts omega or mirrored form.
    """
    x = float(x)
    if m.side is Side.PLUS and not x > 0:
        raise DomainError("plus-side Levy density needs x > 0")
    if m.side is Side.MINUS and not x < 0:
        raise DomainError("minus-side Levy density needs x < 0")
    tm = m if m.is_thorin else _mirror(m)
    ax = abs(x)
    return tm.integrate(lambda u: np.exp(-ax * u)) / ax
