"""Command-line front end.

Usage::

    python -m nigwh <subcommand> --theta T --sigma S --kappa K --mu M [--q Q] [options]

Parameters accept decimals or exact rationals such as ``187/64``.  Numbers
are printed as decimal strings with 17 significant digits (all working
digits with ``--full``).  Exit status: 0 success, 1 internal error, 2 domain
error (a one-line JSON error object goes to stderr), 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp

from . import __version__
from .applications import cramer_constant, perpetual_put, risk_neutral_drift, ruin_probability
from .distributions import ExactFactor, laplace_invert_cdf, me_cdf
from .errors import (
    ConvergenceError,
    DomainError,
    NegativeWeightError,
    NonFiniteError,
    NonPositiveResidueError,
    PoleError,
    SingularSystemError,
)
from .factorization import Side, is_ggc, jordan_decomposition, thorin_measure
from .moments import moment_sequence
from .nig_core import NigParams, classify_case, zeta_roots
from .pade import DEFAULT_PRECISION, exp_mixture, gamma_convolution
from .validation import McConfig, cumulant_identity_table, simulate_extrema_cdf

PRECISION_ENV = "NIGWH_PRECISION"
EXIT_OK, EXIT_INTERNAL, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 64
_DOMAIN_ERRORS = (
    DomainError,
    PoleError,
    SingularSystemError,
    ConvergenceError,
    NonFiniteError,
    NonPositiveResidueError,
    NegativeWeightError,
)

__all__ = ["RunConfig", "run", "main", "parse_number"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Parsed common options."""

    params: NigParams
    q: Fraction = Fraction(0)
    precision_digits: int = DEFAULT_PRECISION
    n: int = 5
    tolerances: dict = field(default_factory=lambda: {"classify": 1e-12})
    output_format: str = "json"
    digits: int = 17

    def __post_init__(self):
        if self.precision_digits < 50:
            raise DomainError("precision must be at least 50 digits")
        if self.n < 1:
            raise DomainError("n must be >= 1")


def parse_number(text: str) -> Fraction:
    """Exact rational from ``'0.25'``, ``'-4'``, ``'187/64'`` or ``'1e-3'``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _grid(text: str):
    try:
        a, b, s = (float(Fraction(t)) for t in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("grid must be start:stop:step") from exc
    if s <= 0 or b < a:
        raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
    return np.arange(a, b + s / 2, s)


def _default_precision() -> int:
    try:
        return int(os.environ.get(PRECISION_ENV, DEFAULT_PRECISION))
    except ValueError:
        return DEFAULT_PRECISION


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("process")
    g.add_argument("--theta", type=parse_number, required=True)
    g.add_argument("--sigma", type=parse_number, required=True)
    g.add_argument("--kappa", type=parse_number, required=True)
    g.add_argument("--mu", type=parse_number, default=None, help="drift; omit with --risk-neutral")
    g.add_argument("--q", type=parse_number, default=Fraction(0), help="killing rate")
    o = common.add_argument_group("output")
    o.add_argument("--precision", type=int, default=_default_precision(), help=f"working digits (env {PRECISION_ENV})")
    o.add_argument("--output", choices=["json", "csv"], default=None)
    o.add_argument("--full", action="store_true", help="print all working digits")

    p = _Parser(prog="nigwh", description="Wiener-Hopf factors of NIG processes")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("roots", parents=[common], help="rho, rho_hat, zeta, zeta_hat")
    sub.add_parser("classify", parents=[common], help="case label and GGC status")
    s = sub.add_parser("factors", parents=[common], help="spectral measures, optional factor values")
    s.add_argument("--z", type=complex, action="append", default=[], help="evaluate both factors at z (repeatable)")
    s = sub.add_parser("moments", parents=[common], help="negative moments, cumulants, raw moments")
    s.add_argument("--side", choices=["plus", "minus"], default="plus")
    s.add_argument("--K", type=int, default=10)
    s = sub.add_parser("pade", parents=[common], help="gamma-convolution or mixture parameters")
    s.add_argument("--side", choices=["plus", "minus"], default="plus")
    s.add_argument("--kind", choices=["gc", "me"], default="me")
    s.add_argument("--n", type=int, default=5)
    s = sub.add_parser("cdf", parents=[common], help="CDF of S or -I on a grid")
    s.add_argument("--side", choices=["plus", "minus"], default="plus")
    s.add_argument("--method", choices=["me", "gc", "exact", "mc"], default="me")
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--grid", type=_grid, default=_grid("0.1:3:0.1"))
    s.add_argument("--paths", type=int, default=10**4)
    s.add_argument("--step", type=float, default=1e-2)
    s.add_argument("--seed", type=int, default=0)
    s = sub.add_parser("ruin", parents=[common], help="Cramér asymptotics and mixture approximation")
    s.add_argument("--x", type=float, action="append", default=[])
    s.add_argument("--n", type=int, default=15)
    s = sub.add_parser("option", parents=[common], help="perpetual put value")
    s.add_argument("--r", type=parse_number, required=True)
    s.add_argument("--K", type=float, required=True)
    s.add_argument("--A0", type=float, action="append", required=True)
    s.add_argument("--n", type=int, default=11)
    s.add_argument("--risk-neutral", action="store_true", help="set mu so that psi_X(1) = r")
    s = sub.add_parser("check", parents=[common], help="cumulant identity table")
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--kmax", type=int, default=9)
    s = sub.add_parser("mc", parents=[common], help="Monte Carlo CDFs of S and -I")
    s.add_argument("--grid", type=_grid, default=_grid("0.1:3:0.1"))
    s.add_argument("--paths", type=int, default=10**4)
    s.add_argument("--step", type=float, default=1e-2)
    s.add_argument("--seed", type=int, default=0)
    return p


class _Fmt:
    def __init__(self, digits):
        self.digits = digits

    def __call__(self, x):
        if x is None:
            return None
        if isinstance(x, (bool, int, str)):
            return x
        with mp.workdps(self.digits + 10):
            return self._fmt(x)

    def _fmt(self, x):
        if isinstance(x, (complex, mpmath.mpc)):
            x = mp.mpc(x)
            if mpmath.im(x) == 0:
                return mpmath.nstr(mpmath.re(x), self.digits)
            return {"re": mpmath.nstr(mpmath.re(x), self.digits), "im": mpmath.nstr(mpmath.im(x), self.digits)}
        return mpmath.nstr(mp.mpf(x), self.digits)


def _emit(payload, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
        return
    rows = payload["rows"] if isinstance(payload, dict) and "rows" in payload else None
    w = csv.writer(out, lineterminator="\n")
    if rows is None:
        w.writerow(["key", "value"])
        for k, v in payload.items():
            w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
        return
    cols = payload["columns"]
    w.writerow(cols)
    for r in rows:
        w.writerow(["" if r.get(c) is None else r[c] for c in cols])


def _table(columns, rows, **extra):
    return {"columns": columns, "rows": rows, **extra}


def _cmd_roots(cfg, args, f):
    r = zeta_roots(cfg.params, cfg.q)
    case = classify_case(cfg.params, cfg.q, roots=r)
    return {
        "rho": f(r.rho),
        "rho_hat": f(r.rho_hat),
        "zeta": f(r.zeta),
        "zeta_hat": f(r.zeta_hat),
        "d": f(r.d),
        "zeta_solves": r.zeta_solves,
        "zeta_hat_solves": r.zeta_hat_solves,
        "case": str(case),
    }


def _measures(cfg):
    out = {}
    for side in (Side.PLUS, Side.MINUS):
        try:
            out[side] = thorin_measure(cfg.params, cfg.q, side)
        except DomainError:
            if cfg.q != 0:
                raise
    return out


def _cmd_classify(cfg, args, f):
    res = {"case": str(classify_case(cfg.params, cfg.q))}
    for side, m in _measures(cfg).items():
        pair = jordan_decomposition(m)
        res[side.value] = {"family": m.family.value, "ggc": is_ggc(m), "crossover": f(pair.crossover)}
    return res


def _cmd_factors(cfg, args, f):
    res = {"case": str(classify_case(cfg.params, cfg.q))}
    ms = _measures(cfg)
    for side, m in ms.items():
        res[side.value] = m.to_dict(f.digits)
    if args.z:
        if cfg.q == 0:
            raise DomainError("factor values are reported for q > 0")
        ep, em = ExactFactor(cfg.params, cfg.q, Side.PLUS), ExactFactor(cfg.params, cfg.q, Side.MINUS)
        res["values"] = [{"z": f(z), "plus": f(ep(z)), "minus": f(em(z))} for z in args.z]
    return res


def _cmd_moments(cfg, args, f):
    m = thorin_measure(cfg.params, cfg.q, args.side)
    ms = moment_sequence(m, args.K, cfg.precision_digits)
    rows = [
        {"k": k, "m_k": f(ms.m[k - 1]), "kappa_k": f(ms.kappa_cum[k - 1]), "mu_k": f(ms.mu_raw[k])}
        for k in range(1, args.K + 1)
    ]
    return _table(["k", "m_k", "kappa_k", "mu_k"], rows, side=args.side)


def _approx(cfg, side, kind, n):
    m = thorin_measure(cfg.params, cfg.q, side)
    if kind == "gc":
        return gamma_convolution(m, n, cfg.precision_digits)
    return exp_mixture(m, n, cfg.precision_digits)


def _cmd_pade(cfg, args, f):
    d = _approx(cfg, args.side, args.kind, args.n)
    if args.kind == "gc":
        rows = [{"i": i + 1, "alpha": f(a), "beta": f(b)} for i, (a, b) in enumerate(d.components)]
        return _table(["i", "alpha", "beta"], rows, kind="gc", side=args.side, n=args.n)
    rows = [{"i": i + 1, "omega": f(w), "eta": f(e)} for i, (w, e) in enumerate(d.components)]
    return _table(["i", "omega", "eta"], rows, kind="me", side=args.side, n=args.n)


def _cmd_cdf(cfg, args, f):
    x = args.grid
    if args.method == "me":
        vals = me_cdf(_approx(cfg, args.side, "me", args.n), x)
    elif args.method == "gc":
        from .distributions import gc_mgf

        g = _approx(cfg, args.side, "gc", args.n)
        with mp.workdps(30):
            vals = laplace_invert_cdf(lambda z: gc_mgf(g, z, continuation=True), x, degree=32)
    elif args.method == "exact":
        if cfg.q == 0:
            raise DomainError("exact inversion is implemented for q > 0")
        fac = ExactFactor(cfg.params, cfg.q, args.side)
        ev = fac if args.side == "plus" else (lambda z: fac(-z))
        vals = laplace_invert_cdf(ev, x)
    else:
        sup, inf = simulate_extrema_cdf(cfg.params, cfg.q, McConfig(args.step, args.paths, args.seed), x)
        vals = sup if args.side == "plus" else inf
    rows = [{"x": f(a), "F": f(b)} for a, b in zip(x, vals)]
    return _table(["x", "F"], rows, side=args.side, method=args.method)


def _cmd_ruin(cfg, args, f):
    rep = cramer_constant(cfg.params, args.n, cfg.precision_digits)
    res = rep.to_dict(f.digits)
    res["points"] = []
    for x in args.x:
        asym, tail = ruin_probability(cfg.params, x, args.n, cfg.precision_digits, report=rep)
        res["points"].append({"x": f(x), "asymptotic": f(asym), "mixture": f(tail)})
    return res


def _cmd_option(cfg, args, f):
    quotes = []
    me = exp_mixture(thorin_measure(cfg.params, args.r, Side.MINUS), args.n, cfg.precision_digits)
    for a0 in args.A0:
        q = perpetual_put(cfg.params, args.r, args.K, a0, args.n, cfg.precision_digits, mixture=me)
        quotes.append({"A0": f(a0), "value": f(q.value), "C_factor": f(q.C_factor), "boundary": f(q.boundary), "n": q.n})
    return _table(["A0", "value", "C_factor", "boundary", "n"], quotes, mu=f(cfg.params.mu))


def _cmd_check(cfg, args, f):
    rows = cumulant_identity_table(cfg.params, cfg.q, args.kmax, args.n, cfg.precision_digits)
    out = [{"k": r.k, "direct": f(r.direct), "exact": f(r.exact), "gc": f(r.gamma), "me": f(r.mixture)} for r in rows]
    return _table(["k", "direct", "exact", "gc", "me"], out)


def _cmd_mc(cfg, args, f):
    x = args.grid
    sup, inf = simulate_extrema_cdf(cfg.params, cfg.q, McConfig(args.step, args.paths, args.seed), x)
    rows = [{"x": f(a), "F_sup": f(b), "F_neg_inf": f(c)} for a, b, c in zip(x, sup, inf)]
    return _table(["x", "F_sup", "F_neg_inf"], rows)


_COMMANDS = {
    "roots": _cmd_roots,
    "classify": _cmd_classify,
    "factors": _cmd_factors,
    "moments": _cmd_moments,
    "pade": _cmd_pade,
    "cdf": _cmd_cdf,
    "ruin": _cmd_ruin,
    "option": _cmd_option,
    "check": _cmd_check,
    "mc": _cmd_mc,
}
_TABULAR = {"moments", "pade", "cdf", "option", "check", "mc"}


def _config(args) -> RunConfig:
    mu = args.mu
    if getattr(args, "risk_neutral", False):
        with mp.workdps(60):
            mu = risk_neutral_drift(args.theta, args.sigma, args.kappa, args.r)
        mu = float(mu)
    if mu is None:
        raise UsageError("--mu is required unless --risk-neutral is given")
    params = NigParams(args.theta, args.sigma, args.kappa, mu)
    return RunConfig(params, args.q, args.precision, getattr(args, "n", 5))


def run(argv=None, stdout=None, stderr=None) -> int:
    """Execute one subcommand and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        cfg = _config(args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_DOMAIN
    f = _Fmt(cfg.precision_digits if args.full else 17)
    fmt = args.output or ("csv" if args.command in _TABULAR else "json")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            with mp.workdps(max(30, f.digits + 10)):
                payload = _COMMANDS[args.command](cfg, args, f)
        for w in caught:
            stderr.write(f"warning: {w.message}\n")
        _emit(payload, fmt, stdout)
    except _DOMAIN_ERRORS as exc:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_DOMAIN
    except Exception as exc:  # noqa: BLE001
        stderr.write(json.dumps({"error": "InternalError", "message": f"{type(exc).__name__}: {exc}"}) + "\n")
        return EXIT_INTERNAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
