"""Command-line front end: ``stable-moments <subcommand> [flags]``.

Exit codes: 0 on success, 1 when an integral misses its tolerance, 2 on
invalid input (including unknown flags).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import statistics
import sys
import time

import numpy as np

from . import dist, oracle
from .condexp import VARIANTS, cond_exp, cond_exp_coeffs, read_atoms
from .gfun import gfun_result
from .moments import KINDS, MomentQuery, moment
from .params import ConvergenceError, DomainError, StableParams0, StableParams1, delta_star
from .quad import DEFAULT_CONFIG, QuadConfig

TOL_ENV = "STABLE_MOMENTS_TOL_REL"
BENCH_REPEATS = 51


def fmt(v) -> str:
    """15 significant digits, trailing zeros kept."""
    v = float(v)
    if not math.isfinite(v):
        return str(v)
    if v == 0.0 or 0.1 <= abs(v) < 10.0:
        return f"{v:.15f}"
    return f"{v:#.15g}"


def _round15(v):
    v = float(v)
    return float(f"{v:.15g}") if math.isfinite(v) else v


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Fail(2, f"{self.prog}: error: {message}")


def _grid(text: str):
    """``a:b:step`` (inclusive), a comma list, or a single number."""
    try:
        if ":" in text:
            a, b, step = (float(v) for v in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            n = int(math.floor((b - a) / step + 1e-9)) + 1
            return [round(a + i * step, 12) for i in range(n)]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use a:b:step or v1,v2,...") from None


def _law_flags(p, need_scale=True):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    if need_scale:
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--delta", type=float, default=0.0)
        p.add_argument("--param", type=int, choices=(0, 1), default=1,
                       help="location convention of --delta")


def _common_flags(p):
    p.add_argument("--out", choices=("plain", "json", "csv"), default="plain")
    p.add_argument("--tol-abs", type=float, default=None)
    p.add_argument("--tol-rel", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stable-moments",
                     description="Fractional moments and special functions of stable laws.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moment", help="truncated / absolute / signed moment")
    _law_flags(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--kind", choices=KINDS, default="plus")
    p.add_argument("--a", type=float, default=0.0, help="shift: moment of X - a")
    _common_flags(p)

    p = sub.add_parser("gfun", help="g_d(x) or g~_d(x)")
    p.add_argument("--which", choices=("g", "g_tilde"), default="g")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    _law_flags(p, need_scale=False)
    _common_flags(p)

    p = sub.add_parser("dist", help="pdf, cdf, sf, P(X>0) or random variates")
    _law_flags(p)
    p.add_argument("--what", choices=("pdf", "cdf", "sf", "prob_positive", "sample"), default="pdf")
    p.add_argument("--x", type=float, nargs="+", default=[0.0])
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _common_flags(p)

    p = sub.add_parser("condexp", help="E(X2 | X1 = x) from a spectral atom file")
    p.add_argument("--atoms", required=True, help="file with s1,s2,weight per line")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--variant", choices=VARIANTS, default="derived")
    _common_flags(p)

    p = sub.add_parser("verify", help="compare a moment against the brute-force oracles")
    _law_flags(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--kind", choices=KINDS, default="plus")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--n", type=int, default=1_000_000, help="Monte Carlo sample size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracles", nargs="+", choices=oracle.ORACLE_KINDS, default=list(oracle.ORACLE_KINDS))
    p.add_argument("--sigmas", type=float, default=4.0, help="MC pass band in standard errors")
    _common_flags(p)

    p = sub.add_parser("table", help="moment table over a parameter grid (CSV)")
    p.add_argument("--grid-alpha", type=_grid, required=True)
    p.add_argument("--grid-beta", type=_grid, default=[0.0])
    p.add_argument("--grid-p", type=_grid, required=True)
    p.add_argument("--grid-delta", type=_grid, default=[0.0])
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--param", type=int, choices=(0, 1), default=1)
    p.add_argument("--kind", choices=KINDS, default="plus")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--tol-abs", type=float, default=None)
    p.add_argument("--tol-rel", type=float, default=None)

    p = sub.add_parser("bench", help="timings: g_d, analytic moment, density-quadrature moment")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--param", type=int, choices=(0, 1), default=1)
    p.add_argument("--p", type=float, default=0.7)
    p.add_argument("--repeats", type=int, default=BENCH_REPEATS)
    _common_flags(p)
    return parser


def _config(args) -> QuadConfig:
    rel = args.tol_rel
    if rel is None and os.environ.get(TOL_ENV):
        try:
            rel = float(os.environ[TOL_ENV])
        except ValueError:
            raise DomainError(f"{TOL_ENV}={os.environ[TOL_ENV]!r} is not a number") from None
    abs_tol = args.tol_abs if args.tol_abs is not None else DEFAULT_CONFIG.abs_tol
    return QuadConfig(abs_tol=abs_tol, rel_tol=rel if rel is not None else DEFAULT_CONFIG.rel_tol)


def _law(alpha, beta, gamma, delta, param) -> StableParams1:
    if param == 0:
        return StableParams0(alpha, beta, gamma, delta).to_param1()
    return StableParams1(alpha, beta, gamma, delta)


def _emit(rows, columns, out, stream, plain_key="value"):
    """Plain prints one ``plain_key`` per line; json one object per line; csv with header."""
    if out == "plain":
        for r in rows:
            v = r[plain_key]
            stream.write((fmt(v) if isinstance(v, float) else str(v)) + "\n")
        return
    if out == "json":
        for r in rows:
            obj = {k: (_round15(r[k]) if isinstance(r[k], float) else r[k]) for k in columns}
            stream.write(json.dumps(obj) + "\n")
        return
    w = csv.writer(stream)
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[k]) if isinstance(r[k], float) else _csv_cell(r[k]) for k in columns])


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def _cmd_moment(args, cfg, out):
    law = _law(args.alpha, args.beta, args.gamma, args.delta, args.param)
    res = moment(law, MomentQuery(args.p, args.kind, args.a), cfg)
    row = dict(alpha=law.alpha, beta=law.beta, gamma=law.gamma, delta=args.delta, param=args.param,
               p=args.p, kind=args.kind, a=args.a, value=res.value, experimental=res.experimental)
    _emit([row], list(row), args.out, out)
    if res.experimental and args.out == "plain":
        sys.stderr.write("note: conjectured formula for p < 0 (experimental)\n")


def _cmd_gfun(args, cfg, out):
    res = gfun_result(args.which, args.d, args.x, args.alpha, args.beta, cfg)
    if not res.converged:
        raise ConvergenceError(f"{args.which}_{args.d}({args.x}) did not converge "
                               f"(estimate {res.value!r}, error {res.error_estimate:.3g})", res)
    row = dict(which=args.which, d=args.d, x=args.x, alpha=args.alpha, beta=args.beta,
               value=res.value, error_estimate=res.error_estimate)
    _emit([row], list(row), args.out, out)


def _cmd_dist(args, cfg, out):
    law = _law(args.alpha, args.beta, args.gamma, args.delta, args.param)
    if args.what == "sample":
        batch = dist.sample(law, args.n, args.seed)
        rows = [dict(index=i, value=float(v)) for i, v in enumerate(batch.values)]
        _emit(rows, ["index", "value"], args.out, out)
        return
    if args.what == "prob_positive":
        rows = [dict(what="prob_positive", x=0.0, value=dist.prob_positive(law, cfg))]
    else:
        fun = getattr(dist, args.what)
        rows = [dict(what=args.what, x=x, value=float(fun(x, law, cfg))) for x in args.x]
    _emit(rows, ["what", "x", "value"], args.out, out)


def _cmd_condexp(args, cfg, out):
    atoms = read_atoms(args.atoms)
    coeffs = cond_exp_coeffs(atoms, args.alpha)
    rows = [dict(x=x, value=cond_exp(atoms, args.alpha, x, args.variant, cfg, coeffs),
                 variant=args.variant) for x in args.x]
    _emit(rows, ["x", "value", "variant"], args.out, out)


def _cmd_verify(args, cfg, out):
    law = _law(args.alpha, args.beta, args.gamma, args.delta, args.param)
    # the pass band follows explicit tolerance overrides, else the oracle default
    overridden = args.tol_rel is not None or os.environ.get(TOL_ENV)
    tol = oracle.Tolerances(rel=cfg.rel_tol if overridden else oracle.Tolerances.rel,
                            mc_sigmas=args.sigmas, mc_n=args.n, seed=args.seed)
    reports = oracle.verify(law, MomentQuery(args.p, args.kind, args.a), tol, cfg, args.oracles)
    rows = [r.to_dict() for r in reports]
    columns = list(oracle.VerificationReport.__dataclass_fields__)
    if args.out == "plain":
        for r in rows:
            status = "PASS" if r["passed"] else "FAIL"
            extra = f" stderr={fmt(r['mc_stderr'])}" if r["mc_stderr"] is not None else ""
            out.write(f"{r['oracle_kind']:<13} {status} analytic={fmt(r['analytic'])} "
                      f"oracle={fmt(r['oracle'])} rel_err={r['rel_err']:.3e}{extra}\n")
        return
    _emit(rows, columns, args.out, out)


def _cmd_table(args, cfg, out):
    columns = ["alpha", "beta", "gamma", "delta", "param", "p", "kind", "a", "value",
               "experimental", "error"]
    rows = []
    for alpha in args.grid_alpha:
        for beta in args.grid_beta:
            for delta in args.grid_delta:
                for p in args.grid_p:
                    row = dict(alpha=float(alpha), beta=float(beta), gamma=float(args.gamma),
                               delta=float(delta), param=args.param, p=float(p), kind=args.kind,
                               a=float(args.a), value=None, experimental=p < 0, error=None)
                    try:
                        law = _law(alpha, beta, args.gamma, delta, args.param)
                        res = moment(law, MomentQuery(p, args.kind, args.a), cfg)
                        row["value"] = res.value
                    except (DomainError, ConvergenceError) as exc:
                        row["error"] = str(exc)
                    rows.append(row)
    _emit(rows, columns, args.out, out)


def bench(law: StableParams1, p: float, repeats: int = BENCH_REPEATS, cfg=None) -> dict:
    """Median wall times (seconds) of one g_d call, one analytic and one density-quadrature moment."""
    cfg = cfg or DEFAULT_CONFIG
    q = MomentQuery(p)
    x = -delta_star(law)

    def timed(fn):
        ts = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            ts.append(time.perf_counter() - t0)
        return statistics.median(ts)

    t_g = timed(lambda: gfun_result("g", -p, x, law.alpha, law.beta, cfg))
    t_m = timed(lambda: moment(law, q, cfg))
    t_d = timed(lambda: oracle.moment_by_density_quadrature(law, q))
    return dict(alpha=law.alpha, beta=law.beta, p=p, repeats=repeats, gfun_s=t_g,
                analytic_moment_s=t_m, density_quad_moment_s=t_d, speed_ratio=t_d / t_m)


def _cmd_bench(args, cfg, out):
    if args.repeats < 1:
        raise DomainError("--repeats must be at least 1")
    law = _law(args.alpha, args.beta, args.gamma, args.delta, args.param)
    res = bench(law, args.p, args.repeats, cfg)
    if args.out == "plain":
        for k, v in res.items():
            out.write(f"{k:<22} {fmt(v) if isinstance(v, float) else v}\n")
        return
    _emit([res], list(res), args.out, out)


_COMMANDS = dict(moment=_cmd_moment, gfun=_cmd_gfun, dist=_cmd_dist, condexp=_cmd_condexp,
                 verify=_cmd_verify, table=_cmd_table, bench=_cmd_bench)


def run(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        buf = io.StringIO()  # nothing is printed unless the whole command succeeds
        with np.errstate(all="ignore"):
            _COMMANDS[args.command](args, cfg, buf)
        out.write(buf.getvalue())
        return 0
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _Fail as exc:
        sys.stderr.write(str(exc) + "\n")
        return exc.code
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (DomainError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run())
