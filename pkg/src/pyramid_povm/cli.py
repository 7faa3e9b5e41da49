"""Command-line front end: figure data, Table I thresholds and optimizer verification as CSV or JSON."""
from __future__ import annotations

import argparse
import io
import json
import sys
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from . import __version__
from .information import (
    asymptotic_ratio,
    family_information,
    optimum,
    srm_information,
)
from .optimizer import verify_against_closed_form
from .pyramid import make_pyramid
from .thresholds import (
    OPTIMAL,
    SRM,
    alice_bob_information,
    ck_threshold,
    critical_disturbance,
    eve_information,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

FIG2_N = (2, 3, 5, 10, 20, 100)
FIG3_LAMBDAS = (0.3, 0.4, 0.5, 0.6, 0.7, 0.77276, 0.8, 0.9)
FIG4_N = (3, 5, 10, 20, 100)
TABLE1_N = (2, 3, 4, 5, 10, 30, 50, 100)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(text: str, lo: float = 0.0, hi: float = 1.0) -> list[float]:
    """``min:max:steps`` (inclusive, steps >= 2) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            a, b, n = float(a), float(b), int(n)
            if n < 2:
                raise UsageError(f"grid {text!r}: steps must be >= 2")
            if a > b:
                raise UsageError(f"grid {text!r}: min exceeds max")
            values = [float(x) for x in np.linspace(a, b, n)]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed grid {text!r}: {exc}") from None
    if not values:
        raise UsageError(f"empty grid {text!r}")
    bad = [v for v in values if not lo <= v <= hi]
    if bad:
        raise UsageError(f"grid {text!r} leaves [{lo:g}, {hi:g}]: {bad[0]:g}")
    return values


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pyramid-povm", description=__doc__)
    ap.add_argument("--command", required=True,
                    choices=["fig2", "fig3", "fig4", "table1", "optimize", "threshold"])
    ap.add_argument("--n", type=int, action="append", dest="n_values",
                    help="alphabet size; repeat for several")
    ap.add_argument("--lambda-grid")
    ap.add_argument("--d-grid")
    ap.add_argument("--t-grid")
    ap.add_argument("--strategy", choices=[SRM, OPTIMAL], default=OPTIMAL)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--restarts", type=int, default=16)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--format", choices=["csv", "json"], default="csv")
    ap.add_argument("--out", default="-")
    return ap


def _ns(args, default) -> list[int]:
    ns = args.n_values or list(default)
    if any(n < 2 for n in ns):
        raise UsageError("--n must be >= 2")
    return ns


def cmd_fig2(args) -> tuple[list[str], list[list], int]:
    lams = parse_grid(args.lambda_grid or "0:1:101")
    rows = [[N, lam, srm_information(make_pyramid(N, lam))] for N in _ns(args, FIG2_N) for lam in lams]
    return ["N", "lambda", "I_srm"], rows, EXIT_OK


def cmd_fig3(args):
    lams = parse_grid(args.lambda_grid) if args.lambda_grid else list(FIG3_LAMBDAS)
    Ts = parse_grid(args.t_grid or "0:1:101")
    rows = []
    for N in _ns(args, (10,)):
        for lam in lams:
            p = make_pyramid(N, lam)
            if not 0.0 < lam < 1.0:
                raise UsageError("fig3 needs 0 < lambda < 1")
            isrm = srm_information(p)
            rows += [[N, lam, T, family_information(p, T) / isrm] for T in Ts]
    return ["N", "lambda", "T", "ratio"], rows, EXIT_OK


def ratio_max_over_srm(N: int, lam: float) -> float:
    """Imax / Isrm; at lambda = 1 the limiting value is reported."""
    if lam >= 1.0:
        return 1.0 if N == 2 else asymptotic_ratio(N)
    rep = optimum(make_pyramid(N, lam))
    return rep.Imax / rep.Isrm


def cmd_fig4(args):
    lams = parse_grid(args.lambda_grid or "0:1:101")
    rows = [[N, lam, ratio_max_over_srm(N, lam)] for N in _ns(args, FIG4_N) for lam in lams]
    return ["N", "lambda", "ratio"], rows, EXIT_OK


def percent(x: float, places: int) -> str:
    q = Decimal(1).scaleb(-places)
    return str((Decimal(repr(x)) * 100).quantize(q, rounding=ROUND_HALF_EVEN))


def cmd_table1(args):
    rows = []
    for N in _ns(args, TABLE1_N):
        srm_t = ck_threshold(N, SRM, args.tol_threshold).D_star
        opt_t = ck_threshold(N, OPTIMAL, args.tol_threshold).D_star
        rows.append([N, percent(critical_disturbance(N), 1), percent(srm_t, 4), percent(opt_t, 4),
                     critical_disturbance(N), srm_t, opt_t])
    header = ["N", "critical_pct", "srm_threshold_pct", "true_threshold_pct",
              "critical", "srm_threshold", "true_threshold"]
    return header, rows, EXIT_OK


def cmd_threshold(args):
    ns = _ns(args, TABLE1_N)
    if args.d_grid:
        rows = []
        for N in ns:
            for D in parse_grid(args.d_grid, 0.0, (N - 1) / N):
                rows.append([N, D, alice_bob_information(N, D), eve_information(N, D, args.strategy)])
        return ["N", "D", "I_AB", "I_AE"], rows, EXIT_OK
    rows = []
    for N in ns:
        rep = ck_threshold(N, args.strategy, args.tol_threshold)
        rows.append([N, args.strategy, rep.D_star, rep.I_at_threshold, rep.critical_D,
                     rep.bracket[0], rep.bracket[1]])
    return ["N", "strategy", "D_star", "I_at_threshold", "critical_D", "bracket_lo", "bracket_hi"], rows, EXIT_OK


def cmd_optimize(args):
    lams = parse_grid(args.lambda_grid or "0.1:0.9:9")
    rows, status = [], EXIT_OK
    for N in _ns(args, (3,)):
        rep = verify_against_closed_form(N, lams, seed=args.seed, restarts=args.restarts, tol=args.tol)
        if not rep.ok:
            status = EXIT_VERIFY
        for pt in rep.points:
            rows.append([N, rep.M, pt.lam, pt.optimized, pt.closed_form, pt.excess, pt.regime,
                         pt.inconclusive_weight, pt.iterations,
                         pt.excess <= rep.excess_tol and pt.deficit <= rep.deficit_tol])
    header = ["N", "M", "lambda", "I_optimized", "I_max", "excess", "regime",
              "inconclusive_weight", "iterations", "ok"]
    return header, rows, status


COMMANDS = {"fig2": cmd_fig2, "fig3": cmd_fig3, "fig4": cmd_fig4, "table1": cmd_table1,
            "optimize": cmd_optimize, "threshold": cmd_threshold}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render(args, header, rows, status) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for r in rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        return buf.getvalue()
    config = {k: v for k, v in vars(args).items() if k != "tol_threshold"}
    doc = {
        "version": __version__,
        "config": config,
        "columns": header,
        "results": [dict(zip(header, r)) for r in rows],
        "status": status,
    }
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.tol_threshold = 1e-12
        if args.restarts < 1:
            raise UsageError("--restarts must be >= 1")
        header, rows, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(args, header, rows, status)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
