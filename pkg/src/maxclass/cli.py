"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 closed-form certificate failure,
4 disagreement between the closed form and the optimizer.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from .closed_form import solve
from .density import empirical_density, equidistribution_report, limiting_density
from .errors import CertificateError, ContractError, OptimizerFailure
from .optimizer import OptimizerConfig, lagrange_residual_A, maximize
from .records import SCHEMA_VERSION, OutputRecord, fmt_real, write_csv
from .root_systems import FAMILIES, GroupSpec, angle_distance, log_volume_gradient, project_gradient

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CERTIFICATE = 3
EXIT_DISAGREEMENT = 4

GRADIENT_TOL = 1e-8
LOG_VOLUME_TOL = 1e-9
PLOT_HALF_WIDTH = 0.05


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("MAXCLASS_SEED")
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw, 10)
    except ValueError:
        raise UsageError(f"MAXCLASS_SEED must be an unsigned decimal integer, got {raw!r}")
    if not 0 <= seed < 2 ** 64:
        raise UsageError("MAXCLASS_SEED must fit in 64 unsigned bits")
    return seed


def _spec(args) -> GroupSpec:
    if args.family == "G2":
        if args.rank is not None:
            raise UsageError("--rank is not accepted for G2")
        return GroupSpec("G2")
    if args.rank is None:
        raise UsageError(f"--rank is required for family {args.family}")
    try:
        return GroupSpec(args.family, args.rank)
    except ContractError as exc:
        raise UsageError(str(exc))


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_solve(args) -> int:
    spec = _spec(args)
    record = OutputRecord.from_result(solve(spec))
    _emit(record.to_json() if args.format == "json" else record.to_csv())
    return EXIT_OK


def _g2_symmetric_residual(theta) -> float:
    t1, t2 = theta
    c = [math.cos(t1), math.cos(t2), math.cos(t1 + t2)]
    a = sum(c)
    b = c[0] * c[1] + c[1] * c[2] + c[0] * c[2]
    return abs(a - b)


def cmd_verify(args) -> int:
    spec = _spec(args)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.starts < 1:
        raise UsageError("--starts must be positive")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    closed = solve(spec)
    report = {
        "schema_version": SCHEMA_VERSION,
        "group": spec.family,
        "rank": spec.rank,
        "starts": args.starts,
        "seed": seed,
        "tol": fmt_real(args.tol),
        "closed_form_angles": [fmt_real(a) for a in closed.angles],
        "closed_form_log_volume": fmt_real(closed.log_volume),
    }
    checks: dict[str, bool] = {}
    try:
        opt = maximize(spec, OptimizerConfig(starts=args.starts, seed=seed))
    except OptimizerFailure as exc:
        report["error"] = str(exc)
        checks["optimizer_converged"] = False
    else:
        best = opt.best
        deviation = angle_distance(spec, closed.angles, best)
        grad = float(np.linalg.norm(project_gradient(spec, log_volume_gradient(spec, best))))
        gap = opt.best_log_volume - closed.log_volume
        converged = sum(o.converged for o in opt.per_start_outcomes)
        report.update({
            "optimizer_angles": [fmt_real(a) for a in best],
            "optimizer_log_volume": fmt_real(opt.best_log_volume),
            "angle_deviation": fmt_real(deviation),
            "gradient_norm": fmt_real(grad),
            "log_volume_gap": fmt_real(gap),
            "converged_starts": int(converged),
            "distinct_optima_count": opt.distinct_optima_count,
        })
        checks["angle_deviation"] = deviation <= args.tol
        checks["gradient_norm"] = grad <= GRADIENT_TOL
        checks["unique_optimum"] = opt.distinct_optima_count == 1
        # the optimizer must not find anything larger than the closed form
        checks["closed_form_not_beaten"] = gap <= LOG_VOLUME_TOL
        if spec.family == "A":
            res = lagrange_residual_A(best, spec.rank)
            report["lagrange_residual"] = fmt_real(res)
        if spec.family == "G2":
            res = _g2_symmetric_residual(best)
            report["A_minus_B_residual"] = fmt_real(res)
            checks["A_equals_B"] = res <= args.tol
    report["checks"] = checks
    report["passed"] = all(checks.values())
    _emit(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if report["passed"] else EXIT_DISAGREEMENT


def plot_rows(cosines, half_width: float = PLOT_HALF_WIDTH):
    """Rows (x, empirical density, limiting density) on a grid inside (-1, 1)."""
    steps = int(round(1.0 / half_width))
    rows = [["x", "empirical_density", "limiting_density"]]
    for i in range(-steps + 1, steps):
        x = i * half_width
        rows.append([fmt_real(x), fmt_real(empirical_density(cosines, x, half_width)),
                     fmt_real(limiting_density(x))])
    return rows


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".maxclass-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_density(args) -> int:
    if args.family not in ("B", "C", "D"):
        raise UsageError("density analysis is defined for families B, C and D only")
    spec = _spec(args)
    result = solve(spec)
    rep = equidistribution_report(np.sort(result.angles))
    out = {
        "schema_version": SCHEMA_VERSION,
        "group": spec.family,
        "rank": spec.rank,
        "n": rep.n,
        "ks_statistic": fmt_real(rep.ks_statistic),
        "max_gap_deviation": fmt_real(rep.max_gap_deviation),
    }
    if args.plot_data:
        write_atomic(args.plot_data, write_csv(plot_rows(result.cosines)))
        out["plot_data"] = args.plot_data
    _emit(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def table_rows(max_rank: int):
    specs = [GroupSpec("A", n) for n in range(2, max_rank + 1)]
    for fam, lo in (("B", 1), ("C", 1), ("D", 2)):
        specs += [GroupSpec(fam, n) for n in range(lo, max_rank + 1)]
    specs.append(GroupSpec("G2"))
    results = [solve(s) for s in specs]
    ncoef = max(len(r.polynomial.coefficients) if r.polynomial else 0 for r in results)
    nang = max(len(r.angles) for r in results)
    header = (["family", "rank"] + [f"c{k}" for k in range(ncoef)]
              + [f"theta_{k + 1}" for k in range(nang)] + ["log_volume"])
    rows = [header]
    for r in results:
        coefs = r.polynomial.to_strings() if r.polynomial else []
        angles = [fmt_real(a) for a in r.angles]
        rows.append([r.spec.family, str(r.spec.rank)]
                    + coefs + [""] * (ncoef - len(coefs))
                    + angles + [""] * (nang - len(angles))
                    + [fmt_real(r.log_volume)])
    return rows


def cmd_table(args) -> int:
    if args.max_rank < 2:
        raise UsageError("--max-rank must be at least 2")
    sys.stdout.write(write_csv(table_rows(args.max_rank)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxclass",
        description="Largest-volume conjugacy classes: closed forms, numerical checks, tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="closed-form maximiser as JSON or CSV")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--rank", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare the closed form with multistart ascent")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--rank", type=int)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--seed", type=int, default=None,
                   help="defaults to $MAXCLASS_SEED, else 0")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="equidistribution of the optimal angles")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--rank", type=int)
    p.add_argument("--plot-data", metavar="PATH")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("table", help="CSV of every closed-form answer up to a rank")
    p.add_argument("--max-rank", type=int, default=8)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"maxclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as exc:
        print(f"maxclass: certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
