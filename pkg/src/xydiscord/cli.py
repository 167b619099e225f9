"""Command-line front end.

Subcommands: ``point``, ``sweep``, ``scan-qpt``, ``verify-measurement`` and
``ed-converge``. Exit codes: 0 success, 2 argument error, 3 numerical failure,
4 verification mismatch.

Options may also come from ``--config FILE`` holding ``key = value`` lines whose
keys are flag names without the leading dashes. Flags given on the command
line win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .correlators import MAX_DISTANCE, ModelParams, QuadratureConfig, correlator_set
from .criticality import SweepSpec, derivative_wrt_lambda, locate_critical_point, sweep
from .ed import MAX_SITES, MIN_SITES, convergence_ladder
from .errors import NotPositive, QuadratureFailure
from .measures import MISMATCH_TOL, classical_correlation_closed, classical_correlation_optimized, report
from .state import build_state

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_MISMATCH = 0, 2, 3, 4

CSV_FIELDS = [
    "gamma", "lambda", "kT", "n", "sz", "sxx", "syy", "szz",
    "mutual_info", "classical", "discord", "concurrence", "eof",
]
ADDITIVITY_TOL = 1e-10


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """12 significant digits; ``-0`` is printed as ``0``."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x) + 0.0, ".12g")


def _linspace(lo, hi, steps, name) -> list[float]:
    if steps is None:
        return None
    if steps < 1:
        raise UsageError(f"--{name}-steps must be >= 1, got {steps}")
    if lo is None or hi is None:
        raise UsageError(f"--{name}-steps needs --{name}-min and --{name}-max")
    if hi < lo:
        raise UsageError(f"--{name}-max must be >= --{name}-min")
    if steps == 1 and hi != lo:
        raise UsageError(f"--{name}-steps 1 needs --{name}-min == --{name}-max")
    return [float(v) for v in np.linspace(lo, hi, steps)]


def _axis(args, name: str, single: str) -> list[float]:
    values = getattr(args, single)
    grid = _linspace(
        getattr(args, f"{name}_min"), getattr(args, f"{name}_max"), getattr(args, f"{name}_steps"), name
    )
    if values and grid:
        raise UsageError(f"give either --{name} or a --{name}-min/max/steps range, not both")
    out = values or grid
    if not out:
        raise UsageError(f"no {name} values given")
    return out


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=args.quad_tol, rel_tol=args.quad_tol)


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _to_csv(records: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for rec in records:
        w.writerow([fmt(rec[f]) for f in fields])
    return buf.getvalue()


def _to_json(records) -> str:
    return json.dumps(records, indent=1) + "\n"


def _emit(records, fields, args) -> None:
    text = _to_csv(records, fields) if args.format == "csv" else _to_json(records)
    _write(text, args.output)


def _check_additivity(rec: dict) -> None:
    gap = rec["mutual_info"] - rec["classical"] - rec["discord"]
    if abs(gap) > ADDITIVITY_TOL:
        raise ArithmeticError(f"I != C + D by {gap:.3g} at {rec}")


# -- subcommands ------------------------------------------------------------


def cmd_point(args) -> int:
    p = ModelParams(args.gamma[0], args.lam[0], args.kt[0])
    n = args.n[0]
    corr = correlator_set(n, p, _quad(args))
    state = build_state(corr)
    rep = report(state, verify=args.verify_measurement)
    lines = [
        ("gamma", p.gamma), ("lambda", p.lam), ("kT", p.kT), ("n", n),
        ("sz", corr.sz), ("sxx", corr.sxx), ("syy", corr.syy), ("szz", corr.szz),
        ("mutual_info", rep.mutual_information), ("classical", rep.classical),
        ("discord", rep.discord), ("concurrence", rep.concurrence), ("eof", rep.eof),
    ]
    if args.verify_measurement:
        lines += [
            ("classical_optimized", rep.classical_optimized),
            ("theta", rep.optimal_angles.theta),
            ("phi", rep.optimal_angles.phi),
            ("angles_unique", rep.optimal_angles.unique),
        ]
    width = max(len(k) for k, _ in lines)
    _write("".join(f"{k:<{width}} = {fmt(v)}\n" for k, v in lines), args.output)
    if rep.measurement_mismatch:
        print(
            f"verification mismatch: closed-form C={fmt(rep.classical)} vs "
            f"optimized C={fmt(rep.classical_optimized)}",
            file=sys.stderr,
        )
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_sweep(args) -> int:
    lam_grid = _linspace(args.lambda_min, args.lambda_max, args.lambda_steps, "lambda")
    if args.lam and lam_grid:
        raise UsageError("give either --lambda or a --lambda-min/max/steps range, not both")
    if not (args.lam or lam_grid):
        raise UsageError("no lambda values given")
    spec = SweepSpec(
        gamma_values=args.gamma or [],
        lambda_range=(args.lambda_min, args.lambda_max, args.lambda_steps) if lam_grid else None,
        kT_values=_axis(args, "kt", "kt"),
        distances=args.n,
        lambda_values=args.lam,
    )
    rows = sweep(spec, _quad(args), jobs=args.jobs, verify=args.verify_measurement).rows
    records = [r.record() for r in rows]
    for rec in records:
        _check_additivity(rec)
    _emit(records, CSV_FIELDS, args)
    bad = [r for r in rows if r.report.measurement_mismatch]
    for r in bad:
        print(f"verification mismatch at {r.params} n={r.n}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def _self_test() -> int:
    lams = np.linspace(0.1, 2.0, 20)
    d1 = derivative_wrt_lambda(lambda x: x * x, lams, order=1, step=1e-3)
    d2 = derivative_wrt_lambda(lambda x: x * x, lams, order=2, step=1e-3)
    err = max(float(np.max(np.abs(d1 - 2 * lams))), float(np.max(np.abs(d2 - 2.0))))
    ok = err < 1e-8
    print(f"derivative self-test on lambda^2: max error {err:.3e} ({'ok' if ok else 'FAILED'})")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_scan_qpt(args) -> int:
    if args.self_test:
        return _self_test()
    window = (args.lambda_min, args.lambda_max)
    quad_cfg = _quad(args)
    results = []
    for g in args.gamma or []:
        for kT in _axis(args, "kt", "kt"):
            for n in args.n:
                cp = locate_critical_point(
                    g, kT, n, window, step=args.derivative_step,
                    num_points=args.lambda_steps, quad_cfg=quad_cfg,
                )
                results.append(cp)
    if not results:
        raise UsageError("no gamma values given")
    if args.format == "json":
        payload = [
            {
                "gamma": cp.gamma, "kT": cp.kT, "n": cp.n,
                "lambda_star_discord": cp.discord.lambda_star,
                "lambda_star_classical": cp.classical.lambda_star,
                "peak_discord": cp.discord.peak,
                "peak_classical": cp.classical.peak,
                "low_contrast_discord": cp.discord.low_contrast,
                "low_contrast_classical": cp.classical.low_contrast,
                "lambda": cp.discord.lambdas.tolist(),
                "d_discord": cp.discord.derivative.tolist(),
                "d_classical": cp.classical.derivative.tolist(),
            }
            for cp in results
        ]
        _write(_to_json(payload), args.output)
    else:
        fields = [
            "gamma", "kT", "n", "lambda", "d_discord", "d_classical",
            "lambda_star_discord", "lambda_star_classical",
            "low_contrast_discord", "low_contrast_classical",
        ]
        records = []
        for cp in results:
            for lam, dd, dc in zip(cp.discord.lambdas, cp.discord.derivative, cp.classical.derivative):
                records.append({
                    "gamma": cp.gamma, "kT": cp.kT, "n": cp.n, "lambda": lam,
                    "d_discord": dd, "d_classical": dc,
                    "lambda_star_discord": cp.discord.lambda_star,
                    "lambda_star_classical": cp.classical.lambda_star,
                    "low_contrast_discord": cp.discord.low_contrast,
                    "low_contrast_classical": cp.classical.low_contrast,
                })
        _emit(records, fields, args)
    for cp in results:
        print(
            f"gamma={fmt(cp.gamma)} kT={fmt(cp.kT)} n={cp.n}: "
            f"lambda*(dD)={cp.discord.lambda_star:.6f} lambda*(dC)={cp.classical.lambda_star:.6f}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    lams = _axis(args, "lambda", "lam")
    records, bad = [], 0
    for g in args.gamma or []:
        for kT in _axis(args, "kt", "kt"):
            for n in args.n:
                for lam in lams:
                    state = build_state(correlator_set(n, ModelParams(g, lam, kT), _quad(args)))
                    closed = classical_correlation_closed(state)
                    opt, angles = classical_correlation_optimized(
                        state, grid=(args.grid_theta, args.grid_phi)
                    )
                    diff = abs(closed - opt)
                    bad += diff > MISMATCH_TOL
                    records.append({
                        "gamma": g, "lambda": lam, "kT": kT, "n": n,
                        "classical_closed": closed, "classical_optimized": opt,
                        "abs_diff": diff, "theta": angles.theta, "phi": angles.phi,
                        "unique": angles.unique,
                    })
    if not records:
        raise UsageError("no gamma values given")
    _emit(records, list(records[0]), args)
    print(f"{len(records)} points checked, {bad} mismatches above {MISMATCH_TOL:g}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_ed_converge(args) -> int:
    sizes = args.sizes
    for size in sizes:
        if size == 2:
            raise UsageError(
                "N=2 is not a valid ring: the bonds (0,1) and (1,0) coincide, so the "
                "periodic sum would count the single bond twice"
            )
        if not MIN_SITES <= size <= MAX_SITES:
            raise UsageError(f"ring sizes must lie in [{MIN_SITES}, {MAX_SITES}], got {size}")
    records = []
    for g in args.gamma or []:
        for lam in _axis(args, "lambda", "lam"):
            for kT in _axis(args, "kt", "kt"):
                for n in args.n:
                    if n > min(sizes) // 2:
                        raise UsageError(f"separation {n} exceeds half the smallest ring size")
                    for row in convergence_ladder(ModelParams(g, lam, kT), sizes, n, _quad(args)):
                        rec = {"gamma": g, "lambda": lam, "kT": kT, "n": n, "N": row.num_sites}
                        for name, a, b in zip(("sz", "sxx", "syy", "szz"), row.finite.as_tuple(), row.limit.as_tuple()):
                            rec[f"{name}_ed"] = a
                            rec[f"{name}_limit"] = b
                        rec["gap"] = row.gap
                        records.append(rec)
    if not records:
        raise UsageError("no gamma values given")
    _emit(records, list(records[0]), args)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, lam_range=True, kt_range=True) -> None:
    p.add_argument("--gamma", type=float, nargs="+", help="anisotropy value(s) in [0, 1]")
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", help="inverse field value(s)")
    if lam_range:
        p.add_argument("--lambda-min", type=float)
        p.add_argument("--lambda-max", type=float)
        p.add_argument("--lambda-steps", type=int)
    p.add_argument("--kt", type=float, nargs="+", help="temperature(s); 0 is exact zero temperature")
    if kt_range:
        p.add_argument("--kt-min", type=float)
        p.add_argument("--kt-max", type=float)
        p.add_argument("--kt-steps", type=int)
    p.add_argument("--n", type=int, nargs="+", default=[1], help="site separation(s)")
    p.add_argument("--quad-tol", type=float, default=1e-10, help="absolute and relative quadrature tolerance")
    p.add_argument("--output", help="output file (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--config", help="key=value file of default options")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xydiscord",
        description="Pairwise quantum discord and classical correlation in the infinite XY chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="all measures at one parameter point")
    _common(p, lam_range=False, kt_range=False)
    p.add_argument("--verify-measurement", action="store_true",
                   help="also optimize the measurement numerically; exit 4 on disagreement")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="table of measures over a parameter grid")
    _common(p)
    p.add_argument("--verify-measurement", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scan-qpt", help="lambda-derivatives and critical-point location")
    _common(p, kt_range=True)
    p.add_argument("--derivative-step", type=float, default=1e-3)
    p.add_argument("--self-test", action="store_true", help="check the derivative on lambda^2 and exit")
    p.set_defaults(func=cmd_scan_qpt, lambda_min=0.8, lambda_max=1.2, lambda_steps=41, n=[4])

    p = sub.add_parser("verify-measurement", help="closed-form vs optimized classical correlation")
    _common(p)
    p.add_argument("--grid-theta", type=int, default=64)
    p.add_argument("--grid-phi", type=int, default=128)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ed-converge", help="exact diagonalization convergence ladder")
    _common(p)
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12], help="ring sizes N")
    p.set_defaults(func=cmd_ed_converge)
    return parser


def _config_argv(argv: list[str]) -> list[str]:
    """Splice ``--config`` file options in front of the explicit flags."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    extra: list[str] = []
    for lineno, line in enumerate(Path(known.config).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{known.config}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.lstrip("-")
        if value.lower() in ("true", "yes", "on"):
            extra.append(flag)
        elif value.lower() not in ("false", "no", "off"):
            extra += [flag, *value.replace(",", " ").split()]
    if not argv:
        return extra
    return argv[:1] + extra + argv[1:]


def _validate(args) -> None:
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if not args.quad_tol > 0:
        raise UsageError("--quad-tol must be positive")
    for n in args.n:
        if n < 1 or n > MAX_DISTANCE:
            raise UsageError(f"--n values must lie in [1, {MAX_DISTANCE}]")
    if args.command == "point":
        for name in ("gamma", "lam", "kt"):
            if not getattr(args, name) or len(getattr(args, name)) != 1:
                raise UsageError(f"point needs exactly one --{name.replace('lam', 'lambda')} value")
        if len(args.n) != 1:
            raise UsageError("point needs exactly one --n value")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_config_argv(argv))
        _validate(args)
        return args.func(args)
    except (QuadratureFailure, NotPositive, ArithmeticError) as exc:
        print(f"xydiscord: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValueError, OSError) as exc:
        print(f"xydiscord: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
