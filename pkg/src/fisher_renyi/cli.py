"""Command-line front end: ``compute``, ``sweep``, ``chart`` and ``verify``.

Options may also come from a flat ``key=value`` file given with
``--config``; keys are the long option names without the leading dashes
(``lambda-range=0.6:5:100``), and flags on the command line override them.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
3 accuracy failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import charts
from .blackbody import complexity_report
from .complexity import complexity, validate_params
from .density import (BlackbodySpec, GenGaussianSpec, blackbody, gen_gaussian, load_grid_csv,
                      load_step_csv, step_model)
from .errors import AccuracyError, DomainError
from .measures import ParamPair
from .quadrature import QuadConfig

EXIT_OK, EXIT_VERIFY, EXIT_INVALID, EXIT_ACCURACY = 0, 1, 2, 3
CSV_COLUMNS = ("p", "lambda", "d", "A_R", "A_F", "K_FR", "C")


class UsageError(Exception):
    """Bad option values; reported with exit code 2."""


def parse_number(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(t)


def positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> ``n`` evenly spaced values from ``a`` to ``b`` inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be a:b:n, got {text!r}")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise argparse.ArgumentTypeError(f"range needs n >= 1, got {n}")
    if n == 1:
        return np.array([a])
    return np.linspace(a, b, n)


def parse_list(text: str) -> List[float]:
    return [parse_number(t) for t in text.split(",") if t.strip()]


def format_number(v: Optional[float]) -> str:
    """17 significant digits in scientific notation; empty for a missing value."""
    if v is None:
        return ""
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.16e}"


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def read_config(path) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file with default option values")
    common.add_argument("--rel-tol", type=positive_float, default=1e-11, help="quadrature relative tolerance")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--d", type=float, help="blackbody dimension")
    params.add_argument("--p", type=parse_number, help="Fisher exponent p (1..inf)")
    params.add_argument("--lambda", dest="lam", type=parse_number, help="Renyi order lambda")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--p-range", type=parse_range, help="a:b:n")
    grid.add_argument("--lambda-range", type=parse_range, help="a:b:n")
    grid.add_argument("--jobs", type=int, default=None, help="worker processes (default: all CPUs)")
    grid.add_argument("--extrema-out", help="extrema JSON path (default: next to --out)")

    parser = argparse.ArgumentParser(prog="fisher-renyi",
                                     description="Biparametric Fisher-Renyi complexity calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common, params], help="one complexity report (JSON)")
    c.add_argument("--density", choices=("blackbody", "gen-gaussian", "step", "grid"), default="blackbody")
    c.add_argument("--theta", type=float, default=1.0, help="blackbody temperature scale k_B T / h")
    c.add_argument("--file", help="CSV for step (edge,height) or grid (x,pdf) densities")
    c.add_argument("--shape-p", type=parse_number, help="generalized Gaussian p (default: --p)")
    c.add_argument("--shape-lambda", type=parse_number, help="generalized Gaussian lambda (default: --lambda)")
    c.add_argument("--numeric", action="store_true", help="blackbody by quadrature instead of the analytic path")

    s = sub.add_parser("sweep", parents=[common, params, grid],
                       help="blackbody C over p and/or lambda lines for one or more d")
    s.add_argument("--d-values", type=parse_list, help="comma-separated dimensions")

    sub.add_parser("chart", parents=[common, params, grid], help="blackbody (p, lambda) chart for one d")

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("--inject-fault", choices=("k_fr", "a_r", "zeta"), help="corrupt a constant (test hook)")
    v.add_argument("--only", action="append", help="run only the named check (repeatable)")
    parser.commands = {"compute": c, "sweep": s, "chart": sub.choices["chart"], "verify": v}
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # re-parse with the file's values as defaults so explicit flags win
        values = read_config(args.config)
        if "lambda" in values:
            values["lam"] = values.pop("lambda")
        sub = parser.commands[args.command]
        actions = {a.dest: a for a in sub._actions}
        unknown = sorted(set(values) - set(actions))
        if unknown:
            raise UsageError(f"{args.config}: unknown option(s) {', '.join(unknown)}")
        for key, value in values.items():
            if actions[key].nargs == 0:  # on/off flags
                values[key] = value.lower() in ("1", "true", "yes", "on")
        sub.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--lambda" if n == "lam" else "--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"missing required option(s): {flags}")


def cmd_compute(args) -> dict:
    _need(args, "p", "lam")
    params = ParamPair(args.p, args.lam)
    cfg = QuadConfig(rel_tol=args.rel_tol)
    if args.density == "blackbody":
        _need(args, "d")
        problems = validate_params(params, blackbody_d=args.d)
        if problems:
            raise DomainError("invalid parameters: " + "; ".join(problems))
        if args.numeric:
            report = complexity(blackbody(BlackbodySpec(args.d, args.theta)), params, cfg)
        else:
            report = complexity_report(args.p, args.lam, args.d, args.theta)
        extra = {"density": {"kind": "blackbody", "d": args.d, "theta": args.theta}}
    else:
        problems = validate_params(params)
        if problems:
            raise DomainError("invalid parameters: " + "; ".join(problems))
        if args.density == "gen-gaussian":
            shape = GenGaussianSpec(args.shape_p if args.shape_p is not None else args.p,
                                    args.shape_lambda if args.shape_lambda is not None else args.lam)
            rho = gen_gaussian(shape)
            extra = {"density": {"kind": "gen-gaussian", "p": shape.p, "lambda": shape.lam}}
        else:
            _need(args, "file")
            rho = step_model(load_step_csv(args.file)) if args.density == "step" else load_grid_csv(args.file)
            extra = {"density": {"kind": args.density, "file": args.file}}
        report = complexity(rho, params, cfg)
    return {**report.as_dict(), **extra}


# ---------------------------------------------------------------------------
# sweep / chart
# ---------------------------------------------------------------------------

def _axis(args, single, rng, flag):
    if rng is not None:
        return np.asarray(rng, dtype=float)
    if single is not None:
        return np.array([single], dtype=float)
    raise UsageError(f"need --{flag} or --{flag}-range")


def _grid_for(p_values, lam_values, d, jobs):
    """Chart rows and extrema; lines get 1-D extrema, full grids 2-D ones."""
    if len(p_values) > 1 and len(lam_values) > 1:
        ch = charts.chart(p_values, lam_values, d, jobs=jobs)
        return ch.points, [e.as_dict() for e in ch.extrema]
    args = [(float(p), float(lam), float(d)) for p in p_values for lam in lam_values]
    points = charts.evaluate_points(args, jobs)
    extrema = []
    if len(p_values) > 1 or len(lam_values) > 1:
        along_p = len(p_values) > 1
        fixed = float(lam_values[0] if along_p else p_values[0])
        xs = p_values if along_p else lam_values
        fun = (lambda x: charts._value(x, fixed, d)) if along_p else (lambda x: charts._value(fixed, x, d))
        for kind, x, c in charts.line_extrema(xs, fun):
            p, lam = (x, fixed) if along_p else (fixed, x)
            extrema.append({"kind": kind, "p": p, "lambda": lam, "d": float(d), "C": c,
                            "along": "p" if along_p else "lambda"})
    return points, extrema


def run_grid(args, d_values) -> tuple:
    p_values = _axis(args, args.p, args.p_range, "p")
    lam_values = _axis(args, args.lam, args.lambda_range, "lambda")
    rows, extrema = [], []
    for d in d_values:
        points, ext = _grid_for(p_values, lam_values, d, args.jobs)
        rows.extend(points)
        extrema.extend(ext)
    return rows, extrema


def csv_text(points) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for pt in points:
        lines.append(",".join([format_number(pt.p), format_number(pt.lam), format_number(pt.d),
                               format_number(pt.a_r), format_number(pt.a_f),
                               format_number(pt.k_fr), format_number(pt.c)]))
    return "\n".join(lines) + "\n"


def json_rows(points) -> dict:
    return {"columns": list(CSV_COLUMNS),
            "rows": [[pt.p, pt.lam, pt.d, pt.a_r, pt.a_f, pt.k_fr, pt.c] for pt in points]}


def _sidecar_path(args) -> Optional[Path]:
    if args.extrema_out:
        return Path(args.extrema_out)
    if args.out:
        out = Path(args.out)
        return out.with_name(out.stem + ".extrema.json")
    return None


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2) + "\n"


def _grid_command(args, d_values) -> int:
    rows, extrema = run_grid(args, d_values)
    fmt = args.format or "csv"
    if fmt == "csv":
        _emit(args, csv_text(rows))
    else:
        _emit(args, _dump({**json_rows(rows), "extrema": extrema}))
    sidecar = _sidecar_path(args)
    if sidecar is not None:
        sidecar.write_text(_dump({"extrema": extrema}))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.d_values:
        d_values = args.d_values
    elif args.d is not None:
        d_values = [args.d]
    else:
        raise UsageError("need --d or --d-values")
    return _grid_command(args, d_values)


def cmd_chart(args) -> int:
    _need(args, "d", "p_range", "lambda_range")
    if len(args.p_range) < 2 or len(args.lambda_range) < 2:
        raise UsageError("a chart needs at least 2 points along each axis")
    return _grid_command(args, [args.d])


def cmd_verify(args) -> int:
    from .verify import run_checks, summary
    lines = []

    def report(res):
        lines.append(res.line())
        if not args.out:
            print(res.line(), flush=True)
    results = run_checks(rel_tol=args.rel_tol, fault=args.inject_fault, only=args.only, report=report)
    s = summary(results)
    tail = f"{s['passed']} passed, {s['failed']} failed"
    if args.out:
        Path(args.out).write_text("\n".join(lines + [tail]) + "\n")
    else:
        print(tail)
    return EXIT_OK if s["failed"] == 0 else EXIT_VERIFY


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        if args.command == "compute":
            if args.format == "csv":
                raise UsageError("compute writes a JSON report; --format csv applies to sweep and chart")
            _emit(args, _dump(cmd_compute(args)))
            return EXIT_OK
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "chart":
            return cmd_chart(args)
        return cmd_verify(args)
    except (DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AccuracyError as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
