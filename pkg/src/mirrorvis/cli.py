"""Command-line front end.

Commands: params, visibility, revival, scan, validate. Parameters come
from a JSON config file (see params.params_from_config for the two
schemas); command flags override file values which override built-in
defaults. CSV outputs start with a "#" comment carrying the canonical
effective config, and all floats are written in scientific notation with
12 significant digits, so identical configs reproduce byte-identical
files.

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import ConfigError, NumericsError
from .params import LAMBDA_CSL, params_from_config
from .scan import (
    csl_threshold_curve,
    optimal_temperature,
    run_scan,
    scan_base,
    write_curve_csv,
    write_scan_csv,
)
from .selfcheck import run_validation_checks
from .visibility import (
    ROUTE_CLOSED_FORM,
    ROUTE_ODE_ANALYTIC,
    ROUTE_ODE_QUADRATURE,
    first_revival,
    time_grid,
    visibility_closed_form,
    visibility_quadrature,
    visibility_thermal,
    write_visibility_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_VALIDATION = 4


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _round12(v):
    if v is None:
        return None
    return float(f"{float(v):.11e}")


def _load_config(path) -> dict:
    if path is None:
        raise ConfigError("--config <file.json> is required for this command")
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _emit_json(report: dict, out_path, effective_cfg: dict):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    print(f"config: {_canonical(effective_cfg)}", file=sys.stderr)
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_params(args) -> int:
    cfg = _load_config(args.config)
    parsed = params_from_config(cfg)
    d = parsed.dimensionless
    try:
        omega_tilde = d.omega_tilde
    except NumericsError:
        omega_tilde = None
    report = {
        "sigma": _round12(d.sigma),
        "kappa": _round12(d.kappa),
        "Lambda_T": _round12(d.Lambda_T),
        "Lambda": _round12(d.Lambda),
        "chi": _round12(d.chi),
        "inv_Q": _round12(d.inv_Q),
        "n_bar": _round12(d.n_bar),
        "omega_tilde": _round12(omega_tilde),
        "extinction": _round12(d.kappa**2 * d.Lambda_T),
        "narrowing": _round12(d.kappa**2 * d.n_bar),
    }
    _emit_json(report, args.out, {"command": "params", "config": cfg})
    return EXIT_OK


_ROUTE_CHOICES = ("ode", "closed", "quadrature", "all")


def cmd_visibility(args) -> int:
    cfg = _load_config(args.config)
    parsed = params_from_config(cfg)
    d = parsed.dimensionless
    if args.periods < 0:
        raise ConfigError("--periods must be >= 0")
    if args.steps_per_period < 100:
        raise ConfigError("--steps-per-period must be >= 100")
    if args.quad_order < 20:
        raise ConfigError("--quad-order must be >= 20")

    want = ([args.route] if args.route != "all"
            else ["ode", "quadrature", "closed"])
    # incompatibilities are reported before any computation starts
    if "quadrature" in want and d.n_bar == 0:
        if args.route == "quadrature":
            raise ConfigError("route=quadrature requires n_bar > 0")
        want.remove("quadrature")
        print("note: skipping quadrature route (n_bar = 0)", file=sys.stderr)
    if "closed" in want and d.inv_Q >= 2:
        raise ConfigError("route=closed requires inv_Q < 2 (underdamped)")

    taus = time_grid(args.periods, args.steps_per_period)
    series = []
    for route in want:
        if route == "ode":
            series.append(visibility_thermal(d, taus))
        elif route == "quadrature":
            series.append(visibility_quadrature(d, taus, args.quad_order))
        else:
            series.append(visibility_closed_form(d, taus / d.omega_m))

    effective = {
        "command": "visibility", "config": cfg,
        "options": {"periods": args.periods,
                    "steps_per_period": args.steps_per_period,
                    "route": args.route, "quad_order": args.quad_order},
    }
    comment = f"config {_canonical(effective)}"
    if args.out:
        write_visibility_csv(series, args.out, comment=comment)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        _stdout_csv(series, comment)
    return EXIT_OK


def _stdout_csv(series, comment):
    import io

    from .visibility import VISIBILITY_CSV_HEADER

    buf = io.StringIO()
    buf.write(f"# {comment}\n{VISIBILITY_CSV_HEADER}\n")
    for s in series:
        for i in range(len(s.taus)):
            buf.write(f"{s.taus[i]:.11e},{s.t_seconds[i]:.11e},"
                      f"{s.nu[i]:.11e},{s.neg_log_nu[i]:.11e},{s.route}\n")
    sys.stdout.write(buf.getvalue())


def cmd_revival(args) -> int:
    cfg = _load_config(args.config)
    parsed = params_from_config(cfg)
    d = parsed.dimensionless
    if d.inv_Q >= 2:
        raise ConfigError("first revival requires inv_Q < 2 (underdamped)")
    fr = first_revival(d)
    report = {"t1_s": _round12(fr.t1_seconds), "nu": _round12(fr.nu),
              "neg_log_nu": _round12(fr.neg_log_nu)}
    _emit_json(report, args.out, {"command": "revival", "config": cfg})
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = _load_config(args.config) if args.config else None
    omega_m = 3e3
    lambda_qq = args.lambda_qq
    lambda_nonenv = args.lambda_nonenv
    if cfg is not None:
        parsed = params_from_config(cfg)
        if parsed.mode != "physical":
            raise ConfigError("scan requires a physical-mode config "
                              "(omega_m_rad_s sets the oscillator)")
        omega_m = parsed.physical.omega_m
        if args.lambda_qq is None:
            lambda_qq = parsed.physical.lambda_qq
        if args.lambda_nonenv is None:
            lambda_nonenv = parsed.physical.Lambda_nonenv
    lambda_qq = 1.0 if lambda_qq is None else lambda_qq
    lambda_nonenv = 0.0 if lambda_nonenv is None else lambda_nonenv

    for name, lo, hi, n in (("t", args.t_min, args.t_max, args.t_points),
                            ("gamma", args.gamma_min, args.gamma_max,
                             args.gamma_points)):
        if not (lo > 0 and hi > lo and n >= 1):
            raise ConfigError(f"--{name}-min/--{name}-max/--{name}-points "
                              "must define a positive increasing axis")
    if args.out is None:
        raise ConfigError("scan requires --out <grid.csv>")

    T_axis = np.logspace(np.log10(args.t_min), np.log10(args.t_max),
                         args.t_points)
    g_axis = np.logspace(np.log10(args.gamma_min), np.log10(args.gamma_max),
                         args.gamma_points)
    base = scan_base(omega_m=omega_m, Lambda_nonenv=lambda_nonenv,
                     lambda_qq=lambda_qq)
    grid = run_scan(base, T_axis, g_axis, kappa=args.kappa,
                    lambda_qq=lambda_qq, workers=args.workers)
    for (i, j, msg) in grid.errors:
        print(f"warning: cell T={T_axis[i]:.3e} gamma={g_axis[j]:.3e}: {msg}",
              file=sys.stderr)

    effective = {
        "command": "scan", "config": cfg,
        "options": {"t_min": args.t_min, "t_max": args.t_max,
                    "t_points": args.t_points, "gamma_min": args.gamma_min,
                    "gamma_max": args.gamma_max,
                    "gamma_points": args.gamma_points, "kappa": args.kappa,
                    "lambda_qq": lambda_qq, "lambda_nonenv": lambda_nonenv,
                    "csl_line": args.csl_line, "omega_m": omega_m},
    }
    comment = f"config {_canonical(effective)}"
    note = ("visibility model: first-revival extinction "
            "exp(-pi kappa^2 (12 Lambda + chi)); no thermal prefactor")
    write_scan_csv(grid, args.out, comment=comment, extra_comments=[note])

    root, ext = os.path.splitext(args.out)
    curve_path = f"{root}_csl{ext or '.csv'}"
    T, gam = csl_threshold_curve(grid, args.csl_line)
    write_curve_csv(T, gam, curve_path, comment=comment)
    print(f"wrote {args.out} and {curve_path}", file=sys.stderr)

    if lambda_qq >= 1:
        t_star = optimal_temperature(omega_m, lambda_qq)
        print(f"T_opt_K = {t_star:.11e}")
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = run_validation_checks(stationarity_tol=args.stationarity_tol,
                                   fault=args.fault)
    failed = 0
    for ch in checks:
        print(ch.line())
        failed += 0 if ch.passed else 1
    if failed:
        print(f"{failed} of {len(checks)} checks failed")
        return EXIT_VALIDATION
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mirrorvis",
        description="Photon-interference visibility of a vibrating mirror "
                    "under thermal decoherence, friction and coordinate "
                    "diffusion.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON parameter file")
        p.add_argument("--out", help="output path")
        p.add_argument("--workers", type=int,
                       default=os.cpu_count() or 1,
                       help="parallel workers for grid scans")

    p = sub.add_parser("params", help="derived dimensionless parameter report")
    common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("visibility", help="visibility time series as CSV")
    common(p)
    p.add_argument("--periods", type=float, default=3.0)
    p.add_argument("--steps-per-period", type=int, default=2000)
    p.add_argument("--route", choices=_ROUTE_CHOICES, default="all")
    p.add_argument("--quad-order", type=int, default=40)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("revival", help="first-revival summary as JSON")
    common(p)
    p.set_defaults(func=cmd_revival)

    p = sub.add_parser("scan", help="(T, gamma) grid of first-revival visibility")
    common(p)
    p.add_argument("--t-min", type=float, default=1e-10)
    p.add_argument("--t-max", type=float, default=1e-2)
    p.add_argument("--t-points", type=int, default=200)
    p.add_argument("--gamma-min", type=float, default=1e-8)
    p.add_argument("--gamma-max", type=float, default=1e-1)
    p.add_argument("--gamma-points", type=int, default=200)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--lambda-qq", type=float, default=None)
    p.add_argument("--lambda-nonenv", type=float, default=None)
    p.add_argument("--csl-line", type=float, default=LAMBDA_CSL)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate", help="run the built-in validation suite")
    common(p)
    p.add_argument("--fault", action="store_true",
                   help="inject a sign fault into the c5 equation "
                        "(self-test of the residual oracle)")
    p.add_argument("--stationarity-tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericsError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
