#!/usr/bin/env python3
"""Render visibility-vs-time curves from a mirrorvis visibility CSV.

One curve per route column value, revival marks at tau = 2*pi*m, optional
logarithmic visibility axis. The script is a read-only consumer: every
number drawn comes from a CSV cell.

Usage: plot_timeseries.py <csv> -o <png> [--log]
"""

import argparse
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_HEADER = ["tau", "t_s", "nu", "neg_log_nu", "route"]

ROUTE_STYLE = {
    "ode_analytic": dict(color="#1f77b4", lw=1.8, ls="-"),
    "ode_quadrature": dict(color="#d62728", lw=1.2, ls="--"),
    "closed_form": dict(color="#2ca02c", lw=1.2, ls=":"),
}


class SchemaError(ValueError):
    pass


def load_timeseries(path):
    """Parse the CSV into {route: (tau, nu, neg_log_nu)} preserving order."""
    header = None
    data = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
                if header != EXPECTED_HEADER:
                    raise SchemaError(
                        f"unexpected header {header!r}; "
                        f"need {EXPECTED_HEADER!r}")
                continue
            cells = line.split(",")
            if len(cells) != 5:
                raise SchemaError(f"malformed row: {line!r}")
            tau, _, nu, nl = (float(c) for c in cells[:4])
            data.setdefault(cells[4], []).append((tau, nu, nl))
    if header is None:
        raise SchemaError(f"{path}: no header found")
    if not data:
        raise SchemaError(f"{path}: no data rows")
    return {route: tuple(zip(*rows)) for route, rows in data.items()}


def build_figure(data, log_nu=False, title=None):
    """Return (figure, info) where info summarizes the drawn structure."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    tau_max = 0.0
    for route, (tau, nu, _) in sorted(data.items()):
        style = ROUTE_STYLE.get(route, dict(lw=1.2))
        ax.plot(tau, nu, label=route, **style)
        tau_max = max(tau_max, max(tau))

    revivals = []
    m = 1
    while 2 * math.pi * m <= tau_max * (1 + 1e-9):
        x = 2 * math.pi * m
        ax.axvline(x, color="0.8", lw=0.7, zorder=0)
        revivals.append(x)
        m += 1

    ax.set_xlabel(r"dimensionless time $\omega_m t$")
    ax.set_ylabel("visibility")
    if log_nu:
        ax.set_yscale("log")
    else:
        ax.set_ylim(-0.02, 1.05)
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    info = {
        "routes": sorted(data),
        "n_curves": len(data),
        "revival_marks": revivals,
    }
    return fig, info


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("-o", "--out", required=True, help="output PNG path")
    ap.add_argument("--log", action="store_true",
                    help="logarithmic visibility axis")
    ap.add_argument("--title", default=None)
    args = ap.parse_args(argv)
    try:
        data = load_timeseries(args.csv)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fig, info = build_figure(data, log_nu=args.log, title=args.title)
    fig.savefig(args.out, dpi=150)
    plt.close(fig)
    print(f"wrote {args.out}: {info['n_curves']} route curve(s), "
          f"{len(info['revival_marks'])} revival mark(s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
