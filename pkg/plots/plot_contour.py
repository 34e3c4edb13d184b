#!/usr/bin/env python3
"""Filled contour map of first-revival visibility over (T, gamma).

Grayscale with white for good visibility, log-log axes, contour levels
equally spaced in -ln(nu) (nu itself collapses near zero). A dashed
overlay marks the nonenvironmental-decoherence threshold curve when its
CSV is supplied; annotations mark the millikelvin operating point and the
data-derived optimal temperature (the turnback ridge). The script never
recomputes physics: all structure comes from the CSV cells.

Usage: plot_contour.py <scan_csv> [--csl <curve_csv>] -o <png>
"""

import argparse
import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_HEADER = ["T_K", "gamma_per_s", "Lambda_T", "chi", "n_bar",
                   "nu_t1", "neg_log_nu"]
CURVE_HEADER = ["T_K", "gamma_per_s"]

OPERATING_POINT = (2e-3, 3e-2)  # (T in K, gamma in 1/s), kHz mirror at mK


class SchemaError(ValueError):
    pass


def _read_rows(path, expected_header):
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
                if header != expected_header:
                    raise SchemaError(
                        f"unexpected header {header!r}; need {expected_header!r}")
                continue
            rows.append([float(c) for c in line.split(",")])
    if header is None:
        raise SchemaError(f"{path}: no header found")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return np.asarray(rows)


def load_scan(path):
    """Return (T_axis, gamma_axis, neg_log_nu[T, gamma]); grid must be full."""
    rows = _read_rows(path, EXPECTED_HEADER)
    T_axis = np.unique(rows[:, 0])
    g_axis = np.unique(rows[:, 1])
    if rows.shape[0] != T_axis.size * g_axis.size:
        raise SchemaError("scan grid is not rectangular")
    nl = np.full((T_axis.size, g_axis.size), np.nan)
    i = np.searchsorted(T_axis, rows[:, 0])
    j = np.searchsorted(g_axis, rows[:, 1])
    nl[i, j] = rows[:, 6]
    if np.isnan(nl).any():
        raise SchemaError("scan grid is not rectangular (duplicate cells)")
    return T_axis, g_axis, nl


def load_curve(path):
    rows = _read_rows(path, CURVE_HEADER)
    return rows[:, 0], rows[:, 1]


def detect_turnback(T_axis, nl):
    """Column-wise interior minima of -ln nu, from the data alone.

    Returns (found, T_at_minimum) where found means every sampled
    friction column is unimodal with an interior minimum.
    """
    t_mins = []
    for j in range(nl.shape[1]):
        col = nl[:, j]
        i = int(np.argmin(col))
        interior = 0 < i < len(col) - 1
        unimodal = (np.all(np.diff(col[:i + 1]) < 0)
                    and np.all(np.diff(col[i:]) > 0))
        if not (interior and unimodal):
            return False, None
        t_mins.append(T_axis[i])
    return True, float(np.median(t_mins))


def build_figure(T_axis, g_axis, nl, curve=None, n_levels=12):
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    levels = np.linspace(0.0, float(np.nanmax(nl)), n_levels + 1)
    # white = high visibility = small exponent
    cf = ax.contourf(T_axis, g_axis, nl.T, levels=levels, cmap="gray_r")
    fig.colorbar(cf, ax=ax, label=r"extinction exponent $-\ln\nu(t_1)$")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("temperature T (K)")
    ax.set_ylabel(r"friction $\gamma$ (1/s)")

    has_overlay = False
    if curve is not None:
        Tc, gc = curve
        inside = (gc >= g_axis[0]) & (gc <= g_axis[-1])
        ax.plot(Tc[inside], gc[inside], "k--", lw=1.4,
                label="nonenvironmental threshold")
        has_overlay = True

    if (T_axis[0] <= OPERATING_POINT[0] <= T_axis[-1]
            and g_axis[0] <= OPERATING_POINT[1] <= g_axis[-1]):
        ax.plot(*OPERATING_POINT, "w*", ms=11, mec="k",
                label="mK operating point")

    turnback, t_star = detect_turnback(T_axis, nl)
    if turnback:
        ax.axvline(t_star, color="#d62728", lw=0.9, ls=":",
                   label="optimal T (data)")

    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    info = {
        "n_filled_levels": len(cf.levels) - 1,
        "has_csl_overlay": has_overlay,
        "turnback_detected": turnback,
        "t_star_data": t_star,
    }
    return fig, info


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("scan_csv")
    ap.add_argument("--csl", default=None, help="threshold curve CSV")
    ap.add_argument("-o", "--out", required=True, help="output PNG path")
    args = ap.parse_args(argv)
    try:
        T_axis, g_axis, nl = load_scan(args.scan_csv)
        curve = load_curve(args.csl) if args.csl else None
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    fig, info = build_figure(T_axis, g_axis, nl, curve=curve)
    fig.savefig(args.out, dpi=150)
    plt.close(fig)
    print(f"wrote {args.out}: {info['n_filled_levels']} filled levels, "
          f"overlay={info['has_csl_overlay']}, "
          f"turnback={info['turnback_detected']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
