"""Temperature/friction sweeps of the first-revival visibility.

Every grid cell converts (T, gamma) at fixed omega_m into the
dimensionless parameters through params.derive_dimensionless and
evaluates the extinction through visibility.first_revival, so the scan
introduces no formulas of its own. The coupling kappa is prescribed
directly (the sweep does not fix M, L, omega_c), and lambda_qq sets the
coordinate-diffusion multiplier whose low-temperature growth produces
the contour turnback.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .params import PhysConstants, PhysicalParams, derive_dimensionless
from .visibility import first_revival

__all__ = [
    "ScanGrid",
    "scan_base",
    "run_scan",
    "csl_threshold_curve",
    "optimal_temperature",
    "SCAN_CSV_HEADER",
    "CURVE_CSV_HEADER",
    "write_scan_csv",
    "write_curve_csv",
]


@dataclass
class ScanGrid:
    """Per-cell first-revival records over a (T, gamma) grid.

    Cell arrays are indexed [i_T, i_gamma]. Cells that failed are NaN
    with the reason kept in `errors` as (i_T, i_gamma, message).
    """

    T_values: np.ndarray
    gamma_values: np.ndarray
    kappa: float
    lambda_qq: float
    Lambda_nonenv: float
    omega_m: float
    Lambda_T: np.ndarray
    chi: np.ndarray
    n_bar: np.ndarray
    nu_t1: np.ndarray
    neg_log_nu: np.ndarray
    errors: list = field(default_factory=list)


def scan_base(omega_m: float = 3e3, Lambda_nonenv: float = 0.0,
              lambda_qq: float = 1.0) -> PhysicalParams:
    """Physical base for scans where only omega_m and the model knobs matter.

    M, L, omega_c are placeholders: the scan prescribes kappa directly,
    so they never enter a cell value.
    """
    return PhysicalParams(M=1.0, omega_m=omega_m, omega_c=1.0, L=1.0,
                          T=1.0, gamma=0.0, lambda_qq=lambda_qq,
                          Lambda_nonenv=Lambda_nonenv)


def _axis(values, name) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d array")
    if a.size > 1 and not np.all(np.diff(a) > 0):
        raise ValueError(f"{name} must be strictly increasing")
    return a


def run_scan(base: PhysicalParams, T_axis, gamma_axis, kappa: float = 1.0,
             lambda_qq: float | None = None, workers: int = 1,
             c: PhysConstants = PhysConstants()) -> ScanGrid:
    """Fill the (T, gamma) grid of first-revival visibility.

    omega_m and Lambda_nonenv come from `base`; lambda_qq defaults to the
    base value. Rows (fixed T) are distributed over a thread pool and
    assembled by index, so the result is identical for any worker count.
    Cell failures are recorded and the scan continues.
    """
    T_axis = _axis(T_axis, "T_axis")
    gamma_axis = _axis(gamma_axis, "gamma_axis")
    lq = base.lambda_qq if lambda_qq is None else lambda_qq
    if lq > 0 and np.any(T_axis <= 0):
        raise ValueError("all T must be > 0 when lambda_qq > 0")
    nT, ng = T_axis.size, gamma_axis.size
    shape = (nT, ng)
    g = ScanGrid(
        T_values=T_axis, gamma_values=gamma_axis, kappa=kappa, lambda_qq=lq,
        Lambda_nonenv=base.Lambda_nonenv, omega_m=base.omega_m,
        Lambda_T=np.full(shape, np.nan), chi=np.full(shape, np.nan),
        n_bar=np.full(shape, np.nan), nu_t1=np.full(shape, np.nan),
        neg_log_nu=np.full(shape, np.nan),
    )

    def do_row(i):
        errs = []
        for j in range(ng):
            try:
                p = replace(base, T=float(T_axis[i]), gamma=float(gamma_axis[j]),
                            lambda_qq=lq)
                dd = derive_dimensionless(p, c)
                fr = first_revival(replace(dd, kappa=kappa))
            except Exception as exc:  # record and continue: partial grids are valid
                errs.append((i, j, str(exc)))
                continue
            g.Lambda_T[i, j] = dd.Lambda_T
            g.chi[i, j] = dd.chi
            g.n_bar[i, j] = dd.n_bar
            g.nu_t1[i, j] = fr.nu
            g.neg_log_nu[i, j] = fr.neg_log_nu
        return errs

    if workers <= 1:
        for i in range(nT):
            g.errors.extend(do_row(i))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for errs in pool.map(do_row, range(nT)):
                g.errors.extend(errs)
    return g


def csl_threshold_curve(grid: ScanGrid, Lambda_CSL: float,
                        c: PhysConstants = PhysConstants()):
    """gamma(T) along which the thermal decoherence equals Lambda_CSL.

    Below the curve the thermal background drops under the
    nonenvironmental strength, making it observable:
    gamma = 2 hbar omega_m^2 Lambda_CSL / (k_B T).
    """
    if not Lambda_CSL > 0:
        raise ValueError("Lambda_CSL must be > 0")
    T = grid.T_values
    gamma = 2.0 * c.hbar * grid.omega_m**2 * Lambda_CSL / (c.k_B * T)
    return T, gamma


def optimal_temperature(omega_m: float, lambda_qq: float,
                        c: PhysConstants = PhysConstants()) -> float:
    """Temperature minimizing the first-revival extinction at fixed friction.

    The thermal term grows linearly in T while the coordinate-diffusion
    term grows as 1/T; the minimum of 6x + lambda/(8x) over
    x = k_B T/(hbar omega_m) sits at x* = sqrt(lambda/48).
    """
    if lambda_qq < 1:
        raise ValueError("optimal_temperature requires lambda_qq >= 1")
    return (c.hbar * omega_m / c.k_B) * math.sqrt(lambda_qq / 48.0)


SCAN_CSV_HEADER = "T_K,gamma_per_s,Lambda_T,chi,n_bar,nu_t1,neg_log_nu"
CURVE_CSV_HEADER = "T_K,gamma_per_s"


def write_scan_csv(grid: ScanGrid, path, comment: str | None = None,
                   extra_comments=()):
    """Scan grid as CSV, T-major row order."""
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for line in extra_comments:
            fh.write(f"# {line}\n")
        fh.write(SCAN_CSV_HEADER + "\n")
        for i, T in enumerate(grid.T_values):
            for j, gamma in enumerate(grid.gamma_values):
                row = (T, gamma, grid.Lambda_T[i, j], grid.chi[i, j],
                       grid.n_bar[i, j], grid.nu_t1[i, j],
                       grid.neg_log_nu[i, j])
                fh.write(",".join(f"{v:.11e}" for v in row) + "\n")


def write_curve_csv(T, gamma, path, comment: str | None = None):
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(CURVE_CSV_HEADER + "\n")
        for Ti, gi in zip(T, gamma):
            fh.write(f"{Ti:.11e},{gi:.11e}\n")
