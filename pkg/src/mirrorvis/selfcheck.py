"""Built-in validation suite behind the CLI `validate` command.

Each check exercises one of the package's structural guarantees on a
fixed, fast parameter set and reports the measured figure against its
tolerance. The fault flag flips a sign in the c5 equation of the
trajectory fed to the residual check, which must then fail; it exists to
prove the oracle can actually catch a wrong propagation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import PhysConstants, PhysicalParams, chi_identity_check, \
    dimensionless_params
from .propagator import extract_f, pde_residual, propagate, propagate_probes
from .scan import optimal_temperature, run_scan, scan_base
from .visibility import (
    time_grid,
    visibility_closed_form,
    visibility_quadrature,
    visibility_thermal,
)

__all__ = ["CheckResult", "run_validation_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return (f"{status} {self.name}: measured={self.measured:.3e} "
                f"tolerance={self.tolerance:.3e}{extra}")


def _rel(a, b, floor=1e-9):
    return np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), floor))


def run_validation_checks(stationarity_tol: float = 1e-10,
                          fault: bool = False) -> list[CheckResult]:
    checks: list[CheckResult] = []
    d_test = dimensionless_params(kappa=1.0, Lambda=0.5, chi=0.01,
                                  inv_Q=1e-3, n_bar=5.0)

    # 1. ground-state stationarity: no couplings, vacuum amplitude
    d0 = dimensionless_params(kappa=0.0, Lambda=0.0, chi=0.0, inv_Q=0.0, n_bar=0.0)
    traj0 = propagate(d0, 0.0, 4.0 * math.pi, 500)
    drift = float(np.max(np.abs(traj0.coeffs - traj0.coeffs[0])))
    checks.append(CheckResult("ground-state stationarity", drift <= stationarity_tol,
                              drift, stationarity_tol))

    # 2. realness of the amplitude response functions
    taus, (c60, c61, c6i) = propagate_probes(d_test, 4.0 * math.pi, 1000)
    resid = max(float(np.max(np.abs((1j * (c61 - c60)).imag))),
                float(np.max(np.abs((-1j * (c6i - c60)).imag))))
    checks.append(CheckResult("f2/f3 realness residue", resid < 1e-9, resid, 1e-9))

    # 3. affine amplitude dependence of the trace exponent
    a = 2.0 - 3.0j
    traj_a = propagate(d_test, a, 4.0 * math.pi, 1000, error_estimate=False)
    recon = c60 + a.real * (c61 - c60) + a.imag * (c6i - c60)
    aff = float(np.max(np.abs(traj_a.c6 - recon)))
    checks.append(CheckResult("c6 affinity in alpha0", aff < 1e-9, aff, 1e-9))

    # 4. phase-space equation residual, second-order in the time step
    # (gentle couplings keep the third-derivative scale O(1), so the
    # pointwise-normalized differencing error sits well under 1e-5)
    d_pde = dimensionless_params(kappa=0.3, Lambda=0.05, chi=0.01,
                                 inv_Q=1e-3, n_bar=0.0)
    samples = [(0.3, 0.2), (0.2, -0.3), (-0.25, 0.15)]
    r_coarse = pde_residual(
        propagate(d_pde, 0.1 + 0.05j, math.pi, 1000,
                  error_estimate=False, flip_c5_sign=fault), d_pde, samples)
    r_fine = pde_residual(
        propagate(d_pde, 0.1 + 0.05j, math.pi, 2000,
                  error_estimate=False, flip_c5_sign=fault), d_pde, samples)
    checks.append(CheckResult("equation-of-motion residual", r_fine < 1e-5,
                              r_fine, 1e-5, "at 2000 steps/period"))
    ratio = r_coarse / r_fine if r_fine > 0 else float("inf")
    checks.append(CheckResult("residual halving ratio", 3.5 <= ratio <= 4.5,
                              ratio, 4.5, "expect ~4 in [3.5, 4.5]"))

    # 5. route agreements on a high-Q test point
    dq = dimensionless_params(kappa=1.0, Lambda=0.3, chi=0.05,
                              inv_Q=1e-4, n_bar=5.0)
    grid = time_grid(2.0, 500)
    nl_a = visibility_thermal(dq, grid).neg_log_nu
    nl_b = visibility_quadrature(dq, grid, order=40).neg_log_nu
    nl_c = visibility_closed_form(dq, grid / dq.omega_m).neg_log_nu
    ab = float(_rel(nl_a, nl_b))
    ac = float(_rel(nl_a, nl_c))
    checks.append(CheckResult("thermal vs quadrature route", ab < 1e-6, ab, 1e-6))
    checks.append(CheckResult("thermal vs closed-form route", ac < 1e-2, ac, 1e-2))

    # 6. coordinate-diffusion identity chi/(4 Lambda_T) = lambda (hbar w/4 kT)^2
    c = PhysConstants()
    rng = np.random.default_rng(20240811)
    worst = 0.0
    for _ in range(50):
        om = 10.0 ** rng.uniform(0, 8)
        T = 10.0 ** rng.uniform(-8, 2)
        gam = om * 10.0 ** rng.uniform(-8, -1)
        lam = rng.uniform(1.0, 8.0)
        p = PhysicalParams(M=1e-12, omega_m=om, omega_c=1e15, L=1e-2,
                           T=T, gamma=gam, lambda_qq=lam)
        lhs = chi_identity_check(p, c)
        rhs_val = lam * (c.hbar * om / (4 * c.k_B * T)) ** 2
        worst = max(worst, abs(lhs - rhs_val) / rhs_val)
    checks.append(CheckResult("chi identity", worst < 1e-12, worst, 1e-12))

    # 7. turnback unimodality of a fixed-friction temperature column
    base = scan_base(omega_m=3e3, lambda_qq=1.0)
    T_axis = np.logspace(-11, -6, 200)
    g = run_scan(base, T_axis, np.array([3e-2]), kappa=1.0)
    col = g.neg_log_nu[:, 0]
    i_min = int(np.argmin(col))
    unimodal = (np.all(np.diff(col[:i_min + 1]) < 0)
                and np.all(np.diff(col[i_min:]) > 0))
    t_star = optimal_temperature(3e3, 1.0)
    bracket = (T_axis[max(i_min - 1, 0)] <= t_star
               <= T_axis[min(i_min + 1, T_axis.size - 1)])
    ok = bool(unimodal and bracket)
    checks.append(CheckResult("turnback unimodality", ok,
                              T_axis[i_min], t_star,
                              "grid minimum must bracket the optimum"))
    return checks
