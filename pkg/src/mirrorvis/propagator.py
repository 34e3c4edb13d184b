"""Propagation of the Gaussian characteristic-function coefficients.

The off-diagonal mirror state is represented in dimensionless phase-space
Fourier variables (k, Delta) by the Gaussian form

    rho(k, Delta) = (1/2) exp(-[c1 k^2 + c2 k Delta + c3 Delta^2
                                + i c4 k + i c5 Delta + c6]),

whose six coefficients obey a linear constant-coefficient ODE system in
dimensionless time tau = omega_m * t:

    c1' = 2 c2 + chi
    c2' = 4 c3 - c1 - q c2
    c3' = -c2/2 - 2 q c3 + Lambda            (q = inv_Q)
    c4' = 2 c5 - 2 i kappa c1
    c5' = -c4/2 - kappa (i c2 + 1/2) - q c5
    c6' = i kappa c4

For a coherent initial amplitude alpha0 the initial values are
c = (1/2, 0, 1/8, -2 Re alpha0, -Im alpha0, 0). The first three
coefficients stay real (their subsystem is closed and real). The
alpha0-dependence of c6 is affine; extract_f pulls out the three
response functions behind the thermal average.

The integrator is fixed-step classical RK4. Because the system is linear
and autonomous, one RK4 step is exactly y -> P4(hA) y + h Q3(hA) b with
P4/Q3 the degree-4/3 Taylor polynomials of exp and its phi-1 function;
the step matrix is precomputed once, which keeps long runs cheap without
changing the method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, RealnessError
from .params import DimensionlessParams

__all__ = [
    "CoeffState",
    "CoeffTrajectory",
    "FTriple",
    "initial_state",
    "rhs",
    "propagate",
    "extract_f",
    "characteristic_value",
    "pde_residual",
    "write_trajectory_csv",
    "TRAJECTORY_CSV_HEADER",
]

DIVERGENCE_LIMIT = 1e12
WIDTH_IMAG_TOL = 1e-10   # |Im c1..c3| ceiling
F_IMAG_TOL = 1e-9        # |Im f2|, |Im f3| ceiling


@dataclass(frozen=True)
class CoeffState:
    """The six Gaussian-exponent coefficients at one dimensionless time."""

    c1: complex
    c2: complex
    c3: complex
    c4: complex
    c5: complex
    c6: complex
    tau: float = 0.0

    def as_vector(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5, self.c6],
                        dtype=complex)


def initial_state(alpha0: complex = 0.0) -> CoeffState:
    """Coefficients of a coherent mirror state with amplitude alpha0 at tau=0."""
    a = complex(alpha0)
    return CoeffState(0.5, 0.0, 0.125, -2.0 * a.real, -1.0 * a.imag, 0.0, tau=0.0)


def _system(d: DimensionlessParams, flip_c5_sign: bool = False):
    """Constant matrix A and inhomogeneity b of c' = A c + b.

    flip_c5_sign is a documented self-test hook: it flips the sign of the
    c4 term in the c5 equation, breaking the phase-space equation of
    motion so that the residual oracle must flag the trajectory.
    """
    k, q = d.kappa, d.inv_Q
    s45 = +0.5 if flip_c5_sign else -0.5
    A = np.zeros((6, 6), dtype=complex)
    A[0, 1] = 2.0
    A[1, 0] = -1.0
    A[1, 1] = -q
    A[1, 2] = 4.0
    A[2, 1] = -0.5
    A[2, 2] = -2.0 * q
    A[3, 0] = -2.0j * k
    A[3, 4] = 2.0
    A[4, 1] = -1.0j * k
    A[4, 3] = s45
    A[4, 4] = -q
    A[5, 3] = 1.0j * k
    b = np.array([d.chi, 0.0, d.Lambda, 0.0, -0.5 * k, 0.0], dtype=complex)
    return A, b


def rhs(s: CoeffState, d: DimensionlessParams) -> np.ndarray:
    """Time derivative (dc1..dc6)/dtau as a complex length-6 array."""
    A, b = _system(d)
    return A @ s.as_vector() + b


@dataclass
class CoeffTrajectory:
    """Coefficient trajectories on a uniform dimensionless time grid.

    coeffs has shape (n_times, 6); step_error is the max absolute
    coefficient difference against a half-step rerun on the shared grid.
    Treat instances as immutable after construction.
    """

    taus: np.ndarray
    coeffs: np.ndarray
    alpha0: complex
    step_error: float = 0.0
    params: DimensionlessParams = field(default=None, repr=False)

    @property
    def c1(self): return self.coeffs[:, 0]
    @property
    def c2(self): return self.coeffs[:, 1]
    @property
    def c3(self): return self.coeffs[:, 2]
    @property
    def c4(self): return self.coeffs[:, 3]
    @property
    def c5(self): return self.coeffs[:, 4]
    @property
    def c6(self): return self.coeffs[:, 5]

    def state(self, i: int) -> CoeffState:
        c = self.coeffs[i]
        return CoeffState(*c, tau=float(self.taus[i]))

    @property
    def states(self) -> list[CoeffState]:
        return [self.state(i) for i in range(len(self.taus))]


def _rk4_step_operator(A: np.ndarray, b: np.ndarray, h: float):
    """Classical-RK4 one-step operator (R, r) for the linear system."""
    eye = np.eye(6, dtype=complex)
    hA = h * A
    hA2 = hA @ hA
    hA3 = hA2 @ hA
    hA4 = hA3 @ hA
    R = eye + hA + hA2 / 2.0 + hA3 / 6.0 + hA4 / 24.0
    r = h * (eye + hA / 2.0 + hA2 / 6.0 + hA3 / 24.0) @ b
    return R, r


def _run_grid(A, b, y0: np.ndarray, n_steps: int, h: float) -> np.ndarray:
    """Iterate the one-step operator; returns (n_steps+1, 6, n_cols)."""
    R, r = _rk4_step_operator(A, b, h)
    y = y0.copy()
    out = np.empty((n_steps + 1,) + y0.shape, dtype=complex)
    out[0] = y
    rcol = r[:, None] if y0.ndim == 2 else r
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps):
            y = R @ y + rcol
            out[i + 1] = y
    return out


def _grid(tau_max: float, steps_per_period: int):
    if not tau_max > 0:
        raise ValueError("tau_max must be > 0")
    if steps_per_period < 100:
        raise ValueError("steps_per_period must be >= 100")
    h = 2.0 * math.pi / steps_per_period
    n = max(1, int(round(tau_max / h)))
    return h, n


def _check_finite_bounded(coeffs: np.ndarray, what: str):
    amax = np.max(np.abs(coeffs))
    if not np.isfinite(amax) or amax > DIVERGENCE_LIMIT:
        raise DivergenceError(
            f"{what}: coefficient magnitude reached {amax:.3e} "
            f"(> {DIVERGENCE_LIMIT:.0e}); parameters produce a divergent system"
        )


def propagate(d: DimensionlessParams, alpha0: complex, tau_max: float,
              steps_per_period: int = 2000, *, error_estimate: bool = True,
              flip_c5_sign: bool = False) -> CoeffTrajectory:
    """Integrate the coefficient system from the coherent initial state.

    Parameters
    ----------
    tau_max : last dimensionless time; the grid is j*h with h = 2*pi/steps_per_period.
    steps_per_period : >= 100 grid steps per mechanical period.
    error_estimate : rerun at half step and record the max grid difference.
    flip_c5_sign : documented fault-injection hook for self tests.

    Raises DivergenceError if any |c_i| exceeds 1e12 and RealnessError if
    the width coefficients c1..c3 develop imaginary parts above 1e-10.
    """
    h, n = _grid(tau_max, steps_per_period)
    A, b = _system(d, flip_c5_sign=flip_c5_sign)
    y0 = initial_state(alpha0).as_vector()
    out = _run_grid(A, b, y0, n, h)
    _check_finite_bounded(out, "propagate")

    im_widths = np.max(np.abs(out[:, :3].imag))
    if im_widths > WIDTH_IMAG_TOL:
        raise RealnessError(
            f"width coefficients developed Im parts up to {im_widths:.3e}"
        )

    err = 0.0
    if error_estimate:
        fine = _run_grid(A, b, y0, 2 * n, h / 2.0)
        _check_finite_bounded(fine, "propagate(half-step)")
        err = float(np.max(np.abs(out - fine[::2])))

    taus = np.arange(n + 1) * h
    return CoeffTrajectory(taus=taus, coeffs=out, alpha0=complex(alpha0),
                           step_error=err, params=d)


def propagate_probes(d: DimensionlessParams, tau_max: float,
                     steps_per_period: int = 2000,
                     probes=(0.0, 1.0, 1.0j)):
    """Propagate several coherent amplitudes in one pass (shared grid).

    Returns (taus, c6_list) with one complex c6 array per probe; used by
    the response-function extraction and the quadrature thermal average.
    """
    h, n = _grid(tau_max, steps_per_period)
    A, b = _system(d)
    y0 = np.zeros((6, len(probes)), dtype=complex)
    for j, a in enumerate(probes):
        y0[:, j] = initial_state(a).as_vector()
    out = _run_grid(A, b, y0, n, h)
    _check_finite_bounded(out, "propagate_probes")
    im_widths = np.max(np.abs(out[:, :3, :].imag))
    if im_widths > WIDTH_IMAG_TOL:
        raise RealnessError(
            f"width coefficients developed Im parts up to {im_widths:.3e}"
        )
    taus = np.arange(n + 1) * h
    return taus, [out[:, 5, j] for j in range(len(probes))]


@dataclass(frozen=True)
class FTriple:
    """Response functions of the visibility exponent on a time grid.

    The alpha0-independent exponent is kappa^2 f1; a coherent amplitude
    x + i y shifts it by -i kappa (x f2 - y f3). f2 and f3 are real up to
    integrator noise (asserted); the imaginary part of the raw f1 is the
    interference-fringe phase, which the visibility modulus removes, so
    f1 stores the real part only.
    """

    taus: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray


def extract_f(d: DimensionlessParams, tau_max: float,
              steps_per_period: int = 2000) -> FTriple:
    """Extract (f1, f2, f3) from probe amplitudes {0, 1, i}."""
    if not d.kappa > 0:
        raise ValueError("extract_f requires kappa > 0")
    taus, (c60, c61, c6i) = propagate_probes(d, tau_max, steps_per_period)
    f2c = 1j * (c61 - c60) / d.kappa
    f3c = -1j * (c6i - c60) / d.kappa
    resid = max(np.max(np.abs(f2c.imag)), np.max(np.abs(f3c.imag)))
    if resid > F_IMAG_TOL:
        raise RealnessError(
            f"f2/f3 imaginary residue {resid:.3e} exceeds {F_IMAG_TOL:.0e}; "
            "integrator misconfigured"
        )
    f1 = c60.real / d.kappa**2
    return FTriple(taus=taus, f1=f1, f2=f2c.real, f3=f3c.real)


def characteristic_value(s: CoeffState, k: float, Delta: float) -> complex:
    """Gaussian characteristic function at dimensionless (k, Delta)."""
    expo = (s.c1 * k * k + s.c2 * k * Delta + s.c3 * Delta * Delta
            + 1j * s.c4 * k + 1j * s.c5 * Delta + s.c6)
    return 0.5 * np.exp(-expo)


def pde_residual(traj: CoeffTrajectory, d: DimensionlessParams,
                 sample_points) -> float:
    """Maximum normalized residual of the phase-space equation of motion.

    The time derivative of the characteristic function is approximated by
    a centered difference on the trajectory grid; the right-hand side uses
    the analytic (k, Delta)-derivatives of the Gaussian form:

        drho/dtau = 2 k d_Delta rho - (1/2) Delta d_k rho - Lambda Delta^2 rho
                    + kappa (d_k + i Delta/2) rho - q Delta d_Delta rho
                    - chi k^2 rho.

    This check is independent of how the coefficients were integrated.
    """
    if len(traj.taus) < 3:
        raise ValueError("trajectory needs at least 3 grid points")
    pts = np.asarray(sample_points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("sample_points must be a sequence of (k, Delta) pairs")
    ks, ds = pts[:, 0][None, :], pts[:, 1][None, :]

    c = traj.coeffs
    expo = (c[:, 0:1] * ks**2 + c[:, 1:2] * ks * ds + c[:, 2:3] * ds**2
            + 1j * c[:, 3:4] * ks + 1j * c[:, 4:5] * ds + c[:, 5:6])
    rho = 0.5 * np.exp(-expo)                      # (n_times, n_points)

    h = traj.taus[1] - traj.taus[0]
    drho_dt = (rho[2:] - rho[:-2]) / (2.0 * h)

    cm = c[1:-1]
    rm = rho[1:-1]
    dk = -(2.0 * cm[:, 0:1] * ks + cm[:, 1:2] * ds + 1j * cm[:, 3:4]) * rm
    dD = -(cm[:, 1:2] * ks + 2.0 * cm[:, 2:3] * ds + 1j * cm[:, 4:5]) * rm
    rhs_pde = (2.0 * ks * dD - 0.5 * ds * dk - d.Lambda * ds**2 * rm
               + d.kappa * (dk + 0.5j * ds * rm) - d.inv_Q * ds * dD
               - d.chi * ks**2 * rm)

    denom = np.maximum(np.abs(rm), 1e-300)
    return float(np.max(np.abs(drho_dt - rhs_pde) / denom))


TRAJECTORY_CSV_HEADER = "tau,re_c1,re_c2,re_c3,re_c4,im_c4,re_c5,im_c5,re_c6,im_c6"


def write_trajectory_csv(traj: CoeffTrajectory, path, comment: str | None = None):
    """Dump a trajectory as CSV (width coefficients are stored real)."""
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(TRAJECTORY_CSV_HEADER + "\n")
        c = traj.coeffs
        for i, tau in enumerate(traj.taus):
            row = (tau, c[i, 0].real, c[i, 1].real, c[i, 2].real,
                   c[i, 3].real, c[i, 3].imag, c[i, 4].real, c[i, 4].imag,
                   c[i, 5].real, c[i, 5].imag)
            fh.write(",".join(f"{v:.11e}" for v in row) + "\n")
