"""Interference visibility of the photon, nu(t), via independent routes.

Routes:
  ode_analytic   propagate the coefficient ODEs, then apply the closed
                 Gaussian thermal average
                 -ln nu = kappa^2 [f1 + (n_bar/4)(f2^2 + f3^2)]
  ode_quadrature same propagation, but the thermal average over the
                 coherent amplitude is done by explicit Gauss-Hermite
                 product quadrature against the thermal P function
                 (the oracle for ode_analytic)
  closed_form    the leading-order-in-inv_Q analytic expression, exact
                 at zero friction

plus the first-revival shortcut -ln nu(t1) = pi kappa^2 (12 Lambda + chi)
with t1 = 2 pi / omega_tilde.

neg_log_nu is the primary output everywhere; nu = exp(-neg_log_nu) is
derived with an explicit underflow clamp, so extinction exponents of
order kappa^2 n_bar ~ 1e5 stay exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericsError, OverdampedError, QuadratureConvergenceError
from .params import DimensionlessParams
from .propagator import extract_f, propagate, propagate_probes

__all__ = [
    "ROUTE_ODE_ANALYTIC",
    "ROUTE_ODE_QUADRATURE",
    "ROUTE_CLOSED_FORM",
    "ROUTES",
    "VisibilitySeries",
    "FirstRevival",
    "time_grid",
    "visibility_single",
    "visibility_thermal",
    "visibility_quadrature",
    "visibility_closed_form",
    "first_revival",
    "VISIBILITY_CSV_HEADER",
    "write_visibility_csv",
]

ROUTE_ODE_ANALYTIC = "ode_analytic"
ROUTE_ODE_QUADRATURE = "ode_quadrature"
ROUTE_CLOSED_FORM = "closed_form"
ROUTES = (ROUTE_ODE_ANALYTIC, ROUTE_ODE_QUADRATURE, ROUTE_CLOSED_FORM)

NEG_LOG_CLAMP = 700.0          # exp(-x) underflows well past this
_NEG_TOL = 1e-8                # tolerated negative integrator noise on -ln nu
_QUAD_STABILITY_TOL = 1e-6     # order-doubling stability on the exponent
_STAGE_EXPONENT = 10.0         # per-stage extinction kept inside float64 accuracy


@dataclass(frozen=True)
class VisibilitySeries:
    """nu(t) on a time grid, carried as the exact exponent plus exp of it."""

    taus: np.ndarray
    t_seconds: np.ndarray
    nu: np.ndarray
    neg_log_nu: np.ndarray
    route: str


class FirstRevival(NamedTuple):
    t1_seconds: float
    nu: float
    neg_log_nu: float


def time_grid(periods: float, steps_per_period: int = 2000) -> np.ndarray:
    """Uniform dimensionless grid 0..2*pi*periods hitting period marks exactly."""
    if periods < 0:
        raise ValueError("periods must be >= 0")
    if steps_per_period < 100:
        raise ValueError("steps_per_period must be >= 100")
    n = int(round(periods * steps_per_period))
    h = 2.0 * math.pi / steps_per_period
    return np.arange(n + 1) * h


def _grid_spec(taus: np.ndarray):
    """Validate a uniform from-zero grid; return (tau_max, steps_per_period)."""
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or taus.size < 1:
        raise ValueError("taus must be a 1-d array")
    if abs(taus[0]) > 1e-15:
        raise ValueError("taus must start at 0")
    if taus.size == 1:
        return 0.0, 0
    h = taus[1] - taus[0]
    if h <= 0 or np.max(np.abs(np.diff(taus) - h)) > 1e-9 * h:
        raise ValueError("taus must be strictly increasing and uniform")
    spp = int(round(2.0 * math.pi / h))
    if spp < 100 or abs(spp * h - 2.0 * math.pi) > 1e-6:
        raise ValueError("grid step must be 2*pi/steps_per_period with "
                         "steps_per_period >= 100")
    return float(taus[-1]), spp


def _series(d: DimensionlessParams, taus, neg_log_nu, route) -> VisibilitySeries:
    nl = np.asarray(neg_log_nu, dtype=float)
    if np.min(nl) < -_NEG_TOL:
        raise NumericsError(
            f"negative visibility exponent {np.min(nl):.3e}; "
            "integration is inconsistent"
        )
    nl = np.maximum(nl, 0.0)
    taus = np.asarray(taus, dtype=float)
    nl[taus == 0.0] = 0.0  # exponent vanishes identically at tau = 0
    nu = np.where(nl > NEG_LOG_CLAMP, 0.0, np.exp(-np.minimum(nl, NEG_LOG_CLAMP)))
    return VisibilitySeries(taus=taus, t_seconds=taus / d.omega_m,
                            nu=nu, neg_log_nu=nl, route=route)


def _ones_series(d, taus, route):
    taus = np.asarray(taus, dtype=float)
    return _series(d, taus, np.zeros_like(taus), route)


def visibility_single(d: DimensionlessParams, alpha0: complex,
                      taus: np.ndarray) -> np.ndarray:
    """Complex single-amplitude visibility exp(-c6(tau)); modulus is nu."""
    taus = np.asarray(taus, dtype=float)
    tau_max, spp = _grid_spec(taus)
    if taus.size == 1 or d.kappa == 0:
        return np.ones(taus.size, dtype=complex)
    traj = propagate(d, alpha0, tau_max, spp, error_estimate=False)
    with np.errstate(under="ignore"):
        return np.exp(-traj.c6)


def visibility_thermal(d: DimensionlessParams, taus: np.ndarray) -> VisibilitySeries:
    """Thermal-average visibility from the ODE response functions."""
    taus = np.asarray(taus, dtype=float)
    tau_max, spp = _grid_spec(taus)
    if taus.size == 1 or d.kappa == 0:
        return _ones_series(d, taus, ROUTE_ODE_ANALYTIC)
    f = extract_f(d, tau_max, spp)
    nl = d.kappa**2 * (f.f1 + 0.25 * d.n_bar * (f.f2**2 + f.f3**2))
    return _series(d, taus, nl, ROUTE_ODE_ANALYTIC)


# --- Gauss-Hermite thermal averaging (oracle route) -------------------------

def _log_abs_gh_factor(delta: np.ndarray, scale: float, order: int,
                       phase_split: bool = True) -> np.ndarray:
    """ln| (1/sqrt(pi)) int e^{-u^2} exp(-delta*scale*u) du | by Gauss-Hermite.

    delta is the (complex, essentially imaginary) amplitude-response
    coefficient per time point; scale = sqrt(n_bar), so the oscillation
    phase across the rule is |delta|*scale.

    A Gaussian of variance n_bar is the K-fold convolution of Gaussians
    of variance n_bar/K, and the exponential integrand factorizes over
    the convolution, so the factor equals the K-th power of the same
    quadrature at amplitude scale/sqrt(K). With phase_split the per-point
    K caps each stage's extinction exponent at ~10, which keeps the sum
    inside float64 accuracy (a raw stage with exponent X evaluates
    e^{-X} by cancellation of O(1) phase terms and drowns in roundoff
    once X exceeds ~35) and inside the order's spectral range.
    phase_split=False evaluates the literal single-stage rule.
    """
    u, w = np.polynomial.hermite.hermgauss(order)
    amp = delta * scale
    if phase_split:
        # squared phase = 4x the stage extinction exponent
        k_stages = np.maximum(
            1.0, np.ceil(np.abs(amp) ** 2 / (4.0 * _STAGE_EXPONENT)))
    else:
        k_stages = np.ones_like(np.abs(amp))
    z = (amp / np.sqrt(k_stages))[:, None] * u[None, :]
    with np.errstate(over="ignore", under="ignore"):
        s = np.exp(-z) @ w / math.sqrt(math.pi)
        return k_stages * np.log(np.maximum(np.abs(s), 1e-300))


def visibility_quadrature(d: DimensionlessParams, taus: np.ndarray,
                          order: int = 40, *,
                          phase_split: bool = True) -> VisibilitySeries:
    """Thermal-average visibility by explicit quadrature over the P function.

    c6 is affine in the coherent amplitude, so the three probe
    propagations determine the integrand everywhere and the 2-d product
    rule over (Re alpha0, Im alpha0) factorizes into two 1-d
    Gauss-Hermite sums (split into exact convolution stages when the
    thermal phase is large; see _log_abs_gh_factor). The run is repeated
    at twice the order; if the exponent moves by more than 1e-6 (i.e. nu
    changes by more than 1e-6 relative) a QuadratureConvergenceError is
    raised, which signals that `order` is too low for the phase being
    integrated.
    """
    if int(order) != order or order < 20:
        raise ValueError("quadrature order must be an integer >= 20")
    order = int(order)
    taus = np.asarray(taus, dtype=float)
    tau_max, spp = _grid_spec(taus)
    if taus.size == 1 or d.kappa == 0:
        return _ones_series(d, taus, ROUTE_ODE_QUADRATURE)
    if not d.n_bar > 0:
        raise ValueError("quadrature thermal average requires n_bar > 0 "
                         "(the P function degenerates to a point at n_bar = 0)")

    _, (c60, c61, c6i) = propagate_probes(d, tau_max, spp)
    d2 = c61 - c60
    d3 = c6i - c60
    s = math.sqrt(d.n_bar)

    def run(n):
        return (c60.real
                - _log_abs_gh_factor(d2, s, n, phase_split)
                - _log_abs_gh_factor(d3, s, n, phase_split))

    nl = run(order)
    nl2 = run(2 * order)
    drift = float(np.max(np.abs(nl - nl2)))
    if drift > _QUAD_STABILITY_TOL:
        raise QuadratureConvergenceError(
            f"doubling the quadrature order moved the exponent by {drift:.3e} "
            f"(> {_QUAD_STABILITY_TOL:.0e}); raise the order"
        )
    return _series(d, taus, nl, ROUTE_ODE_QUADRATURE)


# --- closed form and first revival ------------------------------------------

def _phi(x: np.ndarray) -> np.ndarray:
    """(1 - exp(-x))/x, by series below 1e-6 to dodge cancellation."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-6
    xs = np.where(small, 0.0, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = -np.expm1(-xs) / np.where(small, 1.0, xs)
    series = 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0
    return np.where(small, series, direct)


def _require_underdamped(d: DimensionlessParams):
    if d.inv_Q >= 2:
        raise OverdampedError(
            f"inv_Q = {d.inv_Q} >= 2: overdamped oscillator has no revivals"
        )


def visibility_closed_form(d: DimensionlessParams,
                           t_seconds: np.ndarray) -> VisibilitySeries:
    """Leading-order-in-inv_Q analytic visibility on a physical time grid.

    The decoherence factor is evaluated with Lambda and chi distributed
    into the braces, so Lambda = 0 with chi > 0 is well defined:

      -ln nu = (n_bar + 1/2) kappa^2 [1 + e^{-g t} - 2 e^{-g t/2} cos(w t)]
             + 6 kappa^2 Lambda { w t [phi(g t)/3 + 2/3]
                                  - (4/3) e^{-g t/2} sin(w t)
                                  + (1/6) e^{-g t} sin(2 w t) }
             + 6 kappa^2 (chi/4) { w t phi(g t)/3 - (1/6) e^{-g t} sin(2 w t) }

    with g = gamma, w = omega_tilde. Exact at gamma = 0; emits a warning
    for inv_Q > 0.1 where the leading-order amplitudes degrade.
    """
    _require_underdamped(d)
    if d.inv_Q > 0.1:
        warnings.warn(
            f"closed form is leading order in inv_Q; inv_Q = {d.inv_Q} "
            "is outside its comfort zone", stacklevel=2)
    t = np.asarray(t_seconds, dtype=float)
    taus = t * d.omega_m
    gt = d.inv_Q * taus
    wt = math.sqrt(1.0 - 0.25 * d.inv_Q**2) * taus
    k2 = d.kappa**2

    e_g = np.exp(-gt)
    e_g2 = np.exp(-0.5 * gt)
    first = (d.n_bar + 0.5) * k2 * (1.0 + e_g - 2.0 * e_g2 * np.cos(wt))
    ph = _phi(gt)
    lam_part = 6.0 * k2 * d.Lambda * (
        wt * (ph / 3.0 + 2.0 / 3.0)
        - (4.0 / 3.0) * e_g2 * np.sin(wt)
        + (1.0 / 6.0) * e_g * np.sin(2.0 * wt)
    )
    chi_part = 6.0 * k2 * (d.chi / 4.0) * (
        wt * ph / 3.0 - (1.0 / 6.0) * e_g * np.sin(2.0 * wt)
    )
    return _series(d, taus, first + lam_part + chi_part, ROUTE_CLOSED_FORM)


def first_revival(d: DimensionlessParams) -> FirstRevival:
    """Visibility at the first revival t1 = 2 pi / omega_tilde.

    Friction is negligible over one return, leaving the extinction
    exponent pi kappa^2 (12 Lambda + chi).
    """
    _require_underdamped(d)
    t1 = 2.0 * math.pi / d.omega_tilde
    nl = math.pi * d.kappa**2 * (12.0 * d.Lambda + d.chi)
    nu = 0.0 if nl > NEG_LOG_CLAMP else math.exp(-nl)
    return FirstRevival(t1_seconds=t1, nu=nu, neg_log_nu=nl)


VISIBILITY_CSV_HEADER = "tau,t_s,nu,neg_log_nu,route"


def write_visibility_csv(series_list, path, comment: str | None = None):
    """Write one or more visibility series as CSV (concatenated by route)."""
    if isinstance(series_list, VisibilitySeries):
        series_list = [series_list]
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(VISIBILITY_CSV_HEADER + "\n")
        for s in series_list:
            for i in range(len(s.taus)):
                fh.write(f"{s.taus[i]:.11e},{s.t_seconds[i]:.11e},"
                         f"{s.nu[i]:.11e},{s.neg_log_nu[i]:.11e},{s.route}\n")
