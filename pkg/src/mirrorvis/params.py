"""Physical inputs and their dimensionless working parameters.

All experiment inputs are SI: mirror mass M (kg), mechanical angular
frequency omega_m (rad/s), cavity photon frequency omega_c (rad/s),
cavity length L (m), temperature T (K), friction rate gamma (1/s).
From these the simulation works entirely with the dimensionless set

    kappa  = (omega_c/omega_m) * (sigma/L)      photon-mirror coupling
    Lambda = Lambda_T + Lambda_nonenv           position-decoherence strength
    chi                                         momentum-space diffusion strength
    inv_Q  = gamma/omega_m                      inverse mechanical quality factor
    n_bar                                       thermal phonon occupation

where sigma = sqrt(hbar/(2 M omega_m)) is the ground-state width and
Lambda_T = (k_B T / 2 hbar omega_m) * inv_Q is the thermal part of Lambda.
The coordinate-diffusion strength is tied to its positivity minimum,
chi * Lambda_T = lambda_qq * inv_Q**2 / 16 with lambda_qq >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ConfigError

__all__ = [
    "PhysConstants",
    "PhysicalParams",
    "DimensionlessParams",
    "LAMBDA_CSL",
    "derive_dimensionless",
    "dimensionless_params",
    "chi_identity_check",
    "classicality_diagnostics",
    "params_from_config",
]

# Added nonenvironmental decoherence strength used for the dashed
# comparison line in the temperature/friction scan.
LAMBDA_CSL = 2e-9


@dataclass(frozen=True)
class PhysConstants:
    """Fundamental constants, CODATA values by default.

    hbar : reduced Planck constant (J s)
    k_B  : Boltzmann constant (J/K)
    """

    hbar: float = 1.054571817e-34
    k_B: float = 1.380649e-23

    def __post_init__(self):
        if not (self.hbar > 0 and self.k_B > 0):
            raise ConfigError("hbar and k_B must be strictly positive")


@dataclass(frozen=True)
class PhysicalParams:
    """SI-unit description of the experiment.

    lambda_qq is the multiplier of the minimal momentum-space diffusion
    (lambda_qq >= 1 keeps the density matrix positive; 0 switches the
    correction off). Lambda_nonenv adds a constant nonenvironmental
    position-decoherence strength on top of the thermal one.
    """

    M: float
    omega_m: float
    omega_c: float
    L: float
    T: float
    gamma: float
    lambda_qq: float = 0.0
    Lambda_nonenv: float = 0.0

    def __post_init__(self):
        for name in ("M", "omega_m", "omega_c", "L"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be strictly positive")
        if self.T < 0:
            raise ConfigError("T must be >= 0")
        if self.gamma < 0:
            raise ConfigError("gamma must be >= 0")
        if self.lambda_qq < 0 or (0 < self.lambda_qq < 1):
            raise ConfigError(
                "lambda_qq must be 0 (off) or >= 1 (density-matrix positivity)"
            )
        if self.Lambda_nonenv < 0:
            raise ConfigError("Lambda_nonenv must be >= 0")


@dataclass(frozen=True)
class DimensionlessParams:
    """Working parameter set of the coefficient dynamics.

    sigma and omega_m are carried only to restore SI units (sigma for
    reporting, omega_m to convert dimensionless time tau to seconds);
    neither enters the dimensionless evolution. Lambda_T is kept
    alongside the total Lambda because the classicality diagnostics and
    the scan report the thermal part separately.
    """

    sigma: float
    kappa: float
    Lambda: float
    chi: float
    inv_Q: float
    n_bar: float
    omega_m: float = 1.0
    Lambda_T: float | None = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError("sigma must be strictly positive")
        if not self.omega_m > 0:
            raise ConfigError("omega_m must be strictly positive")
        for name in ("kappa", "Lambda", "chi", "inv_Q", "n_bar"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.Lambda_T is None:
            object.__setattr__(self, "Lambda_T", self.Lambda)
        if self.Lambda_T < 0 or self.Lambda_T > self.Lambda * (1 + 1e-12):
            raise ConfigError("Lambda_T must satisfy 0 <= Lambda_T <= Lambda")
        # Positivity of the generator: chi * Lambda >= inv_Q^2 / 16 whenever
        # both diffusion channels are on (small slack for rounding at the
        # lambda_qq = 1 equality case).
        if self.chi > 0 and self.Lambda > 0:
            if self.chi * self.Lambda < (self.inv_Q**2 / 16) * (1 - 1e-9):
                raise ConfigError(
                    "chi*Lambda violates the positivity bound inv_Q^2/16"
                )

    @property
    def omega_tilde(self) -> float:
        """Damped oscillation frequency (rad/s); only defined for inv_Q < 2."""
        from .errors import OverdampedError

        if self.inv_Q >= 2:
            raise OverdampedError(
                f"inv_Q = {self.inv_Q} >= 2: overdamped, no revival frequency"
            )
        return self.omega_m * math.sqrt(1 - 0.25 * self.inv_Q**2)


def dimensionless_params(kappa, Lambda, chi, inv_Q, n_bar,
                         omega_m=1.0, Lambda_T=None, sigma=1.0) -> DimensionlessParams:
    """Direct dimensionless-mode constructor (kappa etc. given, no SI inputs)."""
    return DimensionlessParams(
        sigma=sigma, kappa=kappa, Lambda=Lambda, chi=chi,
        inv_Q=inv_Q, n_bar=n_bar, omega_m=omega_m, Lambda_T=Lambda_T,
    )


def thermal_occupation(omega_m: float, T: float, c: PhysConstants) -> float:
    """Bose occupation of the mirror mode; exact formula, 0 at T = 0."""
    if T == 0:
        return 0.0
    x = c.hbar * omega_m / (c.k_B * T)
    if x > 40:
        # 1/(e^x - 1) = e^-x (1 + e^-x + ...); tail below 4e-18 relative
        return math.exp(-x) if x < 745 else 0.0
    return 1.0 / math.expm1(x)


def derive_dimensionless(p: PhysicalParams,
                         c: PhysConstants = PhysConstants()) -> DimensionlessParams:
    """Convert SI inputs to the dimensionless working parameters.

    Raises ConfigError for T = 0 with lambda_qq > 0: the minimal
    momentum-space diffusion is inversely proportional to the thermal
    momentum diffusion and diverges there.
    """
    if p.T == 0 and p.lambda_qq > 0:
        raise ConfigError(
            "T = 0 with lambda_qq > 0: minimal coordinate diffusion diverges"
        )
    sigma = math.sqrt(c.hbar / (2 * p.M * p.omega_m))
    kappa = (p.omega_c / p.omega_m) * (sigma / p.L)
    inv_Q = p.gamma / p.omega_m
    n_bar = thermal_occupation(p.omega_m, p.T, c)
    Lambda_T = (c.k_B * p.T / (2 * c.hbar * p.omega_m)) * inv_Q
    if p.lambda_qq > 0 and Lambda_T > 0:
        chi = p.lambda_qq * inv_Q**2 / (16 * Lambda_T)
    else:
        chi = 0.0
    return DimensionlessParams(
        sigma=sigma,
        kappa=kappa,
        Lambda=Lambda_T + p.Lambda_nonenv,
        chi=chi,
        inv_Q=inv_Q,
        n_bar=n_bar,
        omega_m=p.omega_m,
        Lambda_T=Lambda_T,
    )


def chi_identity_check(p: PhysicalParams,
                       c: PhysConstants = PhysConstants()) -> float:
    """Return chi/(4 Lambda_T), which must equal lambda_qq*(hbar omega_m/4 k_B T)^2.

    The two sides are computed through entirely different groupings of the
    same inputs, so the ratio doubles as a wiring check of the derivation.
    """
    if not (p.T > 0 and p.gamma > 0 and p.lambda_qq >= 1):
        raise ConfigError("chi identity requires T > 0, gamma > 0, lambda_qq >= 1")
    d = derive_dimensionless(p, c)
    return d.chi / (4 * d.Lambda_T)


def classicality_diagnostics(d: DimensionlessParams) -> tuple[float, float]:
    """Return (extinction, narrowing) = (kappa^2 Lambda_T, kappa^2 n_bar).

    Both combinations are free of hbar at leading order in the
    high-temperature regime; they quantify how classical the visibility
    extinction and the revival-peak narrowing are.
    """
    return d.kappa**2 * d.Lambda_T, d.kappa**2 * d.n_bar


# --- JSON config schema ----------------------------------------------------

_PHYS_KEYS = {
    "M_kg": "M",
    "omega_m_rad_s": "omega_m",
    "omega_c_rad_s": "omega_c",
    "L_m": "L",
    "T_K": "T",
    "gamma_per_s": "gamma",
    "lambda_qq": "lambda_qq",
    "Lambda_nonenv": "Lambda_nonenv",
}
_PHYS_REQUIRED = ("M_kg", "omega_m_rad_s", "omega_c_rad_s", "L_m", "T_K",
                  "gamma_per_s")
_DIMLESS_KEYS = ("kappa", "Lambda", "chi", "inv_Q", "n_bar")


@dataclass(frozen=True)
class ParsedConfig:
    mode: str
    dimensionless: DimensionlessParams
    physical: PhysicalParams | None


def params_from_config(cfg: dict, c: PhysConstants = PhysConstants()) -> ParsedConfig:
    """Validate a config mapping and build the parameter objects.

    Exactly two schemas are accepted, selected by "mode":
      physical:      M_kg, omega_m_rad_s, omega_c_rad_s, L_m, T_K,
                     gamma_per_s, lambda_qq, Lambda_nonenv
      dimensionless: kappa, Lambda, chi, inv_Q, n_bar
    Unknown keys are an error; lambda_qq and Lambda_nonenv default to 0.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    mode = cfg.get("mode")
    if mode not in ("physical", "dimensionless"):
        raise ConfigError('config key "mode" must be "physical" or "dimensionless"')

    if mode == "physical":
        allowed = set(_PHYS_KEYS) | {"mode"}
        unknown = sorted(set(cfg) - allowed)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        missing = [k for k in _PHYS_REQUIRED if k not in cfg]
        if missing:
            raise ConfigError(f"missing config key(s): {', '.join(missing)}")
        kwargs = {attr: _as_number(cfg[key], key)
                  for key, attr in _PHYS_KEYS.items() if key in cfg}
        phys = PhysicalParams(**kwargs)
        return ParsedConfig("physical", derive_dimensionless(phys, c), phys)

    allowed = set(_DIMLESS_KEYS) | {"mode"}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    missing = [k for k in _DIMLESS_KEYS if k not in cfg]
    if missing:
        raise ConfigError(f"missing config key(s): {', '.join(missing)}")
    vals = {k: _as_number(cfg[k], k) for k in _DIMLESS_KEYS}
    return ParsedConfig("dimensionless", dimensionless_params(**vals), None)


def _as_number(v, key: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f'config key "{key}" must be a number')
    return float(v)


def with_overrides(p: PhysicalParams, **kw) -> PhysicalParams:
    """Return a copy of p with the given fields replaced."""
    return replace(p, **kw)
