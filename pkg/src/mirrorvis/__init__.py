"""Visibility of a single photon entangled with a vibrating cavity mirror.

The package propagates the Gaussian characteristic-function coefficients
of the photon-conditioned mirror state under thermal position
decoherence, mechanical friction and the coordinate-diffusion correction,
and computes the resulting interference visibility through independent
cross-checking routes, plus (T, gamma) scans of the first-revival
extinction.
"""

from .errors import (
    ConfigError,
    DivergenceError,
    MirrorVisError,
    NumericsError,
    OverdampedError,
    QuadratureConvergenceError,
    RealnessError,
)
from .params import (
    LAMBDA_CSL,
    DimensionlessParams,
    PhysConstants,
    PhysicalParams,
    chi_identity_check,
    classicality_diagnostics,
    derive_dimensionless,
    dimensionless_params,
    params_from_config,
)
from .propagator import (
    CoeffState,
    CoeffTrajectory,
    FTriple,
    characteristic_value,
    extract_f,
    initial_state,
    pde_residual,
    propagate,
    rhs,
    write_trajectory_csv,
)
from .scan import (
    ScanGrid,
    csl_threshold_curve,
    optimal_temperature,
    run_scan,
    scan_base,
    write_curve_csv,
    write_scan_csv,
)
from .visibility import (
    ROUTE_CLOSED_FORM,
    ROUTE_ODE_ANALYTIC,
    ROUTE_ODE_QUADRATURE,
    FirstRevival,
    VisibilitySeries,
    first_revival,
    time_grid,
    visibility_closed_form,
    visibility_quadrature,
    visibility_single,
    visibility_thermal,
    write_visibility_csv,
)

__version__ = "0.1.0"
