"""Exception types shared across the package.

The split mirrors the CLI exit-code contract: configuration problems
(bad keys, invalid parameter values, incompatible options) versus
numerical failures detected while computing.
"""


class MirrorVisError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MirrorVisError, ValueError):
    """Invalid configuration: unknown/missing keys or out-of-range values."""


class NumericsError(MirrorVisError, RuntimeError):
    """Numerical failure while computing (divergence, lost realness, ...)."""


class DivergenceError(NumericsError):
    """A propagated coefficient exceeded the divergence guard (|c| > 1e12)."""


class RealnessError(NumericsError):
    """A quantity that must be real carries an imaginary residue above tolerance."""


class OverdampedError(NumericsError):
    """Operation requires an underdamped oscillator (inv_Q < 2)."""


class QuadratureConvergenceError(NumericsError):
    """Doubling the quadrature order changed the result beyond tolerance."""
