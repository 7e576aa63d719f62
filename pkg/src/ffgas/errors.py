"""Shared exception and warning types."""


class ConfigError(ValueError):
    """Invalid run configuration (unknown key, bad value). CLI exit code 2."""


class UnsupportedModelError(ValueError):
    """Operation not defined for the given confinement model."""


class NumericsError(RuntimeError):
    """A numerical routine failed to reach its required tolerance. CLI exit code 3."""


class TruncationWarning(UserWarning):
    """Grid too small to contain the state; results may be truncated."""


class GridResolutionWarning(UserWarning):
    """Stencil-based expectation values did not converge on this grid."""


class RegimeWarning(UserWarning):
    """Temperature regime assumption questionable for the requested sweep."""
