"""Exception types shared across the package."""


class BosonStarError(Exception):
    """Base class for package errors."""


class ConfigurationError(BosonStarError):
    """Invalid grid, symbol, or run configuration."""


class DegenerateInputError(BosonStarError):
    """Operation applied to an input it cannot meaningfully handle (zero field etc.)."""


class GridMismatchError(BosonStarError):
    """Two fields that must share a grid do not."""


class DomainTruncationError(BosonStarError):
    """Radial domain too small for the requested operation."""


class ResolutionError(BosonStarError):
    """Requested profile or scale is not resolvable on the grid."""


class ModelMismatchError(BosonStarError):
    """Empirical local behavior does not converge to the declared power law."""


class RequiresMomentError(BosonStarError):
    """A dilation-parameter formula needs a moment that was not computed."""


class InsufficientRangeError(BosonStarError):
    """Scaling fit attempted on too few rows or too narrow a range."""


class SolverInconsistencyError(BosonStarError):
    """Independent solution routes disagree beyond the allowed margin."""


class DomainTruncationWarning(UserWarning):
    """Tail mass near the outer radius exceeds the trusted threshold."""


class NonconvergenceError(BosonStarError):
    """Iteration failed to reach the requested residual."""
