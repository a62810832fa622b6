"""Exception types shared across the package."""


class HomduetError(Exception):
    """Base class for all package-specific errors."""


class GridMismatchError(HomduetError, ValueError):
    """Two temporal modes do not share an identical time grid."""


class WaveformTruncationError(HomduetError, ValueError):
    """Requested waveform does not fit on the grid within tolerance."""


class ConfigError(HomduetError, ValueError):
    """Invalid or inconsistent configuration."""


class FormatError(HomduetError, ValueError):
    """Malformed timestamp file (bad magic, version, or record order)."""


class InsufficientStatisticsError(HomduetError, RuntimeError):
    """Not enough counts to form a normalized estimate."""


class FitConvergenceError(HomduetError, RuntimeError):
    """Least-squares fit failed to converge or input is degenerate."""
