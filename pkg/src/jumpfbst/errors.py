"""Exception types shared across the package."""


class JumpFbstError(Exception):
    """Base class for all package-specific errors."""


class DataError(JumpFbstError):
    """An input series cannot be parsed or is unusable (empty, constant, ...)."""


class EstimationError(JumpFbstError):
    """An estimate cannot be formed from the available samples."""


class DegenerateDataError(EstimationError):
    """The data make the target quantity diverge (e.g. zero-variance series)."""
