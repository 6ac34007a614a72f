"""Exception types shared across the package."""


class DesignLabError(Exception):
    """Base class for all package-specific failures."""


class PrecisionError(DesignLabError):
    """An operation tried to read q-series coefficients beyond what is known."""


class OffsetError(DesignLabError):
    """Two series live on q-exponent grids that cannot be combined."""


class CapExceededError(DesignLabError):
    """An enumeration would exceed its configured size cap."""


class FixtureError(DesignLabError):
    """A bundled fixture file is missing or malformed."""
