"""Exception types shared across the distribution families."""


class DivergentMomentError(ValueError):
    """Requested moment (or mgf) does not exist for these parameters."""


class NonNormalizableError(ValueError):
    """Parameter combination does not define a proper density."""


class DegenerateDataError(ValueError):
    """Data admit no interior maximum-likelihood solution (e.g. zero spread)."""
