import numpy as np
import pytest

from nctails.rng import random_source


@pytest.fixture
def rng():
    return random_source(20210520)


def interpolated_cdf(cdf_scalar, lo, hi, n_grid=1601):
    """Monotone interpolant of a scalar CDF, for vectorized KS testing.

    The grid is dense enough that interpolation error is orders of magnitude
    below the KS resolution at n = 1e5.
    """
    from scipy.interpolate import PchipInterpolator

    xs = np.linspace(lo, hi, n_grid)
    ps = np.array([cdf_scalar(x) for x in xs])
    ps = np.maximum.accumulate(ps)
    return PchipInterpolator(xs, ps, extrapolate=False), xs, ps


def ks_against_cdf(sample, cdf_scalar, pad=1.05):
    """Kolmogorov-Smirnov p-value of a sample against a scalar CDF."""
    from scipy.stats import kstest

    sample = np.asarray(sample)
    lo = pad * float(np.min(sample)) - 1e-9
    hi = pad * float(np.max(sample)) + 1e-9
    interp, xs, ps = interpolated_cdf(cdf_scalar, lo, hi)

    def vec_cdf(x):
        return np.clip(interp(np.clip(x, lo, hi)), 0.0, 1.0)

    return kstest(sample, vec_cdf).pvalue
