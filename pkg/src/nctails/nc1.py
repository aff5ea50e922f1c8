"""The NC(1) distribution: a Cauchy body whose tails are thinned by a Gaussian
survival factor.

Standardized density

    f(x) = c1 * exp(-beta x^2 / 2) / (1 + (1 - beta) x^2),

interpolating between the standard Cauchy at beta = 0 and the standard normal
at beta = 1; the three-parameter family is x = (y - mu) / s. Equivalently X is
normal with inverse scale sqrt(1 - beta) Z, where Z is a standard normal
truncated below at sqrt(alpha) and alpha = beta / (1 - beta).

All moments and the mgf exist for beta > 0, which is the point of the family:
the tail is polynomial over many scales yet eventually Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import numerics, specfun
from ._univariate import symmetric_cdf, symmetric_quantile
from .errors import DivergentMomentError
from .rng import RandomSource

__all__ = [
    "Nc1Params",
    "Moments",
    "alpha_from_beta",
    "beta_from_alpha",
    "log_c1",
    "log_pdf",
    "pdf",
    "cdf",
    "quantile",
    "central_moments",
    "mgf",
    "char_fn",
    "sample_truncated_normal",
    "sample",
    "BETA_NORMAL_CUTOFF",
]

LOG_2PI = math.log(2.0 * math.pi)
CONST_REL_TOL = 1e-10
CDF_REL_TOL = 1e-10

# Above this the Gaussian limb is exact to double precision and the general
# formulas hit 0/0; route to closed normal forms.
BETA_NORMAL_CUTOFF = 1.0 - 1e-9


class Moments(NamedTuple):
    m2: float
    m4: float
    excess_kurtosis: float


def alpha_from_beta(beta: float) -> float:
    """Truncation rate alpha = beta / (1 - beta); infinite at beta = 1."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if beta == 1.0:
        return math.inf
    return beta / (1.0 - beta)


def beta_from_alpha(alpha: float) -> float:
    """Inverse map beta = alpha / (1 + alpha)."""
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if math.isinf(alpha):
        return 1.0
    return alpha / (1.0 + alpha)


def log_c1(beta: float) -> float:
    """Log of the normalization constant of the standardized density.

    Evaluated in log space throughout: Phi(-sqrt(alpha)) underflows once
    alpha exceeds ~1400, but its log stays benign.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if beta >= BETA_NORMAL_CUTOFF:
        return -0.5 * LOG_2PI
    alpha = beta / (1.0 - beta)
    return (
        0.5 * math.log1p(-beta)
        - 0.5 * alpha
        - LOG_2PI
        - specfun.log_std_normal_cdf(-math.sqrt(alpha))
    )


@dataclass(frozen=True)
class Nc1Params:
    """Location mu, scale s > 0, tail weight beta in [0, 1].

    beta = 0 is permitted for density, CDF and sampling (Cauchy limit) but has
    no finite moments; beta = 1 is the exact normal limit.
    """

    mu: float = 0.0
    s: float = 1.0
    beta: float = field(kw_only=True)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.s) and self.s > 0.0):
            raise ValueError(f"invalid location/scale ({self.mu}, {self.s})")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")

    @cached_property
    def alpha(self) -> float:
        return alpha_from_beta(self.beta)

    @cached_property
    def log_c1(self) -> float:
        # Cached: the constant is evaluated once per parameter record, however
        # many density/likelihood calls follow.
        return log_c1(self.beta)

    @property
    def is_normal_limit(self) -> bool:
        return self.beta >= BETA_NORMAL_CUTOFF

    @property
    def anchor(self) -> float:
        """Standardized point (1 - beta)^(-1/2) where the CDF has a closed form."""
        return (1.0 - self.beta) ** -0.5 if self.beta < 1.0 else math.inf


def log_pdf(params: Nc1Params, y):
    """Log-density at ``y``; broadcasts over array input."""
    y = np.asarray(y, dtype=float)
    x = (y - params.mu) / params.s
    if params.is_normal_limit:
        out = -0.5 * x * x - 0.5 * LOG_2PI - math.log(params.s)
    else:
        b = params.beta
        out = (
            params.log_c1
            - 0.5 * b * x * x
            - np.log1p((1.0 - b) * x * x)
            - math.log(params.s)
        )
    return float(out) if out.ndim == 0 else out


def pdf(params: Nc1Params, y):
    """Density exp(log_pdf); the logged form is the single code path."""
    return np.exp(log_pdf(params, y))


def _std_pdf(params: Nc1Params):
    lc, b = params.log_c1, params.beta
    return lambda u: math.exp(lc - 0.5 * b * u * u - math.log1p((1.0 - b) * u * u))


def cdf(params: Nc1Params, y: float, rel_tol: float = CDF_REL_TOL) -> float:
    """Distribution function, by quadrature split at the closed-form anchor
    x = (1 - beta)^(-1/2); the normal limit delegates to Phi."""
    x = (float(y) - params.mu) / params.s
    if params.is_normal_limit:
        return specfun.std_normal_cdf(x)
    return symmetric_cdf(_std_pdf(params), x, (params.anchor,), rel_tol)


def quantile(params: Nc1Params, p: float) -> float:
    """Inverse CDF; quantile(0.5) is exactly mu."""
    if params.is_normal_limit:
        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile requires p in (0, 1), got {p}")
        from scipy.special import ndtri

        return params.mu + params.s * float(ndtri(p))
    return symmetric_quantile(lambda y: cdf(params, y), params.mu, params.s, p)


def central_moments(beta: float) -> Moments:
    """(E X^2, E X^4, excess kurtosis) of the standardized law.

    The Gaussian integral over the density gives
        E X^2 = {c1 sqrt(2 pi / beta) - 1} / (1 - beta),
        E X^4 = {c1 sqrt(2 pi / beta) (1 - 2 beta) / beta + 1} / (1 - beta)^2.
    """
    if beta <= 0.0:
        raise DivergentMomentError("NC(1) moments diverge at beta = 0 (Cauchy limit)")
    if beta >= BETA_NORMAL_CUTOFF:
        return Moments(1.0, 3.0, 0.0)
    g = math.exp(log_c1(beta)) * math.sqrt(2.0 * math.pi / beta)
    m2 = (g - 1.0) / (1.0 - beta)
    m4 = (g * (1.0 - 2.0 * beta) / beta + 1.0) / (1.0 - beta) ** 2
    return Moments(m2, m4, m4 / (m2 * m2) - 3.0)


def _mixture_expectation(beta: float, t2_over_z2: float, rel_tol: float) -> float:
    # E over the truncated-normal inverse scale of exp(t2 / z^2), where
    # t2 = +-t^2 / (2 (1 - beta)); log-space weight avoids Phi underflow.
    alpha = beta / (1.0 - beta)
    a = math.sqrt(alpha)
    log_norm = 0.5 * LOG_2PI + specfun.log_std_normal_cdf(-a)

    def integrand(z: float) -> float:
        return math.exp(t2_over_z2 / (z * z) - 0.5 * z * z - log_norm)

    return numerics.integrate_semi_infinite(integrand, a, rel_tol).value


def mgf(beta: float, t: float, rel_tol: float = CONST_REL_TOL) -> float:
    """Moment generating function E exp(tX), finite for every t when beta > 0."""
    if beta <= 0.0:
        raise DivergentMomentError("the mgf exists only for beta > 0")
    if t == 0.0:
        return 1.0
    if beta >= BETA_NORMAL_CUTOFF:
        return math.exp(0.5 * t * t)
    return _mixture_expectation(beta, t * t / (2.0 * (1.0 - beta)), rel_tol)


def char_fn(beta: float, t: float, rel_tol: float = CONST_REL_TOL) -> float:
    """Characteristic function E cos(tX) (real by symmetry), evaluated
    numerically through the mixture representation."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if t == 0.0:
        return 1.0
    if beta >= BETA_NORMAL_CUTOFF:
        return math.exp(-0.5 * t * t)
    return _mixture_expectation(beta, -t * t / (2.0 * (1.0 - beta)), rel_tol)


def sample_truncated_normal(a: float, rng: RandomSource, size: int | None = None):
    """Standard normal conditioned on Z >= a (a >= 0), by rejection from a
    shifted exponential majorizer.

    The exponential rate lam = (a + sqrt(a^2 + 4)) / 2 maximizes acceptance;
    a proposal Z = a - ln(U)/lam is accepted when V <= exp(-(Z - lam)^2 / 2).
    """
    if a < 0.0:
        raise ValueError(f"truncation point must be >= 0, got {a}")
    lam = 0.5 * (a + math.sqrt(a * a + 4.0))
    n = 1 if size is None else int(size)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(int(1.5 * (n - filled)) + 8, 16)
        u = rng.random(m)
        v = rng.random(m)
        z = a - np.log(u) / lam
        accepted = z[v <= np.exp(-0.5 * (z - lam) ** 2)]
        k = min(accepted.size, n - filled)
        out[filled : filled + k] = accepted[:k]
        filled += k
    return float(out[0]) if size is None else out


def sample(params: Nc1Params, rng: RandomSource, size: int | None = None):
    """Draws via the scale mixture: X_normal / (sqrt(1 - beta) Z) with Z a
    truncated normal; beta = 1 degenerates to plain normal draws."""
    n = 1 if size is None else int(size)
    if params.is_normal_limit:
        vals = rng.standard_normal(n)
    else:
        z = sample_truncated_normal(math.sqrt(params.alpha), rng, size=n)
        x = rng.standard_normal(n)
        vals = x / (math.sqrt(1.0 - params.beta) * z)
    out = params.mu + params.s * vals
    return float(out[0]) if size is None else out
