"""The NC(n) family: Cauchy-power bodies (1 + x^2)^(-n) with Gaussian tail
thinning.

Standardized density (rescaled form)

    f(x) = sqrt(1 - beta) c_n(alpha) * exp(-beta x^2 / 2) / (1 + (1 - beta) x^2)^n,

where alpha = beta / (1 - beta). The unscaled constant is

    c_n(alpha) = 2^(n-1) (n-1)! exp(-alpha/2) / (sqrt(2 pi) I_n(alpha)),
    I_n(alpha) = int_sqrt(alpha)^inf (z^2 - alpha)^(n-1) exp(-z^2/2) dz,

and the I_n satisfy I_n = (2n - 3 - alpha) I_{n-1} + 2 alpha (n - 2) I_{n-2}.
The polynomial body corresponds to nu = 2n - 1 degrees of freedom; n = 1 is
the NC(1) distribution again. The unscaled c_n and the sqrt(1 - beta) factor
are kept separate because the moment formulas use the unscaled ratio c2/c1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.special import erfcx, gammaln

from . import numerics
from ._univariate import symmetric_cdf, symmetric_quantile
from .errors import DivergentMomentError
from .nc1 import BETA_NORMAL_CUTOFF, LOG_2PI, Moments
from .rng import RandomSource

__all__ = [
    "NcnParams",
    "MAX_N",
    "i_n",
    "log_cn",
    "log_pdf",
    "pdf",
    "cdf",
    "quantile",
    "nc2_moments",
    "sample_student_t",
    "sample",
]

MAX_N = 10
CONST_REL_TOL = 1e-10
CDF_REL_TOL = 1e-10

# The recurrence mixes signs once alpha > 2n - 3 and sheds digits; beyond this
# relative disagreement with direct quadrature, the quadrature value wins.
_RECURRENCE_GUARD = 1e-8


def _check_n(n: int) -> int:
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_N):
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n}")
    return int(n)


def _i_scaled_recurrence(n: int, alpha: float) -> float:
    # exp(alpha/2) I_n, so nothing underflows at large alpha:
    # exp(alpha/2) I_1 = sqrt(pi/2) erfcx(sqrt(alpha/2)).
    i1 = math.sqrt(math.pi / 2.0) * float(erfcx(math.sqrt(0.5 * alpha)))
    if n == 1:
        return i1
    i2 = math.sqrt(alpha) + (1.0 - alpha) * i1
    prev, cur = i1, i2
    for m in range(3, n + 1):
        prev, cur = cur, (2 * m - 3 - alpha) * cur + 2.0 * alpha * (m - 2) * prev
    return cur


def _i_scaled_quadrature(n: int, alpha: float) -> float:
    # Substituting z = sqrt(alpha) + u keeps the integrand O(1) at any alpha.
    ra = math.sqrt(alpha)

    def integrand(u: float) -> float:
        return (u * (u + 2.0 * ra)) ** (n - 1) * math.exp(-u * ra - 0.5 * u * u)

    return numerics.integrate_semi_infinite(integrand, 0.0, CONST_REL_TOL).value


@lru_cache(maxsize=8192)
def _i_n_scaled(n: int, alpha: float) -> float:
    rec = _i_scaled_recurrence(n, alpha)
    quad = _i_scaled_quadrature(n, alpha)
    if not math.isfinite(rec) or abs(rec - quad) > _RECURRENCE_GUARD * abs(quad):
        return quad
    return rec


def i_n(n: int, alpha: float) -> float:
    """The genesis integral I_n(alpha); closed-form recurrence cross-checked
    against direct quadrature on every evaluation."""
    n = _check_n(n)
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return math.exp(-0.5 * alpha) * _i_n_scaled(n, alpha)


def _log_cn_alpha(n: int, alpha: float) -> float:
    """Log of the unscaled constant c_n(alpha) of the density in genesis form."""
    return (
        (n - 1) * math.log(2.0)
        + gammaln(n)
        - 0.5 * LOG_2PI
        - math.log(_i_n_scaled(n, alpha))
    )


def log_cn(n: int, beta: float) -> float:
    """Log constant of the rescaled density, i.e. log{sqrt(1-beta) c_n(alpha)}."""
    n = _check_n(n)
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if beta >= BETA_NORMAL_CUTOFF:
        return -0.5 * LOG_2PI
    return 0.5 * math.log1p(-beta) + _log_cn_alpha(n, beta / (1.0 - beta))


@dataclass(frozen=True)
class NcnParams:
    """Degree n >= 1, location mu, scale s > 0, tail weight beta in [0, 1]."""

    n: int
    mu: float = 0.0
    s: float = 1.0
    beta: float = field(kw_only=True)

    def __post_init__(self) -> None:
        _check_n(self.n)
        if not (math.isfinite(self.mu) and math.isfinite(self.s) and self.s > 0.0):
            raise ValueError(f"invalid location/scale ({self.mu}, {self.s})")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")

    @property
    def nu(self) -> int:
        """Degrees of freedom of the polynomial body, 2n - 1."""
        return 2 * self.n - 1

    @cached_property
    def alpha(self) -> float:
        return self.beta / (1.0 - self.beta) if self.beta < 1.0 else math.inf

    @cached_property
    def log_cn(self) -> float:
        return log_cn(self.n, self.beta)

    @property
    def is_normal_limit(self) -> bool:
        return self.beta >= BETA_NORMAL_CUTOFF

    @property
    def anchor(self) -> float:
        return (1.0 - self.beta) ** -0.5 if self.beta < 1.0 else math.inf


def log_pdf(params: NcnParams, y):
    """Log-density at ``y``; broadcasts over array input."""
    y = np.asarray(y, dtype=float)
    x = (y - params.mu) / params.s
    if params.is_normal_limit:
        out = -0.5 * x * x - 0.5 * LOG_2PI - math.log(params.s)
    else:
        b = params.beta
        out = (
            params.log_cn
            - 0.5 * b * x * x
            - params.n * np.log1p((1.0 - b) * x * x)
            - math.log(params.s)
        )
    return float(out) if out.ndim == 0 else out


def pdf(params: NcnParams, y):
    return np.exp(log_pdf(params, y))


def _std_pdf(params: NcnParams):
    lc, b, n = params.log_cn, params.beta, params.n
    return lambda u: math.exp(lc - 0.5 * b * u * u - n * math.log1p((1.0 - b) * u * u))


def cdf(params: NcnParams, y: float, rel_tol: float = CDF_REL_TOL) -> float:
    from . import specfun

    x = (float(y) - params.mu) / params.s
    if params.is_normal_limit:
        return specfun.std_normal_cdf(x)
    return symmetric_cdf(_std_pdf(params), x, (params.anchor,), rel_tol)


def quantile(params: NcnParams, p: float) -> float:
    if params.is_normal_limit:
        from scipy.special import ndtri

        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile requires p in (0, 1), got {p}")
        return params.mu + params.s * float(ndtri(p))
    return symmetric_quantile(lambda y: cdf(params, y), params.mu, params.s, p)


def nc2_moments(beta: float) -> Moments:
    """(E X^2, E X^4, excess kurtosis) for NC(2):

        E X^2 = (c2/c1 - 1) / (1 - beta),
        E X^4 = (1 - 2 c2/c1) / (1 - beta)^2
                + (1 - beta)^(-3/2) sqrt(2 pi / beta) c2,

    with the unscaled constants evaluated at the same alpha (scale factors
    cancel in the ratio)."""
    if beta <= 0.0:
        raise DivergentMomentError("NC(2) moments diverge at beta = 0")
    if beta >= BETA_NORMAL_CUTOFF:
        return Moments(1.0, 3.0, 0.0)
    alpha = beta / (1.0 - beta)
    ratio = math.exp(_log_cn_alpha(2, alpha) - _log_cn_alpha(1, alpha))
    c2 = math.exp(_log_cn_alpha(2, alpha))
    m2 = (ratio - 1.0) / (1.0 - beta)
    m4 = (1.0 - 2.0 * ratio) / (1.0 - beta) ** 2 + (1.0 - beta) ** -1.5 * math.sqrt(
        2.0 * math.pi / beta
    ) * c2
    return Moments(m2, m4, m4 / (m2 * m2) - 3.0)


def sample_student_t(nu: float, rng: RandomSource, size: int | None = None):
    """Student-t draws by the polar rejection method: (U, V) uniform on the
    unit disc with W = U^2 + V^2, return U sqrt(nu (W^(-2/nu) - 1) / W)."""
    if not nu > 0.0:
        raise ValueError(f"nu must be > 0, got {nu}")
    n = 1 if size is None else int(size)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(int(1.35 * (n - filled)) + 8, 16)
        u = rng.uniform(-1.0, 1.0, m)
        v = rng.uniform(-1.0, 1.0, m)
        w = u * u + v * v
        keep = (w < 1.0) & (w > 0.0)
        uw, w = u[keep], w[keep]
        # nu (w^(-2/nu) - 1) via expm1 so the large-nu normal limit keeps
        # full precision.
        t = uw * np.sqrt(nu * np.expm1((-2.0 / nu) * np.log(w)) / w)
        k = min(t.size, n - filled)
        out[filled : filled + k] = t[:k]
        filled += k
    return float(out[0]) if size is None else out


def sample(params: NcnParams, rng: RandomSource, size: int | None = None):
    """Generic rejection sampler: Y ~ t(2n - 1), rescaled to
    X = Y / sqrt((2n - 1)(1 - beta)), accepted with probability
    exp(-beta X^2 / 2). Valid for every n including n = 1."""
    n_draws = 1 if size is None else int(size)
    if params.is_normal_limit:
        vals = rng.standard_normal(n_draws)
    else:
        nu = float(params.nu)
        scale = math.sqrt(nu * (1.0 - params.beta))
        b = params.beta
        out = np.empty(n_draws)
        filled = 0
        acc_rate = 0.5
        while filled < n_draws:
            m = max(int((n_draws - filled) / acc_rate) + 8, 16)
            x = np.asarray(sample_student_t(nu, rng, size=m)) / scale
            u = rng.random(m)
            accepted = x[u < np.exp(-0.5 * b * x * x)]
            k = min(accepted.size, n_draws - filled)
            out[filled : filled + k] = accepted[:k]
            filled += k
            acc_rate = max(accepted.size / m, 0.05)
        vals = out
    res = params.mu + params.s * vals
    return float(res[0]) if size is None else res
