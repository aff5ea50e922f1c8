"""The general 4-parameter family: a t-type body (1 + x^2)^(-gamma) with real
tail exponent gamma, thinned by exp(-alpha x^2 / 2).

Standardized density

    f(x) = c(alpha, gamma) * exp(-alpha x^2 / 2) / (1 + x^2)^gamma,

with x = (y - mu) / s. gamma = (nu + 1)/2 embeds the t body with nu degrees
of freedom; integer gamma = n recovers the NC(n) genesis form; gamma < 0
gives a short-tailed law. The constant has no closed form in general and is
found by quadrature, except at alpha = 0 (a scaled t), gamma = 0 (normal) and
gamma = 1/2 (a Bessel-function form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.special import gammaln

from . import numerics, specfun
from ._univariate import symmetric_cdf, symmetric_quantile
from .errors import DivergentMomentError, NonNormalizableError
from .nc1 import LOG_2PI, Moments
from .rng import RandomSource

__all__ = [
    "NtParams",
    "log_c",
    "log_pdf",
    "pdf",
    "cdf",
    "quantile",
    "moments",
    "is_unimodal",
    "sample",
]

CONST_REL_TOL = 1e-10
CDF_REL_TOL = 1e-10


def _check_normalizable(alpha: float, gamma: float) -> None:
    if not (math.isfinite(gamma) and alpha >= 0.0 and math.isfinite(alpha)):
        raise ValueError(f"invalid (alpha, gamma) = ({alpha}, {gamma})")
    if alpha == 0.0 and gamma <= 0.5:
        raise NonNormalizableError(
            f"alpha = 0 requires gamma > 1/2 for a proper density, got gamma = {gamma}"
        )


def is_unimodal(alpha: float, gamma: float) -> bool:
    """True when the density has a single mode at the center.

    The log-density derivative is -x {alpha + 2 gamma / (1 + x^2)}: a negative
    gamma strong enough that 2 gamma + alpha < 0 splits the mode into a
    symmetric pair.
    """
    _check_normalizable(alpha, gamma)
    return gamma >= -alpha / 2.0


def _off_center_mode(alpha: float, gamma: float) -> float | None:
    if alpha > 0.0 and 2.0 * gamma + alpha < 0.0:
        return math.sqrt(-(2.0 * gamma + alpha) / alpha)
    return None


def _integrate_even(h, alpha: float, gamma: float, rel_tol: float) -> float:
    """Integral over the real line of an even integrand shaped like the
    density, split at its scale-change points."""
    pts = [1.0]
    if alpha > 1.0:
        pts.append(1.0 / math.sqrt(alpha))
    if alpha > 0.0:
        pts.append(1.0 / math.sqrt(alpha) if alpha < 1.0 else math.sqrt(alpha))
    mode = _off_center_mode(alpha, gamma)
    if mode is not None:
        pts.extend([0.5 * mode, mode, 2.0 * mode])
    pts = sorted(set(p for p in pts if p > 0.0 and math.isfinite(p)))
    total = 0.0
    lo = 0.0
    for p in pts:
        if p > lo:
            total += numerics.integrate(h, lo, p, rel_tol).value
            lo = p
    total += numerics.integrate_semi_infinite(h, lo, rel_tol).value
    return 2.0 * total


@lru_cache(maxsize=8192)
def _log_c_cached(alpha: float, gamma: float) -> float:
    if alpha == 0.0:
        # Pure t body: integral is the beta function sqrt(pi) G(g - 1/2)/G(g).
        return -(
            0.5 * math.log(math.pi) + gammaln(gamma - 0.5) - gammaln(gamma)
        )
    if gamma == 0.0:
        return 0.5 * math.log(alpha) - 0.5 * LOG_2PI
    if gamma == 0.5 and alpha <= 1000.0:
        # Bessel closed form c = exp(-alpha/4) / K0(alpha/4).
        return -0.25 * alpha - math.log(specfun.bessel_k(0, 0.25 * alpha))

    def h(x: float) -> float:
        return math.exp(-0.5 * alpha * x * x - gamma * math.log1p(x * x))

    return -math.log(_integrate_even(h, alpha, gamma, CONST_REL_TOL))


def log_c(alpha: float, gamma: float) -> float:
    """Log normalization constant; cached per (alpha, gamma)."""
    _check_normalizable(alpha, gamma)
    return _log_c_cached(float(alpha), float(gamma))


@dataclass(frozen=True)
class NtParams:
    """Location mu, scale s > 0, truncation rate alpha >= 0, tail exponent gamma.

    alpha = 0 needs gamma > 1/2 (plain scaled t); gamma may be negative
    (short-tailed) whenever alpha > 0.
    """

    mu: float = 0.0
    s: float = 1.0
    alpha: float = field(kw_only=True)
    gamma: float = field(kw_only=True)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.s) and self.s > 0.0):
            raise ValueError(f"invalid location/scale ({self.mu}, {self.s})")
        _check_normalizable(self.alpha, self.gamma)

    @property
    def nu(self) -> float:
        """Degrees of freedom of the body, 2 gamma - 1."""
        return 2.0 * self.gamma - 1.0

    @cached_property
    def log_c(self) -> float:
        return log_c(self.alpha, self.gamma)


def log_pdf(params: NtParams, y):
    """Log-density at ``y``; broadcasts over array input."""
    y = np.asarray(y, dtype=float)
    x = (y - params.mu) / params.s
    out = (
        params.log_c
        - 0.5 * params.alpha * x * x
        - params.gamma * np.log1p(x * x)
        - math.log(params.s)
    )
    return float(out) if out.ndim == 0 else out


def pdf(params: NtParams, y):
    return np.exp(log_pdf(params, y))


def _std_pdf(params: NtParams):
    lc, a, g = params.log_c, params.alpha, params.gamma
    return lambda u: math.exp(lc - 0.5 * a * u * u - g * math.log1p(u * u))


def _breakpoints(params: NtParams) -> tuple[float, ...]:
    pts = [1.0]
    if params.alpha > 1.0:
        pts.append(1.0 / math.sqrt(params.alpha))
    mode = _off_center_mode(params.alpha, params.gamma)
    if mode is not None:
        pts.append(mode)
    return tuple(pts)


def cdf(params: NtParams, y: float, rel_tol: float = CDF_REL_TOL) -> float:
    x = (float(y) - params.mu) / params.s
    return symmetric_cdf(_std_pdf(params), x, _breakpoints(params), rel_tol)


def quantile(params: NtParams, p: float) -> float:
    return symmetric_quantile(lambda y: cdf(params, y), params.mu, params.s, p)


def moments(params: NtParams, rel_tol: float = CONST_REL_TOL) -> Moments:
    """(m2, m4, excess kurtosis) about mu, by quadrature; m2 and m4 carry the
    scale, the kurtosis does not. At alpha = 0 the fourth moment needs a body
    with more than four degrees of freedom."""
    a, g = params.alpha, params.gamma
    if a == 0.0 and 2.0 * g - 1.0 <= 4.0:
        raise DivergentMomentError(
            f"fourth moment diverges at alpha = 0 with gamma = {g} (nu <= 4)"
        )
    lc = params.log_c

    def weighted(power: int):
        return lambda x: x**power * math.exp(
            lc - 0.5 * a * x * x - g * math.log1p(x * x)
        )

    m2 = _integrate_even(weighted(2), a, g, rel_tol)
    m4 = _integrate_even(weighted(4), a, g, rel_tol)
    kurt = m4 / (m2 * m2) - 3.0
    return Moments(m2 * params.s**2, m4 * params.s**4, kurt)


def _inversion_table(params: NtParams, n_grid: int = 8192):
    """Equally spaced CDF table over the numerically relevant support,
    integrated cumulatively; used by the inversion sampling path."""
    from scipy.integrate import cumulative_simpson

    std = NtParams(alpha=params.alpha, gamma=params.gamma)
    hi = 1.0
    while cdf(std, hi) < 1.0 - 1e-13:
        hi *= 2.0
        if hi > 1e9:
            break
    x = np.linspace(-hi, hi, n_grid + 1)
    dens = pdf(std, x)
    p = cumulative_simpson(dens, x=x, initial=0.0)
    p += cdf(std, -hi)
    return x, np.clip(p, 0.0, 1.0)


def sample(params: NtParams, rng: RandomSource, size: int | None = None):
    """Draws from the family.

    A t-like body (gamma >= 3/4) uses rejection from the rescaled t proposal
    with acceptance exp(-alpha X^2 / 2); gamma = 0 and alpha = 0 are exact;
    everything else inverts the numeric CDF on a dense table.
    """
    from .ncn import sample_student_t

    n_draws = 1 if size is None else int(size)
    a, g = params.alpha, params.gamma
    if g == 0.0:
        vals = rng.standard_normal(n_draws) / math.sqrt(a)
    elif a == 0.0:
        nu = 2.0 * g - 1.0
        vals = np.asarray(sample_student_t(nu, rng, size=n_draws)) / math.sqrt(nu)
    elif g >= 0.75:
        nu = 2.0 * g - 1.0
        root_nu = math.sqrt(nu)
        out = np.empty(n_draws)
        filled = 0
        acc_rate = 0.5
        while filled < n_draws:
            m = max(int((n_draws - filled) / acc_rate) + 8, 16)
            x = np.asarray(sample_student_t(nu, rng, size=m)) / root_nu
            u = rng.random(m)
            accepted = x[u < np.exp(-0.5 * a * x * x)]
            k = min(accepted.size, n_draws - filled)
            out[filled : filled + k] = accepted[:k]
            filled += k
            acc_rate = max(accepted.size / m, 0.02)
        vals = out
    else:
        grid, probs = _inversion_table(params)
        vals = np.interp(rng.random(n_draws), probs, grid)
    res = params.mu + params.s * np.asarray(vals)
    return float(res[0]) if size is None else res
