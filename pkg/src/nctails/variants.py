"""Companions of the symmetric families: the asymmetric two-piece law, the
nonnegative survival-tail law, the bivariate/trivariate elliptical family and
the Bessel-form density shared with the tail exponent 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import nc1, numerics, specfun
from .errors import NonNormalizableError
from .nc1 import LOG_2PI, Nc1Params
from .rng import RandomSource

__all__ = [
    "TwoPieceParams",
    "two_piece_log_pdf",
    "two_piece_pdf",
    "two_piece_mean",
    "two_piece_prob_below_mu",
    "two_piece_sample",
    "SurvTailParams",
    "survival_log_pdf",
    "survival_cdf",
    "MultiNcParams",
    "mv_log_pdf",
    "mv_covariance",
    "mv_sample",
    "blurred_t_half_log_pdf",
]

CDF_REL_TOL = 1e-10


# ---------------------------------------------------------------------------
# Two-piece asymmetric law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoPieceParams:
    """Junction mu, side scales s1 (left) and s2 (right), tail weight beta.

    Density 2k/(s1 + s2) times the one-sided standardized density of each
    side; k is fixed by normalization and equals the symmetric constant c1,
    which also makes the density and its first derivative continuous at mu.
    """

    mu: float = 0.0
    s1: float = field(kw_only=True)
    s2: float = field(kw_only=True)
    beta: float = field(kw_only=True)

    def __post_init__(self) -> None:
        if not (self.s1 > 0.0 and self.s2 > 0.0 and math.isfinite(self.mu)):
            raise ValueError(f"invalid two-piece scales ({self.s1}, {self.s2})")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")

    @cached_property
    def log_k(self) -> float:
        return nc1.log_c1(self.beta)


def two_piece_log_pdf(params: TwoPieceParams, y):
    """Log-density; the side scale switches at the junction mu."""
    y = np.asarray(y, dtype=float)
    s = np.where(y <= params.mu, params.s1, params.s2)
    u = (y - params.mu) / s
    b = params.beta
    out = (
        math.log(2.0)
        + params.log_k
        - math.log(params.s1 + params.s2)
        - 0.5 * b * u * u
        - np.log1p((1.0 - b) * u * u)
    )
    return float(out) if out.ndim == 0 else out


def two_piece_pdf(params: TwoPieceParams, y):
    return np.exp(two_piece_log_pdf(params, y))


def _exp_scaled_e1(c: float) -> float:
    """exp(c) E1(c), safe for large c where the two factors over/underflow."""
    if c < 30.0:
        return math.exp(c) * specfun.exp_integral_e1(c)
    total, term = 0.0, 1.0 / c
    for k in range(1, 40):
        total += term
        nxt = term * (-k) / c
        if abs(nxt) < 1e-17 * abs(total) or abs(nxt) > abs(term):
            break
        term = nxt
    return total


def two_piece_mean(params: TwoPieceParams) -> float:
    """E(Y) = mu + k (s2 - s1) exp(c) E1(c) / (1 - beta), c = beta/(2(1-beta))."""
    b = params.beta
    c = b / (2.0 * (1.0 - b))
    k = math.exp(params.log_k)
    return params.mu + k * (params.s2 - params.s1) * _exp_scaled_e1(c) / (1.0 - b)


def two_piece_prob_below_mu(params: TwoPieceParams) -> float:
    """P(Y <= mu) = s1 / (s1 + s2), exactly."""
    return params.s1 / (params.s1 + params.s2)


def two_piece_sample(params: TwoPieceParams, rng: RandomSource, size: int | None = None):
    """Pick the side with probability s1/(s1+s2), then draw a half magnitude
    from the standardized symmetric law and scale it by that side's s."""
    n = 1 if size is None else int(size)
    left = rng.random(n) < two_piece_prob_below_mu(params)
    mag = np.abs(np.asarray(nc1.sample(Nc1Params(beta=params.beta), rng, size=n)))
    out = params.mu + np.where(left, -params.s1 * mag, params.s2 * mag)
    return float(out[0]) if size is None else out


# ---------------------------------------------------------------------------
# Survival-tail law on x >= 0
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurvTailParams:
    """Tail weight beta, tail exponent gamma, scale > 0; support x >= 0.

    Standardized density c exp(-beta x) / {1 + (1 - beta) x}^gamma, running
    from the Lomax law at beta = 0 (needs gamma > 1) to the unit exponential
    at beta = 1.
    """

    beta: float = field(kw_only=True)
    gamma: float = field(kw_only=True)
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.beta <= 1.0 and self.scale > 0.0 and math.isfinite(self.gamma)):
            raise ValueError(
                f"invalid survival parameters (beta={self.beta}, gamma={self.gamma}, "
                f"scale={self.scale})"
            )
        if self.beta == 0.0 and self.gamma <= 1.0:
            raise NonNormalizableError("beta = 0 requires gamma > 1 (Lomax tail)")

    @cached_property
    def log_c(self) -> float:
        return _survival_log_c(self.beta, self.gamma)


_EXP_LIMIT_BETA = 1.0 - 1e-9


def _log_upper_gamma(a: float, x: float) -> float:
    if x <= 600.0:
        return math.log(specfun.upper_incomplete_gamma(a, x))
    # Watson asymptotics of Gamma(a, x) for huge x, in log form.
    corr = 1.0 + (a - 1.0) / x * (1.0 + (a - 2.0) / x * (1.0 + (a - 3.0) / x))
    return -x + (a - 1.0) * math.log(x) + math.log(corr)


def _survival_log_c(beta: float, gamma: float) -> float:
    """Log constant: c = beta exp(-b) b^(-gamma) / Gamma(1 - gamma, b) with
    b = beta/(1-beta); Lomax and exponential endpoints are closed forms."""
    if beta >= _EXP_LIMIT_BETA:
        return 0.0
    if beta == 0.0:
        return math.log(gamma - 1.0)
    b = beta / (1.0 - beta)
    return math.log(beta) - b - gamma * math.log(b) - _log_upper_gamma(1.0 - gamma, b)


def survival_log_pdf(params: SurvTailParams, x):
    """Log-density on x >= 0 (negative x maps to -inf)."""
    x = np.asarray(x, dtype=float)
    u = x / params.scale
    b = params.beta
    if b >= _EXP_LIMIT_BETA:
        out = np.where(u >= 0.0, -u - math.log(params.scale), -np.inf)
    else:
        with np.errstate(invalid="ignore"):
            body = (
                params.log_c
                - b * u
                - params.gamma * np.log1p((1.0 - b) * u)
                - math.log(params.scale)
            )
        out = np.where(u >= 0.0, body, -np.inf)
    return float(out) if out.ndim == 0 else out


def survival_cdf(params: SurvTailParams, x: float, rel_tol: float = CDF_REL_TOL) -> float:
    """Distribution function by quadrature; the far tail is integrated from
    above so small survival probabilities stay accurate."""
    x = float(x)
    if x <= 0.0:
        return 0.0
    if params.beta >= _EXP_LIMIT_BETA:
        return -math.expm1(-x / params.scale)

    def dens(v: float) -> float:
        return math.exp(survival_log_pdf(params, v))

    tail = numerics.integrate_semi_infinite(dens, x, rel_tol).value
    if tail < 0.5:
        return 1.0 - tail
    return numerics.integrate(dens, 0.0, x, rel_tol).value


# ---------------------------------------------------------------------------
# Bivariate / trivariate elliptical family
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MultiNcParams:
    """Dimension p in {2, 3} (from the length of mu), truncation rate
    alpha > 0, location vector mu, positive-definite shape matrix V.

    Genesis: x | z ~ N_p(mu, V / z^2) with the inverse scale z drawn from
    g(z) proportional to exp(-z^2/2) / z^(p-1) on [sqrt(alpha), inf).
    """

    alpha: float
    mu: np.ndarray
    V: np.ndarray

    def __post_init__(self) -> None:
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        V = np.asarray(self.V, dtype=float)
        if mu.ndim != 1 or mu.size not in (2, 3):
            raise ValueError(f"mu must have length 2 or 3, got shape {mu.shape}")
        if V.shape != (mu.size, mu.size):
            raise ValueError(f"V must be {mu.size}x{mu.size}, got {V.shape}")
        if not np.allclose(V, V.T, rtol=1e-12, atol=1e-12):
            raise ValueError("V must be symmetric")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "V", V)
        try:
            object.__setattr__(self, "_chol", cho_factor(V, lower=True))
        except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy raises its own
            raise ValueError("V must be positive definite") from exc

    @property
    def p(self) -> int:
        return self.mu.size

    @cached_property
    def log_det_v(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self._chol[0]))))

    @cached_property
    def c_z(self) -> float:
        """Normalizer of the mixing density g."""
        a = self.alpha
        if self.p == 2:
            return 2.0 / specfun.exp_integral_e1(a / 2.0)
        return 1.0 / (
            math.exp(-a / 2.0) / math.sqrt(a)
            - math.sqrt(2.0 * math.pi) * specfun.std_normal_cdf(-math.sqrt(a))
        )


def _quadratic_form(params: MultiNcParams, x: np.ndarray) -> float:
    d = np.asarray(x, dtype=float) - params.mu
    if d.shape != (params.p,):
        raise ValueError(f"x must have length {params.p}, got shape {d.shape}")
    return float(d @ cho_solve(params._chol, d))


def mv_log_pdf(params: MultiNcParams, x) -> float:
    """Log-density: (2 pi)^(-p/2) |V|^(-1/2) c_z exp(-alpha (1+A)/2) / (1+A)
    with A the Mahalanobis form of x."""
    A = _quadratic_form(params, x)
    return (
        math.log(params.c_z)
        - 0.5 * params.p * LOG_2PI
        - 0.5 * params.log_det_v
        - 0.5 * params.alpha * (1.0 + A)
        - math.log1p(A)
    )


def mv_covariance(params: MultiNcParams) -> np.ndarray:
    """Covariance V times the mixture scalar c_z int z^-(p+1) exp(-z^2/2) dz.

    The scalar is evaluated by quadrature of the defining mixture integral
    (it is validated against Monte Carlo sampling in the test suite)."""
    a, p = params.alpha, params.p
    scalar = (
        params.c_z
        * numerics.integrate_semi_infinite(
            lambda z: math.exp(-0.5 * z * z) / z ** (p + 1), math.sqrt(a), 1e-12
        ).value
    )
    return scalar * params.V


def _sample_mixing(params: MultiNcParams, rng: RandomSource, n: int) -> np.ndarray:
    """Draw inverse scales from g by thinning truncated-normal proposals with
    probability (sqrt(alpha)/z)^(p-1)."""
    a = math.sqrt(params.alpha)
    pm1 = params.p - 1
    out = np.empty(n)
    filled = 0
    acc_rate = 0.5
    while filled < n:
        m = max(int((n - filled) / acc_rate) + 8, 16)
        z = np.asarray(nc1.sample_truncated_normal(a, rng, size=m))
        u = rng.random(m)
        accepted = z[u <= (a / z) ** pm1]
        k = min(accepted.size, n - filled)
        out[filled : filled + k] = accepted[:k]
        filled += k
        acc_rate = max(accepted.size / m, 0.02)
    return out


def mv_sample(params: MultiNcParams, rng: RandomSource, size: int | None = None):
    """Exact draws through the mixture: z from g, then N_p(mu, V / z^2)."""
    n = 1 if size is None else int(size)
    z = _sample_mixing(params, rng, n)
    normals = rng.standard_normal((n, params.p))
    L = np.tril(params._chol[0])
    out = params.mu + (normals @ L.T) / z[:, None]
    return out[0] if size is None else out


# ---------------------------------------------------------------------------
# Bessel-form density (tail exponent 1/2)
# ---------------------------------------------------------------------------


def blurred_t_half_log_pdf(alpha: float, y):
    """Log-density of f(y) = {exp(-alpha/4)/K0(alpha/4)} exp(-alpha y^2/2) /
    sqrt(1 + y^2); the same law as the general family at tail exponent 1/2,
    but through the Bessel closed form."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    y = np.asarray(y, dtype=float)
    log_const = -0.25 * alpha - math.log(specfun.bessel_k(0, 0.25 * alpha))
    out = log_const - 0.5 * alpha * y * y - 0.5 * np.log1p(y * y)
    return float(out) if out.ndim == 0 else out
