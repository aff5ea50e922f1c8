"""Shared CDF/quantile machinery for the symmetric univariate families.

Every family here is symmetric about its location, so only upper-tail
integrals of the standardized density are ever computed: the center route
loses no precision near the median and the tail route keeps small tail
probabilities fully accurate.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from . import numerics


def upper_tail(
    std_pdf: Callable[[float], float],
    x: float,
    breakpoints: Sequence[float],
    rel_tol: float,
) -> float:
    """P(X > x) for the standardized symmetric density, x >= 0.

    ``breakpoints`` are known scale-change points of the density (anchors);
    the integration is split there.
    """
    pts = sorted(p for p in breakpoints if p > x and math.isfinite(p))
    total = 0.0
    lo = x
    for p in pts:
        total += numerics.integrate(std_pdf, lo, p, rel_tol).value
        lo = p
    total += numerics.integrate_semi_infinite(std_pdf, lo, rel_tol).value
    return total


def symmetric_cdf(
    std_pdf: Callable[[float], float],
    x: float,
    breakpoints: Sequence[float],
    rel_tol: float,
) -> float:
    if x == 0.0:
        return 0.5
    t = upper_tail(std_pdf, abs(x), breakpoints, rel_tol)
    return t if x < 0 else 1.0 - t


def symmetric_quantile(
    cdf: Callable[[float], float],
    mu: float,
    s: float,
    p: float,
) -> float:
    """Invert a symmetric CDF by bracketed root finding.

    The initial bracket uses the Cauchy quantile shape (the heaviest body in
    the package) and is expanded geometrically until it straddles p.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile requires p in (0, 1), got {p}")
    if p == 0.5:
        return mu
    if p < 0.5:
        return 2.0 * mu - symmetric_quantile(cdf, mu, s, 1.0 - p)
    hi = max(math.tan(math.pi * (p - 0.5)), 1.0)
    for _ in range(200):
        if cdf(mu + s * hi) >= p:
            break
        hi *= 2.0
    else:
        raise RuntimeError(f"failed to bracket quantile p={p}")
    return numerics.find_root(
        lambda y: cdf(y) - p,
        mu,
        mu + s * hi,
        tol=1e-12 * s * max(1.0, hi),
    )
