"""Scalar special functions behind the normalization constants and moments.

Where scipy.special already provides a well-tested routine (normal CDF via
erfc, its log with the asymptotic lower-tail expansion, E1, K0/K1) we use it.
The upper incomplete gamma is extended to nonpositive shape parameters, which
scipy does not cover.
"""

from __future__ import annotations

import math

from scipy import special as _sp

__all__ = [
    "std_normal_cdf",
    "log_std_normal_cdf",
    "exp_integral_e1",
    "bessel_k",
    "upper_incomplete_gamma",
]

_SQRT2 = math.sqrt(2.0)


def std_normal_cdf(x: float) -> float:
    """Standard normal distribution function Phi(x), via erfc."""
    return 0.5 * math.erfc(-x / _SQRT2)


def log_std_normal_cdf(x: float) -> float:
    """log Phi(x), stable deep into the lower tail (x = -300 stays finite)."""
    return float(_sp.log_ndtr(x))


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = int_x^inf exp(-t)/t dt for x > 0."""
    if x <= 0:
        raise ValueError(f"exp_integral_e1 requires x > 0, got {x}")
    return float(_sp.exp1(x))


def bessel_k(order: int, x: float) -> float:
    """Modified Bessel function of the second kind, order 0 or 1."""
    if x <= 0:
        raise ValueError(f"bessel_k requires x > 0, got {x}")
    if order == 0:
        return float(_sp.k0(x))
    if order == 1:
        return float(_sp.k1(x))
    raise ValueError(f"bessel_k supports orders 0 and 1, got {order}")


def upper_incomplete_gamma(a: float, x: float) -> float:
    """Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) exp(-t) dt.

    Valid for any real ``a`` when x > 0 (the integral converges regardless of
    sign), and for a > 0 when x = 0, where it equals the complete gamma.
    """
    if x < 0:
        raise ValueError(f"upper_incomplete_gamma requires x >= 0, got {x}")
    if x == 0.0:
        if a <= 0:
            raise ValueError("Gamma(a, 0) diverges for a <= 0")
        return float(_sp.gamma(a))
    if a > 0:
        return float(_sp.gammaincc(a, x) * _sp.gamma(a))
    if a == 0:
        return exp_integral_e1(x)
    if x >= 1.5:
        return _upper_gamma_continued_fraction(a, x)
    # Small x: step down from a positive shape, Gamma(a,x) = (Gamma(a+1,x) - x^a e^-x)/a.
    shift = int(math.floor(-a)) + 1
    g = upper_incomplete_gamma(a + shift, x)
    emx = math.exp(-x)
    for k in range(shift):
        ak = a + shift - 1 - k
        g = (g - x**ak * emx) / ak
    return g


def _upper_gamma_continued_fraction(a: float, x: float) -> float:
    # Modified Lentz evaluation of the standard continued fraction; converges
    # quickly for x away from 0, any real a.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x)) * h
