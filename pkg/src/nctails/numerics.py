"""Adaptive quadrature on finite, semi-infinite and whole-line domains, plus
bracketed root finding.

Integration is QUADPACK's adaptive Gauss-Kronrod scheme (interval bisection
with nested rules); infinite domains are mapped onto a finite interval by a
rational substitution. Root finding is Brent's bracketing method (bisection
with inverse-interpolation acceleration).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy.optimize import brentq

__all__ = [
    "QuadResult",
    "QuadratureError",
    "integrate",
    "integrate_semi_infinite",
    "integrate_real_line",
    "find_root",
    "DEFAULT_REL_TOL",
]

DEFAULT_REL_TOL = 1e-10
_ABS_FLOOR = 1e-300
_SUBDIVISION_LIMIT = 200


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            self.evaluations + other.evaluations,
        )


class QuadratureError(RuntimeError):
    """Adaptive rule did not meet tolerance within budget; ``best`` holds the
    last estimate."""

    def __init__(self, message: str, best: QuadResult):
        super().__init__(message)
        self.best = best


def _quad(f: Callable[[float], float], a: float, b: float, rel_tol: float) -> QuadResult:
    out = _integrate.quad(
        f, a, b, epsabs=_ABS_FLOOR, epsrel=rel_tol,
        limit=_SUBDIVISION_LIMIT, full_output=True,
    )
    value, abserr, info = out[0], out[1], out[2]
    result = QuadResult(float(value), float(abserr), int(info["neval"]))
    if len(out) > 3 and abserr > max(rel_tol * abs(value), _ABS_FLOOR):
        raise QuadratureError(f"quadrature did not converge: {out[3]}", result)
    return result


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
) -> QuadResult:
    """Integrate ``f`` over the finite interval [a, b]."""
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("integrate requires finite endpoints")
    if not a < b:
        raise ValueError(f"integrate requires a < b, got [{a}, {b}]")
    return _quad(f, a, b, rel_tol)


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    rel_tol: float = DEFAULT_REL_TOL,
) -> QuadResult:
    """Integrate ``f`` over [a, inf)."""
    if not np.isfinite(a):
        raise ValueError("integrate_semi_infinite requires a finite lower endpoint")
    return _quad(f, a, np.inf, rel_tol)


def integrate_real_line(
    f: Callable[[float], float],
    rel_tol: float = DEFAULT_REL_TOL,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate ``f`` over the whole real line.

    ``breakpoints`` are optional interior points at which the integrand changes
    scale (e.g. modes or truncation points); the domain is split there.
    """
    pts = sorted(float(p) for p in breakpoints if np.isfinite(p))
    if not pts:
        return _quad(f, -np.inf, np.inf, rel_tol)
    total = _quad(f, -np.inf, pts[0], rel_tol)
    for lo, hi in zip(pts, pts[1:]):
        if hi > lo:
            total = total + _quad(f, lo, hi, rel_tol)
    return total + _quad(f, pts[-1], np.inf, rel_tol)


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
) -> float:
    """Root of ``f`` inside the bracket [lo, hi]; endpoints must straddle zero."""
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"root not bracketed on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    return float(brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))
