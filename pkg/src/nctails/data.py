"""Dataset ingestion and sample statistics, including the price-to-logged-
returns transform and randomized tranche kurtosis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .rng import RandomSource

__all__ = [
    "Dataset",
    "MomentSummary",
    "TrancheKurtosis",
    "load_csv",
    "logged_returns",
    "sample_moments",
    "tranche_kurtosis",
]


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ordered sample of finite reals plus provenance and transform tags."""

    values: np.ndarray
    source: str = ""
    transform: str = "none"

    def __post_init__(self) -> None:
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a nonempty one-dimensional sequence")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise ValueError(f"non-finite value at position {bad}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float


class TrancheKurtosis(NamedTuple):
    mean_kappa: float
    sd_kappa: float


def _tokenize(line: str) -> list[str]:
    if "," in line:
        return [tok.strip() for tok in line.split(",")]
    return line.split()


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def load_csv(path: str, column: int | str = 0) -> Dataset:
    """Read one numeric column from a plain or delimited text file.

    Comma or whitespace delimited; a single header row is auto-detected when
    the first non-blank line has any non-numeric token. ``column`` may be a
    zero-based index or, when a header exists, a column name.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.readlines()

    lines = [(i + 1, ln.strip()) for i, ln in enumerate(raw)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: no data lines")

    first_no, first = lines[0]
    header = _tokenize(first)
    has_header = not all(_is_number(tok) for tok in header)

    if isinstance(column, str):
        if not has_header:
            raise ValueError(f"{path}: column {column!r} requested but no header row found")
        try:
            idx = header.index(column)
        except ValueError:
            raise ValueError(f"{path}: no column named {column!r} in header {header}") from None
    else:
        idx = int(column)

    body = lines[1:] if has_header else lines
    values = []
    for no, ln in body:
        toks = _tokenize(ln)
        if idx >= len(toks):
            raise ValueError(f"{path}: line {no} has only {len(toks)} column(s), need index {idx}")
        tok = toks[idx]
        if not _is_number(tok):
            raise ValueError(f"{path}: non-numeric value {tok!r} on line {no}")
        values.append(float(tok))
    if not values:
        raise ValueError(f"{path}: no numeric rows")
    return Dataset(np.asarray(values), source=path)


def logged_returns(prices: Dataset) -> Dataset:
    """Successive log ratios ln(S_i / S_(i-1)) of a positive price series."""
    vals = prices.values
    if vals.size < 2:
        raise ValueError("logged returns need at least two prices")
    if np.any(vals <= 0.0):
        bad = int(np.flatnonzero(vals <= 0.0)[0])
        raise ValueError(f"nonpositive price {vals[bad]} at position {bad}")
    returns = np.diff(np.log(vals))
    return Dataset(returns, source=prices.source, transform="logged_returns")


def _central_moments(vals: np.ndarray) -> tuple[float, float, float, float]:
    mean = float(np.mean(vals))
    d = vals - mean
    m2 = float(np.mean(d**2))
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    return mean, m2, m3, m4


def _excess_kurtosis(vals: np.ndarray) -> float:
    _, m2, _, m4 = _central_moments(vals)
    return m4 / (m2 * m2) - 3.0 if m2 > 0.0 else math.nan


def sample_moments(data: Dataset | np.ndarray) -> MomentSummary:
    """Population central-moment estimators; skewness and kurtosis are NaN for
    degenerate (zero-variance) samples."""
    vals = data.values if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    if vals.size < 4:
        raise ValueError(f"kurtosis needs at least 4 observations, got {vals.size}")
    mean, m2, m3, m4 = _central_moments(vals)
    if m2 == 0.0:
        return MomentSummary(mean, 0.0, math.nan, math.nan)
    return MomentSummary(mean, m2, m3 / m2**1.5, m4 / (m2 * m2) - 3.0)


def tranche_kurtosis(
    data: Dataset | np.ndarray,
    k: int = 10,
    rng: RandomSource | None = None,
) -> TrancheKurtosis:
    """Randomly permute the sample, split it into ``k`` equal tranches
    (remainder discarded), and return the mean excess kurtosis across tranches
    with the standard error of that mean."""
    if rng is None:
        raise ValueError("tranche_kurtosis requires a seeded random source")
    vals = data.values if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if vals.size < 10 * k:
        raise ValueError(f"need at least {10 * k} observations for {k} tranches, got {vals.size}")
    perm = rng.permutation(vals)
    size = vals.size // k
    tranches = perm[: k * size].reshape(k, size)
    kappas = np.array([_excess_kurtosis(t) for t in tranches])
    mean = float(np.mean(kappas))
    sd = float(np.std(kappas, ddof=1) / math.sqrt(k)) if k > 1 else math.nan
    return TrancheKurtosis(mean, sd)
