"""Normal-Cauchy family of fat-tailed distributions with thin extreme tails.

Densities, CDFs, quantiles, moments, random-variate generation and
maximum-likelihood fitting for the NC(1)/NC(n) laws, the general 4-parameter
family, and their asymmetric, survival and multivariate companions.
"""

from . import cli, data, fit, nc1, ncn, nt, numerics, specfun, variants
from .data import Dataset, MomentSummary, load_csv, logged_returns, sample_moments, tranche_kurtosis
from .errors import DegenerateDataError, DivergentMomentError, NonNormalizableError
from .fit import FitResult, StudentTParams, best_match_beta, hellinger_distance, kurtosis_to_beta
from .nc1 import Nc1Params
from .ncn import NcnParams
from .nt import NtParams
from .numerics import QuadratureError, QuadResult
from .rng import DEFAULT_SEED, RandomSource, random_source
from .variants import MultiNcParams, SurvTailParams, TwoPieceParams

__version__ = "0.1.0"

__all__ = [
    "cli",
    "data",
    "fit",
    "nc1",
    "ncn",
    "nt",
    "numerics",
    "specfun",
    "variants",
    "Dataset",
    "MomentSummary",
    "FitResult",
    "StudentTParams",
    "Nc1Params",
    "NcnParams",
    "NtParams",
    "MultiNcParams",
    "SurvTailParams",
    "TwoPieceParams",
    "QuadResult",
    "QuadratureError",
    "RandomSource",
    "DEFAULT_SEED",
    "random_source",
    "load_csv",
    "logged_returns",
    "sample_moments",
    "tranche_kurtosis",
    "best_match_beta",
    "hellinger_distance",
    "kurtosis_to_beta",
    "DivergentMomentError",
    "NonNormalizableError",
    "DegenerateDataError",
]
