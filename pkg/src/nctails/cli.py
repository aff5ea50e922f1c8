"""Command-line front end: fit, sample, eval, moments, hellinger, plotdata.

Output is JSON for fit reports and CSV/text tables elsewhere; every command
is deterministic given identical flags and seed. Exit codes: 0 success,
1 usage or data error, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import data as _data
from . import fit as _fit
from . import nc1 as _nc1
from . import ncn as _ncn
from . import nt as _nt
from .errors import DegenerateDataError
from .nc1 import Nc1Params
from .ncn import NcnParams
from .nt import NtParams
from .rng import DEFAULT_SEED, random_source
from .variants import SurvTailParams, TwoPieceParams, survival_log_pdf, two_piece_log_pdf

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; the contract here is 1.
    def error(self, message: str):
        raise _UsageError(message)


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True,
                   choices=["nc1", "ncn", "nt", "t", "twopiece", "surv"])
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--s", type=float, default=1.0, help="scale")
    p.add_argument("--beta", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n-degree", type=int, default=2, help="n for the ncn family")
    p.add_argument("--s1", type=float, help="left scale (twopiece)")
    p.add_argument("--s2", type=float, help="right scale (twopiece)")


def _build_params(args: argparse.Namespace):
    fam = args.family
    if fam == "nc1":
        if args.beta is None:
            raise _UsageError("--beta is required for family nc1")
        return Nc1Params(args.mu, args.s, beta=args.beta)
    if fam == "ncn":
        if args.beta is None:
            raise _UsageError("--beta is required for family ncn")
        return NcnParams(args.n_degree, args.mu, args.s, beta=args.beta)
    if fam == "nt":
        if args.alpha is None or args.gamma is None:
            raise _UsageError("--alpha and --gamma are required for family nt")
        return NtParams(args.mu, args.s, alpha=args.alpha, gamma=args.gamma)
    if fam == "t":
        if args.nu is None:
            raise _UsageError("--nu is required for family t")
        return _fit.StudentTParams(args.mu, args.s, nu=args.nu)
    if fam == "twopiece":
        if args.beta is None or args.s1 is None or args.s2 is None:
            raise _UsageError("--beta, --s1 and --s2 are required for family twopiece")
        return TwoPieceParams(args.mu, s1=args.s1, s2=args.s2, beta=args.beta)
    if fam == "surv":
        if args.beta is None or args.gamma is None:
            raise _UsageError("--beta and --gamma are required for family surv")
        return SurvTailParams(beta=args.beta, gamma=args.gamma, scale=args.s)
    raise _UsageError(f"unknown family {fam}")


def _load_dataset(args: argparse.Namespace) -> _data.Dataset:
    column: int | str = args.column
    if isinstance(column, str) and column.lstrip("-").isdigit():
        column = int(column)
    ds = _data.load_csv(args.data, column=column)
    if args.logged_returns:
        ds = _data.logged_returns(ds)
    return ds


def _emit_rows(rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(rows, indent=2))
        return
    if not rows:
        return
    cols = list(rows[0].keys())
    if fmt == "csv":
        print(",".join(cols))
        for r in rows:
            print(",".join(_fmt_cell(r[c]) for c in cols))
    else:
        widths = {c: max(len(c), 20) for c in cols}
        print("  ".join(c.ljust(widths[c]) for c in cols))
        for r in rows:
            print("  ".join(_fmt_cell(r[c]).ljust(widths[c]) for c in cols))


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _params_report(family: str, params) -> dict:
    rep = {"mu": None, "s": None, "beta": None, "nu": None,
           "alpha": None, "gamma": None, "n": None}
    rep["mu"] = getattr(params, "mu", None)
    rep["s"] = getattr(params, "s", None)
    for key in ("beta", "nu", "alpha", "gamma", "n"):
        if hasattr(params, key):
            val = getattr(params, key)
            rep[key] = float(val) if key != "n" else int(val)
    return rep


def cmd_fit(args: argparse.Namespace) -> int:
    ds = _load_dataset(args)
    family = args.family
    if family == "ncn":
        family = f"nc{args.n_degree}"
    result = _fit.fit(family, ds, seed=args.seed, n_restarts=args.restarts,
                      tol=args.tol)
    report = {
        "schema": SCHEMA_VERSION,
        "family": result.family,
        "params": _params_report(result.family, result.params),
        "neg_log_likelihood": result.neg_log_lik,
        "std_errors": None if result.std_errors is None
        else [float(v) for v in result.std_errors],
        "converged": result.converged,
        "n_obs": result.n_obs,
        "seed": result.seed,
        "restarts": result.n_restarts,
        "restarts_agreeing": result.restarts_agreeing,
        "data": {"source": ds.source, "transform": ds.transform},
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_sample(args: argparse.Namespace) -> int:
    params = _build_params(args)
    rng = random_source(args.seed)
    fam = args.family
    if fam == "nc1":
        draws = _nc1.sample(params, rng, size=args.count)
    elif fam == "ncn":
        draws = _ncn.sample(params, rng, size=args.count)
    elif fam == "nt":
        draws = _nt.sample(params, rng, size=args.count)
    elif fam == "t":
        draws = params.mu + params.s * np.asarray(
            _ncn.sample_student_t(params.nu, rng, size=args.count)
        )
    elif fam == "twopiece":
        from .variants import two_piece_sample

        draws = two_piece_sample(params, rng, size=args.count)
    else:
        raise _UsageError(f"sampling is not provided for family {fam}")
    for v in np.atleast_1d(draws):
        print(repr(float(v)))
    return EXIT_OK


def _family_log_pdf(fam: str, params):
    if fam == "nc1":
        return lambda x: _nc1.log_pdf(params, x)
    if fam == "ncn":
        return lambda x: _ncn.log_pdf(params, x)
    if fam == "nt":
        return lambda x: _nt.log_pdf(params, x)
    if fam == "t":
        return lambda x: _fit.t_log_pdf(params, x)
    if fam == "twopiece":
        return lambda x: two_piece_log_pdf(params, x)
    if fam == "surv":
        return lambda x: survival_log_pdf(params, x)
    raise _UsageError(f"no density for family {fam}")


def _family_cdf(fam: str, params):
    from scipy.stats import t as _t_dist

    from .variants import survival_cdf

    if fam == "nc1":
        return lambda x: _nc1.cdf(params, x)
    if fam == "ncn":
        return lambda x: _ncn.cdf(params, x)
    if fam == "nt":
        return lambda x: _nt.cdf(params, x)
    if fam == "t":
        return lambda x: float(_t_dist.cdf((x - params.mu) / params.s, params.nu))
    if fam == "surv":
        return lambda x: survival_cdf(params, x)
    raise _UsageError(f"no cdf for family {fam}")


def _family_quantile(fam: str, params):
    from scipy.stats import t as _t_dist

    if fam == "nc1":
        return lambda p: _nc1.quantile(params, p)
    if fam == "ncn":
        return lambda p: _ncn.quantile(params, p)
    if fam == "nt":
        return lambda p: _nt.quantile(params, p)
    if fam == "t":
        return lambda p: params.mu + params.s * float(_t_dist.ppf(p, params.nu))
    raise _UsageError(f"no quantile for family {fam}")


def cmd_eval(args: argparse.Namespace) -> int:
    params = _build_params(args)
    rows: list[dict] = []
    for x in args.pdf or []:
        val = float(np.exp(_family_log_pdf(args.family, params)(x)))
        rows.append({"quantity": "pdf", "at": x, "value": val})
    for x in args.cdf or []:
        rows.append({"quantity": "cdf", "at": x,
                     "value": float(_family_cdf(args.family, params)(x))})
    for p in args.quantile or []:
        rows.append({"quantity": "quantile", "at": p,
                     "value": float(_family_quantile(args.family, params)(p))})
    if not rows:
        raise _UsageError("eval needs at least one of --pdf/--cdf/--quantile")
    _emit_rows(rows, args.format)
    return EXIT_OK


def _parse_grid(spec: str) -> list[float]:
    return [float(tok) for tok in spec.split(",") if tok.strip()]


def cmd_moments(args: argparse.Namespace) -> int:
    fam = args.family
    if fam == "ncn":
        fam = f"nc{args.n_degree}"
    if args.beta is not None:
        betas = [args.beta]
    else:
        betas = _parse_grid(args.betas)
    rows = []
    for b in betas:
        if fam == "nc1":
            m = _nc1.central_moments(b)
        elif fam == "nc2":
            m = _ncn.nc2_moments(b)
        elif fam == "nc3":
            m = _nt.moments(NtParams(alpha=b / (1.0 - b), gamma=3.0))
        else:
            raise _UsageError(f"moments supports nc1/nc2/nc3, got {args.family}")
        rows.append({"family": fam, "beta": b, "m2": m.m2, "m4": m.m4,
                     "excess_kurtosis": m.excess_kurtosis})
    _emit_rows(rows, args.format)
    return EXIT_OK


def cmd_hellinger(args: argparse.Namespace) -> int:
    target = _fit.StudentTParams(0.0, 1.0, nu=args.target_nu)
    match = _fit.best_match_beta(target)
    kurt = _nc1.central_moments(match.beta).excess_kurtosis
    _emit_rows(
        [{"beta": match.beta, "scale": match.scale, "distance": match.distance,
          "excess_kurtosis": kurt}],
        args.format,
    )
    return EXIT_OK


def cmd_plotdata(args: argparse.Namespace) -> int:
    lo, hi, count = args.x_min, args.x_max, args.points
    xs = np.linspace(lo, hi, count)
    rows = []
    if args.figure == "pdf-grid":
        betas = _parse_grid(args.betas)
        for b in betas:
            params = Nc1Params(beta=b)
            dens = np.exp(_nc1.log_pdf(params, xs))
            rows.extend(
                {"series": f"beta={b:g}", "x": float(x), "pdf": float(d)}
                for x, d in zip(xs, dens)
            )
    elif args.figure == "t-match":
        target = _fit.StudentTParams(0.0, 1.0, nu=args.target_nu)
        match = _fit.best_match_beta(target)
        params = Nc1Params(0.0, match.scale, beta=match.beta)
        t_dens = np.exp(_fit.t_log_pdf(target, xs))
        nc_dens = np.exp(_nc1.log_pdf(params, xs))
        for x, td, nd in zip(xs, t_dens, nc_dens):
            rows.append({"series": f"t(nu={args.target_nu:g})", "x": float(x),
                         "pdf": float(td)})
            rows.append({"series": f"nc1(beta={match.beta:.4f})", "x": float(x),
                         "pdf": float(nd)})
    else:  # kurtosis curves
        betas = _parse_grid(args.betas)
        for b in betas:
            rows.append({"series": "nc1", "x": b,
                         "pdf": _nc1.central_moments(b).excess_kurtosis})
            rows.append({"series": "nc2", "x": b,
                         "pdf": _ncn.nc2_moments(b).excess_kurtosis})
            rows.append({"series": "nc3", "x": b,
                         "pdf": _nt.moments(NtParams(alpha=b / (1 - b), gamma=3.0)).excess_kurtosis})
    _emit_rows(rows, args.format)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="nctails",
                     description="Fat-tailed distributions with thin extreme tails")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_fit = sub.add_parser("fit", help="maximum-likelihood fit to a data file")
    p_fit.add_argument("--family", required=True,
                       choices=["nc1", "ncn", "nt", "t"])
    p_fit.add_argument("--n-degree", type=int, default=2)
    p_fit.add_argument("--data", required=True)
    p_fit.add_argument("--column", default="0")
    p_fit.add_argument("--logged-returns", action="store_true",
                       help="treat the column as prices and fit log returns")
    p_fit.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_fit.add_argument("--restarts", type=int, default=5)
    p_fit.add_argument("--tol", type=float, default=1e-6)
    p_fit.set_defaults(func=cmd_fit)

    p_sample = sub.add_parser("sample", help="draw random variates")
    _add_family_args(p_sample)
    p_sample.add_argument("-n", "--count", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sample.set_defaults(func=cmd_sample)

    p_eval = sub.add_parser("eval", help="evaluate pdf/cdf/quantile at points")
    _add_family_args(p_eval)
    p_eval.add_argument("--pdf", type=float, action="append")
    p_eval.add_argument("--cdf", type=float, action="append")
    p_eval.add_argument("--quantile", type=float, action="append")
    p_eval.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p_eval.set_defaults(func=cmd_eval)

    p_mom = sub.add_parser("moments", help="moment table over a beta grid")
    p_mom.add_argument("--family", required=True, choices=["nc1", "nc2", "nc3", "ncn"])
    p_mom.add_argument("--n-degree", type=int, default=2)
    p_mom.add_argument("--beta", type=float)
    p_mom.add_argument("--betas", default=",".join(f"{b:.2f}" for b in np.arange(0.05, 1.0, 0.05)))
    p_mom.add_argument("--format", choices=["json", "csv", "text"], default="csv")
    p_mom.set_defaults(func=cmd_moments)

    p_hel = sub.add_parser("hellinger", help="closest NC(1) to a target t density")
    p_hel.add_argument("--target-nu", type=float, required=True)
    p_hel.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p_hel.set_defaults(func=cmd_hellinger)

    p_plot = sub.add_parser("plotdata", help="CSV grids for density/kurtosis plots")
    p_plot.add_argument("--figure", choices=["pdf-grid", "t-match", "kurtosis"],
                        default="pdf-grid")
    p_plot.add_argument("--betas", default="0.1,0.3,0.5,0.7,0.9")
    p_plot.add_argument("--target-nu", type=float, default=5.0)
    p_plot.add_argument("--x-min", type=float, default=-6.0)
    p_plot.add_argument("--x-max", type=float, default=6.0)
    p_plot.add_argument("--points", type=int, default=241)
    p_plot.add_argument("--format", choices=["json", "csv", "text"], default="csv")
    p_plot.set_defaults(func=cmd_plotdata)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and friends
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, DegenerateDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
