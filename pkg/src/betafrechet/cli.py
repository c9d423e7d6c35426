"""Command-line interface.

Exit codes: 0 success, 1 acceptance failure (``reproduce``) or numerical
failure, 2 usage or data error.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from . import distribution as dist
from . import inference as inf
from . import moments as mom
from .datasets import BUILTIN_NAMES, builtin_dataset, format_values, read_data
from .errors import BetaFrechetError, DomainError, UnknownDatasetError
from .figures import FIGURES, figure_table, format_table
from .reproduce import report_json, report_text, run_reproduction

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_MODELS = {"bf": "BF", "ef": "EF", "frechet": "Frechet"}


class _UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(z) for z in text.split(",") if z.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _theta(args):
    return dist.BFParams(args.a, args.b, args.sigma, args.lam)


def _load(args, required=True):
    if args.data and args.dataset:
        raise _UsageError("give either --data or --dataset, not both")
    if args.data:
        return read_data(args.data)
    if args.dataset:
        return list(builtin_dataset(args.dataset).values)
    if required:
        raise _UsageError("this command needs --data <file> or --dataset <name>")
    return None


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records(args, rows, columns):
    if args.format == "json":
        return json.dumps([dict(zip(columns, r)) for r in rows], indent=2) + "\n"
    return format_table(columns, rows, "csv")


def _mapping(args, obj):
    if args.format == "json":
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    rows = [[k, obj[k]] for k in obj]
    return format_table(["quantity", "value"], rows, "csv")


# ---------------------------------------------------------------- commands

def cmd_eval(args):
    th = _theta(args)
    pts = args.x if args.x is not None else _load(args, required=False)
    if not pts:
        raise _UsageError("eval needs --x or a data source")
    fn = {"pdf": dist.bf_pdf, "logpdf": dist.bf_logpdf, "cdf": dist.bf_cdf, "sf": dist.bf_sf,
          "hazard": dist.bf_hazard, "quantile": dist.bf_quantile}[args.what]
    vals = np.atleast_1d(fn(th, np.asarray(pts, dtype=float)))
    col = "p" if args.what == "quantile" else "x"
    rows = [[float(p), float(val)] for p, val in zip(pts, vals)]
    _emit(args, _records(args, rows, [col, args.what]))
    return EXIT_OK


def cmd_sample(args):
    draws = dist.bf_sample(_theta(args), args.n, args.seed)
    _emit(args, format_values(draws, args.format))
    return EXIT_OK


def cmd_moments(args):
    th = _theta(args)
    out = {}
    for r in args.r:
        try:
            out[f"E[X^{r:g}]"] = mom.raw_moment(th, r)
        except BetaFrechetError as exc:
            out[f"E[X^{r:g}]"] = None
            out[f"E[X^{r:g}] reason"] = str(exc)
    try:
        shape = mom.bf_skewness_kurtosis(th)
        out["skewness"], out["kurtosis"] = shape.skewness, shape.kurtosis
    except BetaFrechetError as exc:
        out["skewness"] = out["kurtosis"] = None
        out["shape reason"] = str(exc)
    _emit(args, _mapping(args, out))
    return EXIT_OK


def cmd_lmoments(args):
    lm = mom.l_moments(_theta(args), args.count)
    out = {f"l{i + 1}": v for i, v in enumerate(lm)}
    if len(lm) >= 3:
        out["tau3"] = lm[2] / lm[1]
    if len(lm) == 4:
        out["tau4"] = lm[3] / lm[1]
    _emit(args, _mapping(args, out))
    return EXIT_OK


def _fit_dict(f, gamma):
    out = {"model": f.model, "n": f.n, "loglik": f.loglik, "converged": f.converged,
           "iterations": f.iterations, "gradient_sup_norm": f.grad_norm,
           "at_bound": list(f.at_bound)}
    for name, val, se in zip(inf.PARAM_NAMES, f.theta.as_array(), f.std_errors):
        out[name] = float(val)
        out[f"se_{name}"] = None if math.isnan(se) else float(se)
    try:
        cis = inf.confidence_intervals(f, gamma)
        for name, (lo, hi) in zip(inf.PARAM_NAMES, cis):
            out[f"ci_{name}"] = [lo, hi]
    except BetaFrechetError as exc:
        out["ci_reason"] = str(exc)
    return out


def cmd_fit(args):
    x = _load(args)
    f = inf.fit(x, _MODELS[args.model], seed=args.seed)
    _emit(args, _mapping(args, _fit_dict(f, args.gamma)))
    return EXIT_OK


def cmd_lrtest(args):
    x = _load(args)
    null = _MODELS[args.null]
    if null == "BF":
        raise _UsageError("--null must be ef or frechet")
    t = inf.lr_test(x, null, seed=args.seed)
    out = {"null_model": t.null_model, "df": t.df, "w": t.statistic, "p_value": t.p_value,
           "log_p_value": t.log_p_value, "alt_loglik": t.alt_loglik,
           "null_loglik": t.null_loglik}
    _emit(args, _mapping(args, out))
    return EXIT_OK


def cmd_info(args):
    th = _theta(args)
    cmp = inf.compare_information(th, args.variant)
    names = list(inf.PARAM_NAMES)
    if args.format == "json":
        obj = {"parameters": names,
               "analytic": cmp["analytic"].matrix.tolist(),
               "numeric": cmp["numeric"].matrix.tolist(),
               "violations": [list(v) for v in cmp["violations"]],
               "authoritative": cmp["authoritative"].source}
        _emit(args, json.dumps(obj, indent=2) + "\n")
    else:
        rows = []
        for p in range(4):
            for q in range(p, 4):
                rows.append([names[p], names[q], float(cmp["analytic"].matrix[p, q]),
                             float(cmp["numeric"].matrix[p, q])])
        _emit(args, format_table(["p", "q", "analytic", "numeric"], rows, "csv"))
    for v in cmp["violations"]:
        print(f"warning: k_{v[0]},{v[1]} analytic {v[2]:.10g} vs numeric {v[3]:.10g}",
              file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args):
    report = run_reproduction(seed=args.seed)
    text = report_json(report) if args.format == "json" else report_text(report)
    _emit(args, text)
    if not report["all_pass"]:
        for item in report["failures"]:
            print(f"FAILED: {item}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_figure_data(args):
    header, rows = figure_table(args.which, points=args.points, along=args.along,
                                sigma=args.sigma_opt, lam=args.lam_opt)
    _emit(args, format_table(header, rows, args.format))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _common(p, theta=True, data=False, out=True):
    if theta:
        g = p.add_argument_group("parameters")
        g.add_argument("--a", type=float, default=1.0, help="beta shape a (default 1)")
        g.add_argument("--b", type=float, default=1.0, help="beta shape b (default 1)")
        g.add_argument("--sigma", type=float, default=1.0, help="Frechet scale (default 1)")
        g.add_argument("--lambda", dest="lam", type=float, default=1.0,
                       help="Frechet shape (default 1)")
    if data:
        p.add_argument("--data", help="file with one observation per line, CSV or JSON")
        p.add_argument("--dataset", choices=BUILTIN_NAMES, help="built-in dataset")
    if out:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write output here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="betafrechet", description="Beta Frechet distribution toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="pdf, cdf, sf, hazard or quantile at points")
    _common(p, data=True)
    p.add_argument("--what", choices=("pdf", "logpdf", "cdf", "sf", "hazard", "quantile"),
                   default="pdf")
    p.add_argument("--x", type=_floats, help="comma-separated points (probabilities for quantile)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="draw variates")
    _common(p)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("moments", help="raw moments, skewness and kurtosis")
    _common(p)
    p.add_argument("--r", type=_floats, default=[1.0, 2.0, 3.0, 4.0],
                   help="comma-separated orders (default 1,2,3,4)")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("lmoments", help="L-moments and L-moment ratios")
    _common(p)
    p.add_argument("--count", type=int, default=4, choices=(1, 2, 3, 4))
    p.set_defaults(func=cmd_lmoments)

    p = sub.add_parser("fit", help="maximum likelihood fit")
    _common(p, theta=False, data=True)
    p.add_argument("--model", choices=tuple(_MODELS), default="bf")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.05,
                   help="significance level of the Wald intervals (default 0.05)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("lrtest", help="likelihood ratio test against BF")
    _common(p, theta=False, data=True)
    p.add_argument("--null", choices=("ef", "frechet"), default="frechet")
    p.add_argument("--model", choices=tuple(_MODELS), default="bf",
                   help="alternative model (only bf)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lrtest)

    p = sub.add_parser("info", help="expected information, closed form against numeric")
    _common(p)
    p.add_argument("--variant", choices=("corrected", "uncorrected"), default="corrected")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("reproduce", help="fit both built-in datasets and grade the results")
    _common(p, theta=False)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce, format="json")

    p = sub.add_parser("figure-data", help="curve tables for plotting")
    _common(p, theta=False)
    p.add_argument("--which", choices=FIGURES, required=True)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--along", choices=("a", "b"), default="a")
    p.add_argument("--sigma", dest="sigma_opt", type=float, default=None)
    p.add_argument("--lambda", dest="lam_opt", type=float, default=None)
    p.set_defaults(func=cmd_figure_data)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "lrtest" and args.model != "bf":
        parser.error("lrtest compares against the BF alternative only")
    try:
        return args.func(args)
    except (_UsageError, DomainError, UnknownDatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BetaFrechetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
