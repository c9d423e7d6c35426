"""Tabular curve data for density, hazard, skewness and kurtosis plots.

Each table has a leading abscissa column (x, a or b), one column per
parameter setting and a final ``reason`` column.  Cells that cannot be
computed (moment does not exist, hazard not representable, series not
converged) are left empty and the reason is recorded on that row.
"""

import csv
import io
import json

import numpy as np

from .distribution import BFParams, bf_hazard, bf_pdf
from .errors import BetaFrechetError
from .moments import bf_skewness, bf_skewness_kurtosis

__all__ = ["FIGURES", "figure_table", "format_table"]

PDF_SETTINGS = ((1.0, 1.0), (0.5, 2.0), (2.0, 0.5), (1.5, 2.5))
SHAPE_CURVES = (0.5, 1.0, 2.0, 5.0)
FIGURES = ("pdf", "hazard", "skewness", "kurtosis")


def _label(**kw):
    return " ".join(f"{k}={v:g}" for k, v in kw.items())


def _curve_table(which, settings, sigma, lam, x):
    fn = bf_pdf if which == "pdf" else bf_hazard
    header = ["x"] + [_label(a=a, b=b) for a, b in settings] + ["reason"]
    cols, reasons = [], [set() for _ in x]
    for a, b in settings:
        th = BFParams(a, b, sigma, lam)
        col = []
        for idx, xi in enumerate(x):
            try:
                col.append(float(fn(th, xi)))
            except BetaFrechetError as exc:
                col.append(None)
                reasons[idx].add(f"{_label(a=a, b=b)}: {exc}")
        cols.append(col)
    rows = [[float(xi)] + [c[i] for c in cols] + ["; ".join(sorted(reasons[i]))]
            for i, xi in enumerate(x)]
    return header, rows


def _shape_table(which, along, curves, grid, sigma, lam):
    other = "b" if along == "a" else "a"
    header = [along] + [_label(**{other: c}) for c in curves] + ["reason"]
    rows = []
    for g in grid:
        row, reasons = [float(g)], []
        for c in curves:
            th = BFParams(**{along: float(g), other: c, "sigma": sigma, "lam": lam})
            try:
                val = bf_skewness(th) if which == "skewness" else bf_skewness_kurtosis(th).kurtosis
                row.append(float(val))
            except BetaFrechetError as exc:
                row.append(None)
                reasons.append(f"{_label(**{other: c})}: {exc}")
        rows.append(row + ["; ".join(reasons)])
    return header, rows


def figure_table(which, points=50, settings=None, x_range=(0.05, 5.0), sigma=None,
                 lam=None, along="a", curves=SHAPE_CURVES, grid_range=(0.5, 10.0)):
    """Build the table for one figure.

    Parameters
    ----------
    which : {"pdf", "hazard", "skewness", "kurtosis"}
    points : int
        Number of abscissa values (evenly spaced).
    settings : sequence of (a, b), optional
        Curves for the pdf and hazard tables; the Frechet case (1, 1) is
        included by default.
    sigma, lam : float, optional
        Defaults: ``sigma = 1``; ``lam = 2`` for pdf and hazard,
        ``lam = 5`` for skewness and kurtosis.
    along : {"a", "b"}
        Shape parameter on the abscissa for skewness and kurtosis; the
        other shape takes the values in ``curves``.

    Returns
    -------
    (header, rows)
    """
    if which not in FIGURES:
        raise ValueError(f"unknown figure {which!r}; expected one of {', '.join(FIGURES)}")
    sigma = 1.0 if sigma is None else sigma
    if which in ("pdf", "hazard"):
        lam = 2.0 if lam is None else lam
        x = np.linspace(x_range[0], x_range[1], points)
        return _curve_table(which, settings or PDF_SETTINGS, sigma, lam, x)
    if along not in ("a", "b"):
        raise ValueError("along must be 'a' or 'b'")
    lam = 5.0 if lam is None else lam
    grid = np.linspace(grid_range[0], grid_range[1], points)
    return _shape_table(which, along, curves, grid, sigma, lam)


def format_table(header, rows, fmt="csv"):
    """Render as CSV (empty cells for missing values) or JSON."""
    if fmt == "json":
        return json.dumps({"columns": header, "rows": rows}) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in r])
    return buf.getvalue()
