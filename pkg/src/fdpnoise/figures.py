"""Datasets behind the comparison figures, written as diff-stable CSV."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import numpy as np

from .cnd import construct, tulap_reference_cdf
from .discrete import named_distribution, round_cnd, unique_sens1
from .tradeoff import cauchy_tradeoff, make_eps_delta, make_gdp, roc_discrete

FIGURES = ("fig2", "fig3", "fig4", "fig5")
EPS_GRID = np.linspace(6 / 200, 6, 200)
ALPHA_GRID = np.linspace(0, 1, 501)


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def write_csv(path: Path | str, header: Sequence[str], columns: Sequence) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([fmt(v) for v in row])
    return path


def central_probs(eps, s: float) -> tuple[np.ndarray, np.ndarray]:
    """``P(|N| <= s)`` for Tulap(eps) and for Laplace with scale 1/eps."""
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    tulap = np.array([2 * tulap_reference_cdf(e, s) - 1 for e in eps])
    laplace = -np.expm1(-eps * s)
    return tulap, laplace


def fig2(eps=EPS_GRID):
    t_half, l_half = central_probs(eps, 0.5)
    t_quarter, l_quarter = central_probs(eps, 0.25)
    header = ["eps", "tulap_half", "laplace_half", "tulap_quarter", "laplace_quarter"]
    return header, [np.asarray(eps), t_half, l_half, t_quarter, l_quarter]


def fig3(alpha=ALPHA_GRID):
    g1 = make_gdp(1.0)
    dg = named_distribution("discrete-gaussian", sigma=1.0)
    dcnd = unique_sens1(g1).pmf
    header = ["alpha", "G_1", "discrete_gaussian", "discrete_cnd"]
    return header, [np.asarray(alpha), g1(alpha), roc_discrete(dg, dg.shift(1))(alpha),
                    roc_discrete(dcnd, dcnd.shift(1))(alpha)]


def fig4(alpha=ALPHA_GRID):
    ct = cauchy_tradeoff(1.0)
    header = ["alpha", "C_1", "f_eps_upper", "f_eps_lower"]
    return header, [np.asarray(alpha), ct.curve(alpha),
                    make_eps_delta(ct.eps_upper, 0.0)(alpha),
                    make_eps_delta(ct.eps_lower, 0.0)(alpha)]


def fig5():
    pmf = round_cnd(construct(make_eps_delta(1.0, 0.05)), 6).pmf
    x = pmf.support
    return ["x", "pmf", "cdf"], [x, pmf.mass, pmf.cdf(x)]


def write_figure(name: str, out_dir: Path | str) -> Path:
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}")
    header, cols = globals()[name]()
    return write_csv(Path(out_dir) / f"{name}.csv", header, cols)
