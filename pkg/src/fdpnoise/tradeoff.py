"""Tradeoff functions: construction, composition, fixed points and exact ROC curves.

Curves use the flipped convention: ``f(alpha)`` is the smallest type II error
achievable at specificity ``alpha`` (one minus the type I error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import optimize

from ._numerics import as_unit_interval, bisect_decreasing, norm_cdf, norm_ppf
from .pmf import MASS_TOL, DiscretePMF

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TradeoffFunction:
    """A tradeoff curve ``f: [0, 1] -> [0, 1]``.

    The evaluator receives a float array already clamped to [0, 1].
    ``closed_form_cf`` short-circuits the fixed-point search when known.
    """

    evaluator: Evaluator
    symmetric: bool = True
    nontrivial: bool = True
    closed_form_cf: Optional[float] = None
    label: str = ""

    def __call__(self, alpha):
        a = as_unit_interval(alpha)
        out = np.clip(np.asarray(self.evaluator(a), dtype=float), 0.0, 1.0)
        return float(out) if np.ndim(alpha) == 0 else out

    def __repr__(self):
        return f"TradeoffFunction({self.label or '<anonymous>'})"


@dataclass(frozen=True)
class TradeoffFamily:
    """A one-parameter family ``{f_t : t >= 0}`` closed under composition."""

    member: Callable[[float], TradeoffFunction]
    label: str = ""

    def __call__(self, t: float) -> TradeoffFunction:
        return self.member(t)

    def scaled(self, s: float) -> "TradeoffFamily":
        """The reparametrized family ``t -> f_{s t}``."""
        return TradeoffFamily(lambda t: self.member(s * t), f"{self.label}*{s:g}")


def identity() -> TradeoffFunction:
    return TradeoffFunction(lambda a: a, True, False, 0.5, "identity")


def make_eps_delta(eps: float, delta: float) -> TradeoffFunction:
    """The (eps, delta)-DP curve ``max{0, 1-delta-e^eps+e^eps a, e^-eps (a-delta)}``."""
    if not eps >= 0 or not math.isfinite(eps):
        raise ValueError(f"eps must be a finite nonnegative number, got {eps!r}")
    if not 0 <= delta <= 1:
        raise ValueError(f"delta must lie in [0, 1], got {delta!r}")
    e = math.exp(eps)
    ei = math.exp(-eps)

    def f(a):
        return np.maximum(0.0, np.maximum(1 - delta - e + e * a, ei * (a - delta)))

    return TradeoffFunction(f, True, (eps, delta) != (0, 0),
                            (1 - delta) / (1 + e), f"f_{{{eps:g},{delta:g}}}")


def make_gdp(mu: float) -> TradeoffFunction:
    """Gaussian-DP curve ``G_mu(a) = Phi(Phi^{-1}(a) - mu)``."""
    if not mu >= 0 or not math.isfinite(mu):
        raise ValueError(f"mu must be a finite nonnegative number, got {mu!r}")
    return TradeoffFunction(lambda a: norm_cdf(norm_ppf(a) - mu), True, mu > 0,
                            float(norm_cdf(-mu / 2)), f"G_{mu:g}")


# Symmetric log-concave base distributions: (cdf, quantile).

def _laplace_cdf(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return np.where(x < 0, 0.5 * np.exp(x), 1 - 0.5 * np.exp(-x))


def _laplace_ppf(u):
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(u < 0.5, np.log(2 * u), -np.log(2 * (1 - u)))


def _logistic_cdf(x):
    from scipy.special import expit
    return expit(x)


def _logistic_ppf(u):
    from scipy.special import logit
    return logit(u)


def _uniform_cdf(x):
    return np.clip((np.asarray(x, dtype=float) + 1) / 2, 0.0, 1.0)


def _uniform_ppf(u):
    return 2 * np.asarray(u, dtype=float) - 1


BASES = {
    "gaussian": (norm_cdf, norm_ppf),
    "laplace": (_laplace_cdf, _laplace_ppf),
    "logistic": (_logistic_cdf, _logistic_ppf),
    "uniform": (_uniform_cdf, _uniform_ppf),
}


def _check_base(cdf, tol=1e-9):
    x = np.linspace(-20, 20, 4001)
    F = np.asarray(cdf(x), dtype=float)
    if np.any(np.diff(F) < -tol):
        raise ValueError("base cdf is not non-decreasing on the validation grid")
    if np.max(np.abs(np.asarray(cdf(-x)) - (1 - F))) > tol:
        raise ValueError("base cdf is not symmetric about zero")
    if F[0] > 1e-6 or F[-1] < 1 - 1e-6:
        raise ValueError("base cdf does not reach its limits on [-20, 20]")


def make_logconcave_family(base_cdf, base_quantile=None, label: str = "") -> TradeoffFamily:
    """Family ``f_t(a) = F(F^{-1}(a) - t)`` of shifts of a symmetric base.

    ``base_cdf`` may also be one of the built-in names in ``BASES``.
    """
    if isinstance(base_cdf, str):
        if base_cdf not in BASES:
            raise ValueError(f"unknown base {base_cdf!r}; expected one of {', '.join(BASES)}")
        label = label or base_cdf
        base_cdf, base_quantile = BASES[base_cdf]
    if base_quantile is None:
        raise ValueError("a quantile function is required for a custom base")
    _check_base(base_cdf)

    def member(t: float) -> TradeoffFunction:
        if not t >= 0:
            raise ValueError(f"family parameter must be nonnegative, got {t!r}")
        return TradeoffFunction(lambda a: base_cdf(base_quantile(a) - t), True,
                                t > 0, None, f"{label}[t={t:g}]")

    return TradeoffFamily(member, label)


def gdp_family(mu: float = 1.0) -> TradeoffFamily:
    return TradeoffFamily(lambda t: make_gdp(mu * t), f"gdp(mu={mu:g})")


def iterate(f: TradeoffFunction, k: int) -> TradeoffFunction:
    """k-fold self-composition ``f o ... o f``."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if k == 1:
        return f

    def g(a):
        for _ in range(k):
            a = f.evaluator(a)
        return a

    return TradeoffFunction(g, f.symmetric, f.nontrivial, None, f"({f.label})^{k}")


def fixed_point(f: TradeoffFunction, use_closed_form: bool = True) -> float:
    """The unique ``c`` in [0, 1/2] with ``f(1 - c) = c``."""
    if use_closed_form and f.closed_form_cf is not None:
        return float(f.closed_form_cf)
    return bisect_decreasing(lambda c: f(1.0 - c) - c, 0.0, 0.5)


def c_iterated(f: TradeoffFunction, t: int) -> float:
    """Fixed point of ``f^t`` from the parity formula."""
    if int(t) != t or t < 1:
        raise ValueError(f"t must be a positive integer, got {t!r}")
    k, odd = divmod(int(t), 2)
    v = fixed_point(f) if odd else 0.5
    for _ in range(k):
        v = f(v)
    return float(v)


@dataclass(frozen=True)
class Summary:
    c: float
    tv: float
    eps: float
    lower: TradeoffFunction
    upper: TradeoffFunction


def scalar_summaries(f: TradeoffFunction) -> Summary:
    c = fixed_point(f)
    tv = 1 - 2 * c
    lower = make_eps_delta(0.0, min(max(tv, 0.0), 1.0))
    if c <= 0:
        eps = math.inf
        upper = TradeoffFunction(lambda a: np.zeros_like(a), True, True, 0.0, "zero")
    else:
        eps = math.log((1 - c) / c)
        upper = make_eps_delta(max(eps, 0.0), 0.0)
    return Summary(c, tv, eps, lower, upper)


def check_tradeoff(f: TradeoffFunction, n: int = 1000, tol: float = 1e-9) -> list[str]:
    """Grid check of the defining properties; returns the failed ones."""
    a = np.linspace(0, 1, n)
    v = f(a)
    problems = []
    if abs(v[0]) > tol:
        problems.append(f"f(0) = {v[0]:.3g}")
    if np.any(v > a + tol):
        problems.append("f(a) > a somewhere")
    if np.any(np.diff(v) < -tol):
        problems.append("not non-decreasing")
    if np.any(v[1:-1] > 0.5 * (v[:-2] + v[2:]) + tol):
        problems.append("not convex")
    return problems


# ---------------------------------------------------------------- ROC curves

@dataclass(frozen=True)
class ROCCurve:
    """Piecewise-linear tradeoff curve through ``vertices`` (alpha, beta)."""

    vertices: np.ndarray
    label: str = ""

    @property
    def alpha(self) -> np.ndarray:
        return self.vertices[:, 0]

    @property
    def beta(self) -> np.ndarray:
        return self.vertices[:, 1]

    def __call__(self, alpha):
        a = as_unit_interval(alpha)
        out = np.interp(a, self.alpha, self.beta)
        return float(out) if np.ndim(alpha) == 0 else out

    def to_tradeoff(self, symmetric: bool = False) -> TradeoffFunction:
        nontrivial = bool(np.any(self.beta < self.alpha - 1e-15))
        return TradeoffFunction(lambda a: np.interp(a, self.alpha, self.beta),
                                symmetric, nontrivial, None, self.label)


def _aligned(p: DiscretePMF, q: DiscretePMF):
    lo, hi = min(p.lo, q.lo), max(p.hi, q.hi)
    pa = np.zeros(hi - lo + 1)
    qa = np.zeros(hi - lo + 1)
    pa[p.lo - lo:p.hi - lo + 1] = p.mass
    qa[q.lo - lo:q.hi - lo + 1] = q.mass
    for name, arr, d in (("p", pa, p), ("q", qa, q)):
        if abs(arr.sum() + d.truncated_mass - 1) > MASS_TOL:
            raise ValueError(f"{name} has total mass {arr.sum():.15g}")
    return pa / pa.sum(), qa / qa.sum()


def roc_discrete(p: DiscretePMF, q: DiscretePMF) -> ROCCurve:
    """Exact Neyman-Pearson curve ``T(p, q)`` for finitely supported pmfs."""
    pa, qa = _aligned(p, q)
    keep = (pa > 0) | (qa > 0)
    pa, qa = pa[keep], qa[keep]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pa > 0, qa / pa, np.inf)
    order = np.argsort(-ratio, kind="stable")
    ratio, pa, qa = ratio[order], pa[order], qa[order]

    # merge runs of tied likelihood ratios into a single segment
    starts = np.flatnonzero(np.r_[True, ratio[1:] != ratio[:-1]])
    gp = np.add.reduceat(pa, starts)
    gq = np.add.reduceat(qa, starts)

    alpha = 1 - np.cumsum(gp)
    beta = 1 - np.cumsum(gq)
    pts = [(1.0, 1.0)] if gp[0] > 0 else []
    pts += list(zip(alpha, beta))
    v = np.clip(np.array(pts[::-1]), 0.0, 1.0)
    v[0] = (0.0, 0.0)
    return ROCCurve(v, f"T({p.label or 'p'},{q.label or 'q'})")


class Dominance(NamedTuple):
    holds: bool
    alpha: float
    curve_value: float
    f_value: float
    margin: float


def dominates(curve: ROCCurve, f: TradeoffFunction, tol: float = 1e-9) -> Dominance:
    """Whether ``curve >= f`` everywhere, checked at the curve's vertices.

    Vertex checks suffice: the curve is linear between vertices and ``f`` is
    convex, so the gap is concave on each segment.
    """
    fa = f(curve.alpha)
    margin = curve.beta - fa
    i = int(np.argmin(margin))
    return Dominance(bool(margin[i] >= -tol), float(curve.alpha[i]),
                     float(curve.beta[i]), float(fa[i]), float(margin[i]))


def tv_discrete(p: DiscretePMF, q: DiscretePMF) -> float:
    pa, qa = _aligned(p, q)
    return float(0.5 * np.abs(pa - qa).sum())


# ---------------------------------------------------------------- Cauchy-DP

@dataclass(frozen=True)
class CauchyTradeoff:
    curve: TradeoffFunction
    eps_lower: float
    eps_upper: float
    c: float
    c_tv: float


def _cauchy_interval(a, b):
    """P(a < X <= b) for a standard Cauchy X."""
    return (np.arctan(b) - np.arctan(a)) / math.pi


def _cauchy_point(m: float, logk: float):
    """(alpha, beta) of the test rejecting where the likelihood ratio exceeds e^logk."""
    k = math.exp(logk)
    a = 1 - k
    if a == 0:
        return 1 - _cauchy_interval(m / 2, math.inf), 1 - _cauchy_interval(-m / 2, math.inf)
    b = 2 * k * m
    c0 = 1 - k - k * m * m
    disc = max(b * b - 4 * a * c0, 0.0)
    qq = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1, r2 = qq / a, (c0 / qq if qq != 0 else 0.0)
    lo, hi = min(r1, r2), max(r1, r2)
    p0 = _cauchy_interval(lo, hi)
    p1 = _cauchy_interval(lo - m, hi - m)
    if a < 0:  # reject inside the roots
        return 1 - p0, 1 - p1
    return p0, p1  # reject outside the roots


def _cauchy_curve(m: float) -> Evaluator:
    top = 2 * math.log((m + math.sqrt(m * m + 4)) / 2)

    def one(alpha: float) -> float:
        if alpha <= 0:
            return 0.0
        if alpha >= 1:
            return 1.0
        u = optimize.brentq(lambda s: _cauchy_point(m, s)[0] - alpha, -top, top,
                            xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=400)
        return _cauchy_point(m, u)[1]

    return np.vectorize(one, otypes=[float])


def cauchy_tradeoff(m: float) -> CauchyTradeoff:
    """``C_m = T(Cauchy(0,1), Cauchy(m,1))`` with its pure-DP sandwich."""
    if not m > 0 or not math.isfinite(m):
        raise ValueError(f"m must be a positive finite number, got {m!r}")
    r = math.sqrt(m * m + 4)
    eps_lower = math.log((4 + (m + r) ** 2) / (4 + (m - r) ** 2))
    curve = TradeoffFunction(_cauchy_curve(m), True, True, None, f"C_{m:g}")
    c = fixed_point(curve)
    c_tv = (1 - (2 / math.pi) * math.atan(m / 2)) / 2
    return CauchyTradeoff(curve, eps_lower, math.log((1 - c) / c), c, c_tv)
