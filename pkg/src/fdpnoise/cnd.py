"""Continuous canonical noise distributions built from a tradeoff function.

The cdf is linear on [-1/2, 1/2], running from ``c_f`` to ``1 - c_f``, and
is extended outward by ``F(x) = f(F(x + 1))`` for ``x < -1/2`` and by
symmetry for ``x > 1/2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from ._numerics import philox_uniforms
from .report import AuditReport
from .tradeoff import TradeoffFunction, fixed_point

MAX_STEPS = 100_000
QUANTILE_ITERS = 80


@dataclass(frozen=True)
class ContinuousCND:
    f: TradeoffFunction
    c_f: float
    cdf_fn: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def cdf(self, x):
        return cdf(self, x)

    def quantile(self, u):
        return quantile(self, u)


def _left_cdf(f: TradeoffFunction, c: float, x: np.ndarray) -> np.ndarray:
    """F(x) for x <= 0 by iterating f from the central linear piece."""
    steps = np.maximum(np.ceil(-x - 0.5), 0.0)
    capped = steps > MAX_STEPS
    if np.any(capped):
        warnings.warn("cdf recurrence hit the iteration cap; clamping to 0",
                      RuntimeWarning, stacklevel=3)
    y = x + np.minimum(steps, MAX_STEPS)
    vals = 0.5 + (1 - 2 * c) * y
    n = int(steps[~capped].max()) if np.any(~capped) else 0
    for k in range(n):
        live = (steps > k) & (vals > 0)
        if not np.any(live):
            break
        vals[live] = f.evaluator(vals[live])
    vals[capped] = 0.0
    return vals


def construct(f: TradeoffFunction) -> ContinuousCND:
    """Canonical noise distribution for a symmetric nontrivial ``f``."""
    if not f.symmetric:
        raise ValueError("construct requires a symmetric tradeoff function")
    c = fixed_point(f)
    if not f.nontrivial or c >= 0.5 - 1e-12:
        raise ValueError("construct requires a nontrivial tradeoff function")

    def F(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        neg = x <= 0
        out[neg] = _left_cdf(f, c, x[neg])
        out[~neg] = 1.0 - _left_cdf(f, c, -x[~neg])
        out[x == 0] = 0.5
        return out

    return ContinuousCND(f, c, F, f"CND[{f.label}]")


def cdf(cnd: ContinuousCND, x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = cnd.cdf_fn(xa)
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def quantile(cnd: ContinuousCND, u):
    """Generalized inverse ``inf{x : F(x) >= u}`` for ``u`` in (0, 1)."""
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(~(ua > 0)) or np.any(~(ua < 1)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    lo = np.full_like(ua, -1.0)
    hi = np.full_like(ua, 1.0)
    # widen until F(lo) < u <= F(hi)
    for _ in range(64):
        need = cnd.cdf_fn(lo) >= ua
        if not np.any(need):
            break
        lo[need] *= 2
    for _ in range(64):
        need = cnd.cdf_fn(hi) < ua
        if not np.any(need):
            break
        hi[need] *= 2
    for _ in range(QUANTILE_ITERS):
        mid = 0.5 * (lo + hi)
        right = cnd.cdf_fn(mid) >= ua
        hi = np.where(right, mid, hi)
        lo = np.where(right, lo, mid)
    return float(hi[0]) if np.ndim(u) == 0 else hi.reshape(np.shape(u))


def sample(cnd: ContinuousCND, seed: int, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return np.empty(0)
    return quantile(cnd, philox_uniforms(seed, n))


def concentration(cnd: ContinuousCND, t: int) -> float:
    """``P(|N| <= t/2)`` from iterates of f at ``c_f`` (odd t) or 1/2 (even t)."""
    if int(t) != t or t < 0:
        raise ValueError(f"t must be a nonnegative integer, got {t!r}")
    k, odd = divmod(int(t), 2)
    v = cnd.c_f if odd else 0.5
    for _ in range(k):
        v = cnd.f(v)
    return 1 - 2 * v


def abs_moment(cnd: ContinuousCND, n: int, upper: Optional[float] = None) -> float:
    """``E|N|^n`` as the integral of ``n x^{n-1} P(|N| > x)`` over [0, upper]."""
    if upper is None:
        eps = math.log((1 - cnd.c_f) / cnd.c_f)
        upper = 1 + 14 * math.log(10) / eps + n * math.log(max(n, 2)) / eps
    edges = np.arange(0.0, upper + 0.5, 0.5)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(
            lambda x: n * x ** (n - 1) * 2 * cnd.cdf_fn(np.array([-x]))[0], a, b,
            epsabs=1e-12, epsrel=1e-12, limit=200)
        total += val
    return total


def tail_and_moment_check(cnd: ContinuousCND, t_max: float = 15.0, n_max: int = 6,
                          n_grid: int = 1000, rel_tol: float = 1e-12) -> AuditReport:
    """Check the sub-exponential tail and absolute-moment bounds of a CND."""
    rep = AuditReport(f"tail/moment bounds for {cnd.label}")
    c = cnd.c_f
    if c <= 0:
        rep.applicable = False
        rep.notes.append("c_f = 0: eps_f is infinite, bounds not applicable")
        return rep
    eps = math.log((1 - c) / c)
    rep.assumptions.append(f"eps_f = log((1-c_f)/c_f) = {eps:.12g}")
    rep.notes.append(f"equality cases pass within relative tolerance {rel_tol:g}")
    t = np.linspace(0.0, t_max, n_grid)
    tail = 2 * cnd.cdf_fn(-t)
    b_floor = np.exp(-eps * np.floor(t))
    b_shift = np.exp(-eps * (t - 1))
    for ti, p, b1, b2 in zip(t, tail, b_floor, b_shift):
        rep.add("tail_floor", {"t": ti}, b1, p, tol=rel_tol * b1)
        rep.add("tail_shift", {"t": ti}, b2, p, tol=rel_tol * b2)
    for n in range(1, n_max + 1):
        m = abs_moment(cnd, n)
        bound = eps ** (-n) * math.exp(eps) * math.factorial(n)
        rep.add("moment", {"n": n}, bound, m, tol=1e-10)
    return rep


# ---------------------------------------------------------------- Tulap oracle

def _dlap_cdf_below(j, p):
    """P(G <= j - 1) for the discrete Laplace G with ratio ``p``."""
    m = j - 1
    return np.where(m < 0, p ** np.abs(m) / (1 + p), 1 - p ** (m + 1) / (1 + p))


def tulap_reference_cdf(eps: float, x):
    """Cdf of Tulap(0, e^-eps, 0): discrete Laplace plus Uniform(-1/2, 1/2)."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    p = math.exp(-eps)
    xa = np.asarray(x, dtype=float)
    z = -np.abs(xa)
    j = np.floor(z + 0.5)
    frac = z - j + 0.5
    pj = (1 - p) / (1 + p) * p ** np.abs(j)
    left = _dlap_cdf_below(j, p) + pj * frac
    out = np.where(xa <= 0, left, 1 - left)
    return float(out) if out.ndim == 0 else out


def tulap_variance(eps: float) -> float:
    p = math.exp(-eps)
    return 2 * p / (1 - p) ** 2 + 1 / 12
