"""Anti-concentration bounds and audits of arbitrary additive noise."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cnd import ContinuousCND
from .noise import NoiseSpec, RivalNoise, as_noise
from .report import AuditReport
from .tradeoff import TradeoffFunction, fixed_point, tv_discrete

AUDIT_TOL = 1e-9
DEFAULT_A_POINTS = 2001
CENTRAL_MASS = 1 - 1e-6


@dataclass(frozen=True)
class CenterMass:
    """``sup_a P(a - t/2 < N <= a + t/2)`` and a maximizing ``a``."""

    value: float
    a: float


def _default_a_grid(noise: RivalNoise) -> np.ndarray:
    tail = (1 - CENTRAL_MASS) / 2
    r = max(abs(noise.quantile(tail)), abs(noise.quantile(1 - tail)), 1e-6)
    return np.linspace(-r, r, DEFAULT_A_POINTS)


def _window(noise: RivalNoise, a: np.ndarray, t: float) -> np.ndarray:
    """P(a - t/2 < N <= a + t/2); right-continuous cdfs give the open left end."""
    return noise.cdf(a + t / 2) - noise.cdf(a - t / 2)


def center_mass_sup(noise, t: float, a_grid: Optional[Sequence[float]] = None) -> CenterMass:
    """Largest probability of a half-open window of length ``t``.

    Without ``a_grid`` the supremum is exact for pmfs, cdf grids and
    samples (it is attained where a window end hits a support point or
    grid knot); continuous cdfs use a symmetric grid over the central
    quantile range.
    """
    noise = as_noise(noise)
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    if a_grid is not None:
        a = np.asarray(a_grid, dtype=float)
    elif noise.kind == "discrete-pmf":
        # (a - t/2, a + t/2] holds at most m consecutive integers
        pmf = noise.pmf
        m = int(math.ceil(t)) if t != int(t) else int(t)
        csum = np.r_[0.0, np.cumsum(pmf.mass)]
        m = min(m, pmf.mass.size)
        sums = csum[m:] - csum[:-m]
        i = int(np.argmax(sums))
        # window covering lo+i .. lo+i+m-1, centred
        return CenterMass(float(sums[i]), pmf.lo + i + (m - 1) / 2)
    elif noise.kind == "empirical-samples":
        a = np.unique(noise.samples) - t / 2
    elif noise.kind == "cdf-grid":
        x = noise.grid[0]
        a = np.unique(np.r_[x - t / 2, x + t / 2])
    else:
        a = _default_a_grid(noise)
    vals = _window(noise, a, t)
    i = int(np.argmax(vals))
    return CenterMass(float(vals[i]), float(a[i]))


def anti_bound(f: TradeoffFunction, t: int) -> float:
    """Upper bound on the mass of any length-``t`` window for f-DP noise."""
    if int(t) != t or t < 1:
        raise ValueError(f"t must be a positive integer, got {t!r}")
    if not f.symmetric:
        raise ValueError("anti_bound requires a symmetric tradeoff function")
    k, odd = divmod(int(t), 2)
    v = fixed_point(f) if odd else 0.5
    for _ in range(k):
        v = f(v)
    return 1 - 2 * v


def integer_bound(f: TradeoffFunction, t: int) -> float:
    """Bound on ``sup_{a in Z} P(|N - a| <= t)`` for integer noise at sensitivity 1."""
    return anti_bound(f, 2 * int(t) + 1)


def audit_noise(noise, f: TradeoffFunction, t_max: int = 10,
                a_grid: Optional[Sequence[float]] = None) -> AuditReport:
    """Compare window masses of ``noise`` with the anti-concentration bound.

    A violation certifies that the noise cannot satisfy f-DP at
    sensitivity 1.
    """
    spec = noise if isinstance(noise, NoiseSpec) else NoiseSpec(as_noise(noise))
    rn = spec.noise
    rep = AuditReport(f"anti-concentration of {rn.label or rn.kind} against {f.label}")
    rep.assumptions.append("additive noise at sensitivity 1")
    rep.notes.append("any violation proves the noise does not satisfy f-DP at sensitivity 1")
    if spec.sensitivity != 1:
        rep.applicable = False
        rep.notes.append(f"declared sensitivity {spec.sensitivity} != 1: bound not applicable")
        return rep
    slack = 2 * rn.band
    if slack:
        rep.notes.append(f"empirical noise: DKW band {slack:.3g} at level 1e-3 added to tolerance")
    if rn.is_discrete:
        rep.assumptions.append("integer noise: windows |N - a| <= t over integer a")
        pmf = rn.pmf
        if pmf.truncated_mass:
            rep.notes.append(f"truncated mass {pmf.truncated_mass:.3g}")
        for t in range(0, t_max + 1):
            cm = center_mass_sup(rn, 2 * t + 1)
            rep.add("P(|N-a|<=t)", {"t": t, "a": cm.a}, integer_bound(f, t), cm.value,
                    tol=AUDIT_TOL)
        return rep
    for t in range(1, t_max + 1):
        cm = center_mass_sup(rn, t, a_grid)
        rep.add("P(-t/2<N-a<=t/2)", {"t": t, "a": cm.a}, anti_bound(f, t), cm.value,
                tol=AUDIT_TOL, slack=slack)
    return rep


def ratio_check(cnd: ContinuousCND, rival, t_grid: Sequence[float],
                a_grid: Optional[Sequence[float]] = None) -> AuditReport:
    """Check ``sup_a P(-t < N'-a <= t) <= P(|N| <= t + 1/2)`` over ``t_grid``."""
    rn = as_noise(rival)
    rep = AuditReport(f"concentration ratio of {rn.label or rn.kind} to {cnd.label}")
    rep.assumptions.append(f"rival satisfies T(N', N'+1) >= {cnd.f.label} (not verified here)")
    band = 2 * rn.band
    for t in np.asarray(t_grid, dtype=float):
        den = float(cnd.cdf(t + 0.5) - cnd.cdf(-t - 0.5))
        if den <= 0:
            rep.notes.append(f"t={t:g}: zero denominator, skipped")
            continue
        num = center_mass_sup(rn, 2 * t, a_grid).value if t > 0 else 0.0
        rep.add("ratio", {"t": float(t)}, 1.0, num / den, tol=AUDIT_TOL, slack=band / den)
    return rep


def tv_shift(noise, t: float, per_unit: int = 2000, central_mass: float = CENTRAL_MASS) -> float:
    """TV distance between ``N`` and ``N + t``.

    Pmfs are exact. For cdfs the line is cut into bins of width ``t/m``
    anchored at ``t/2``, so the shifted bins line up and the set
    ``(-inf, t/2]`` is representable; the result never exceeds the true
    distance.
    """
    rn = as_noise(noise)
    if not t > 0:
        raise ValueError("t must be positive")
    if rn.is_discrete:
        if t != int(t):
            return 1.0
        return tv_discrete(rn.pmf, rn.pmf.shift(int(t)))
    tail = (1 - central_mass) / 2
    r = max(abs(rn.quantile(tail)), abs(rn.quantile(1 - tail))) + t
    m = max(1, int(math.ceil(per_unit * t)))
    h = t / m
    k = int(math.ceil(r / h)) + m
    x = t / 2 + h * np.arange(-k, k + 1)
    p = np.diff(np.r_[0.0, rn.cdf(x), 1.0])
    q = np.diff(np.r_[0.0, rn.cdf(x - t), 1.0])
    return float(0.5 * np.sum(np.abs(p - q)))
