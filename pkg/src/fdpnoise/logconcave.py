"""Log-concave CNDs of infinitely divisible families and their dominance audits."""

from __future__ import annotations

import itertools
from typing import Callable, Optional, Sequence

import numpy as np

from .cnd import ContinuousCND
from .noise import RivalNoise, as_noise
from .report import AuditReport
from .tradeoff import TradeoffFamily, identity

DIVISIBILITY_GRID = (0.25, 0.5, 1.0, 2.0)
DIVISIBILITY_TOL = 1e-8
AUDIT_TOL = 1e-9
PHI_RANGE_CAP = 1e6


def divisibility_error(family: TradeoffFamily, n_alpha: int = 101) -> float:
    """Largest grid deviation from ``f_0 = Id`` and ``f_s o f_t = f_{s+t}``."""
    a = np.linspace(0, 1, n_alpha)
    err = float(np.max(np.abs(family(0.0)(a) - identity()(a))))
    for s, t in itertools.product(DIVISIBILITY_GRID, repeat=2):
        lhs = family(s)(family(t)(a))
        rhs = family(s + t)(a)
        err = max(err, float(np.max(np.abs(lhs - rhs))))
    return err


def _half_values(family: TradeoffFamily, t: np.ndarray) -> np.ndarray:
    """``f_t(1/2)`` for each entry of ``t``."""
    out = np.empty_like(t)
    for i, ti in enumerate(t):
        out[i] = family(float(ti))(0.5)
    return out


def construct_logconcave_cnd(family: TradeoffFamily) -> ContinuousCND:
    """The log-concave CND for ``f_1``, from ``F(-t) = f_t(1/2)``."""
    err = divisibility_error(family)
    if err > DIVISIBILITY_TOL:
        raise ValueError(f"family fails the divisibility check (error {err:.3g})")

    def F(x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, 0.5)
        neg, pos = x < 0, x > 0
        out[neg] = _half_values(family, -x[neg])
        out[pos] = 1 - _half_values(family, x[pos])
        return out

    return ContinuousCND(family(1.0), family_fixed_point(family, 1.0), F,
                         f"logconcave-CND[{family.label}]")


def family_fixed_point(family: TradeoffFamily, t: float) -> float:
    """``c_{f_t}``, read off as ``f_{t/2}(1/2)``."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    return family(t / 2)(0.5)


def _default_a_grid(rival: RivalNoise) -> np.ndarray:
    iqr = rival.quantile(0.75) - rival.quantile(0.25)
    if iqr <= 0:
        iqr = 1.0
    return np.array([-2, -1, -0.5, 0, 0.5, 1, 2]) * iqr


def _stieltjes(phi, t: np.ndarray, G: np.ndarray) -> float:
    """``E phi(X)`` for X >= 0 with cdf values ``G`` on grid ``t``."""
    mids = np.r_[t[0], 0.5 * (t[1:] + t[:-1])]
    dG = np.diff(np.r_[0.0, G])
    return float(np.sum(np.asarray(phi(mids), dtype=float) * dG))


def dominance_audit(cnd: ContinuousCND, rival, a_grid: Optional[Sequence[float]] = None,
                    t_grid: Optional[Sequence[float]] = None,
                    phi: Optional[Callable] = None) -> AuditReport:
    """Check that ``|rival - a|`` is stochastically larger than ``|N|``.

    Only cdf consequences on the supplied grids are verified; this is a
    necessary condition, not a certificate for all real ``a`` and ``t``.
    """
    rival = as_noise(rival)
    rep = AuditReport(f"dominance of |{rival.label or 'rival'} - a| over |{cnd.label}|")
    rep.assumptions.append(
        "rival satisfies T(N', N'+t) >= f_t for every t >= 0 (not verified here)")
    rep.assumptions.append("grid checks are necessary conditions only")
    a_grid = _default_a_grid(rival) if a_grid is None else np.asarray(a_grid, dtype=float)
    if t_grid is None:
        t_grid = np.linspace(0.0, cnd.quantile(1 - 1e-6), 201)
    t_grid = np.asarray(t_grid, dtype=float)
    slack = 2 * rival.band
    if slack:
        rep.notes.append(f"empirical rival: DKW band {slack:.3g} at level 1e-3 added to tolerance")

    p_cnd = cnd.cdf_fn(t_grid) - cnd.cdf_fn(-t_grid)
    for a in a_grid:
        p_rival = rival.prob_closed(a - t_grid, a + t_grid)
        for t, pc, pr in zip(t_grid, p_cnd, p_rival):
            rep.add("P(|.|<=t)", {"a": float(a), "t": float(t)}, pc, pr,
                    tol=AUDIT_TOL, slack=slack)

    if phi is not None:
        a_max = float(np.max(np.abs(a_grid)))
        base = cnd.quantile(1 - 1e-12) + a_max
        far = max(abs(rival.quantile(1e-12)), abs(rival.quantile(1 - 1e-12))) + a_max
        hi = min(max(far, base), PHI_RANGE_CAP)
        # uniform where the CND lives, geometric out into heavy rival tails
        tt = np.linspace(0.0, base, 4001)
        if hi > base:
            tt = np.unique(np.r_[tt, np.geomspace(base, hi, 2001)])
        G = cnd.cdf_fn(tt) - cnd.cdf_fn(-tt)
        lhs = _stieltjes(phi, tt, G)
        if 1 - G[-1] > 1e-9:
            rep.notes.append(f"cnd integration truncation mass {1 - G[-1]:.3g}")
        for a in a_grid:
            Gr = rival.prob_closed(a - tt, a + tt)
            if 1 - Gr[-1] > 1e-9:
                rep.notes.append(f"rival integration truncation mass {1 - Gr[-1]:.3g} at a={a:g}")
            rep.add("E phi(|.|)", {"a": float(a)}, _stieltjes(phi, tt, Gr), lhs,
                    tol=AUDIT_TOL, slack=slack)
    return rep
