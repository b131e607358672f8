"""Small numerical helpers shared across modules."""

from __future__ import annotations

import numpy as np
from scipy import special

ALPHA_SLACK = 1e-12


def norm_cdf(x):
    return special.ndtr(x)


def norm_ppf(u):
    return special.ndtri(u)


def as_unit_interval(alpha, name: str = "alpha"):
    """Clamp round-off outside [0, 1]; reject genuine misuse."""
    a = np.asarray(alpha, dtype=float)
    if np.any(np.isnan(a)):
        raise ValueError(f"{name} contains NaN")
    if np.any(a < -ALPHA_SLACK) or np.any(a > 1 + ALPHA_SLACK):
        raise ValueError(f"{name} must lie in [0, 1], got {alpha!r}")
    return np.clip(a, 0.0, 1.0)


def scalar_or_array(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


def bisect_decreasing(h, lo: float, hi: float, width: float = 1e-12,
                      max_iter: int = 200) -> float:
    """Root of a non-increasing function ``h`` bracketed by ``[lo, hi]``."""
    for _ in range(max_iter):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def philox_uniforms(seed: int, n: int) -> np.ndarray:
    """``n`` uniforms on the open interval (0, 1) from a counter-based generator."""
    gen = np.random.Generator(np.random.Philox(int(seed)))
    u = gen.random(n)
    # random() draws from [0, 1); zero has no finite quantile
    return np.where(u == 0.0, np.finfo(float).tiny, u)
