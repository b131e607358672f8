"""Integer-supported probability mass functions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

TAIL_TOL = 1e-15
MASS_TOL = 1e-9


@dataclass(frozen=True)
class DiscretePMF:
    """Mass on the contiguous integer range ``[lo, lo + len(mass) - 1]``.

    ``truncated_mass`` is the probability that was cut from infinite tails
    when the pmf was built; the stored masses sum to ``1 - truncated_mass``.
    """

    lo: int
    mass: np.ndarray
    truncated_mass: float = 0.0
    label: str = ""

    def __post_init__(self):
        m = np.array(self.mass, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise ValueError("mass must be a non-empty 1-d sequence")
        if np.any(~np.isfinite(m)) or np.any(m < 0):
            raise ValueError("mass must be finite and nonnegative")
        if self.truncated_mass < 0:
            raise ValueError("truncated_mass must be nonnegative")
        total = m.sum() + self.truncated_mass
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {total:.15g}, expected 1")
        m.flags.writeable = False
        object.__setattr__(self, "mass", m)
        object.__setattr__(self, "lo", int(self.lo))

    @classmethod
    def from_dict(cls, masses: Mapping[int, float], truncated_mass: float = 0.0,
                  label: str = "") -> "DiscretePMF":
        keys = [int(k) for k in masses]
        lo, hi = min(keys), max(keys)
        m = np.zeros(hi - lo + 1)
        for k, v in masses.items():
            m[int(k) - lo] += v
        return cls(lo, m, truncated_mass, label)

    @classmethod
    def from_support(cls, support: Sequence[int], mass: Sequence[float],
                     label: str = "") -> "DiscretePMF":
        if len(support) != len(mass):
            raise ValueError("support and mass have different lengths")
        return cls.from_dict(dict(zip(support, mass)), label=label)

    @classmethod
    def symmetric(cls, nonneg_mass: Sequence[float], truncated_mass: float = 0.0,
                  label: str = "") -> "DiscretePMF":
        """Build from masses at 0, 1, 2, ... mirrored onto the negatives."""
        right = np.asarray(nonneg_mass, dtype=float)
        full = np.concatenate([right[:0:-1], right])
        return cls(-(right.size - 1), full, truncated_mass, label)

    @property
    def hi(self) -> int:
        return self.lo + self.mass.size - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def pmf(self, x):
        x = np.asarray(x)
        idx = x - self.lo
        inside = (idx >= 0) & (idx < self.mass.size) & (np.floor(x) == x)
        out = np.where(inside, self.mass[np.clip(idx, 0, self.mass.size - 1).astype(int)], 0.0)
        return float(out) if out.ndim == 0 else out

    def _cumulative(self) -> np.ndarray:
        # renormalized so the cdf reaches exactly 1 at hi
        return np.cumsum(self.mass) / self.total

    def cdf(self, x):
        """Right-continuous cdf P(N <= x) for real ``x``."""
        x = np.asarray(x, dtype=float)
        cum = self._cumulative()
        k = np.floor(x) - self.lo
        out = np.where(k < 0, 0.0,
                       np.where(k >= self.mass.size - 1, 1.0,
                                cum[np.clip(k, 0, self.mass.size - 1).astype(int)]))
        return float(out) if out.ndim == 0 else out

    def cdf_left(self, x):
        """Left limit P(N < x)."""
        x = np.asarray(x, dtype=float)
        return self.cdf(np.ceil(x) - 1)

    def shift(self, k: int) -> "DiscretePMF":
        return DiscretePMF(self.lo + int(k), self.mass, self.truncated_mass, self.label)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        return self.lo == -self.hi and bool(
            np.all(np.abs(self.mass - self.mass[::-1]) <= tol))

    def as_dict(self) -> dict[int, float]:
        return {int(x): float(m) for x, m in zip(self.support, self.mass)}


def trimmed(lo: int, mass: np.ndarray, truncated_mass: float = 0.0,
            label: str = "", tol: float = 0.0) -> DiscretePMF:
    """Drop outer entries with mass <= ``tol``, keeping the dropped mass on record."""
    mass = np.asarray(mass, dtype=float)
    nz = np.flatnonzero(mass > tol)
    if nz.size == 0:
        raise ValueError("all masses are below the trimming tolerance")
    a, b = nz[0], nz[-1]
    dropped = float(mass[:a].sum() + mass[b + 1:].sum())
    return DiscretePMF(lo + int(a), mass[a:b + 1], truncated_mass + dropped, label)
