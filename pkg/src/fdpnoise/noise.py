"""Noise descriptions used by the audits: a cdf, a cdf grid, a pmf, or samples."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ._numerics import norm_cdf
from .pmf import DiscretePMF

KINDS = ("continuous-cdf", "cdf-grid", "discrete-pmf", "empirical-samples")
DKW_LEVEL = 1e-3


class SpecError(ValueError):
    """Malformed JSON input; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RivalNoise:
    kind: str
    cdf_fn: Optional[Callable] = None
    pmf: Optional[DiscretePMF] = None
    samples: Optional[np.ndarray] = None
    label: str = ""
    # grid form keeps the raw arrays for default-grid construction
    grid: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    # -- constructors
    @classmethod
    def from_cdf(cls, cdf: Callable, label: str = "") -> "RivalNoise":
        return cls("continuous-cdf", cdf_fn=cdf, label=label)

    @classmethod
    def from_cdf_grid(cls, x, F, label: str = "") -> "RivalNoise":
        x = np.asarray(x, dtype=float)
        F = np.asarray(F, dtype=float)
        if x.shape != F.shape or x.ndim != 1 or x.size < 2:
            raise ValueError("x and F must be equal-length 1-d arrays")
        if np.any(np.diff(x) <= 0):
            raise ValueError("x grid must be strictly increasing")
        if np.any(np.diff(F) < -1e-12) or F.min() < -1e-12 or F.max() > 1 + 1e-12:
            raise ValueError("F must be a non-decreasing sequence in [0, 1]")
        return cls("cdf-grid", cdf_fn=lambda t: np.interp(t, x, F, left=0.0, right=1.0),
                   label=label, grid=(x, F))

    @classmethod
    def from_pmf(cls, pmf: DiscretePMF, label: str = "") -> "RivalNoise":
        return cls("discrete-pmf", pmf=pmf, label=label or pmf.label)

    @classmethod
    def from_samples(cls, samples, label: str = "") -> "RivalNoise":
        s = np.sort(np.asarray(samples, dtype=float).ravel())
        if s.size == 0 or not np.all(np.isfinite(s)):
            raise ValueError("samples must be a non-empty finite array")
        s.flags.writeable = False
        return cls("empirical-samples", samples=s, label=label)

    # -- evaluation
    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete-pmf"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "discrete-pmf":
            return np.asarray(self.pmf.cdf(x))
        if self.kind == "empirical-samples":
            return np.searchsorted(self.samples, x, side="right") / self.samples.size
        return np.asarray(self.cdf_fn(x), dtype=float)

    def cdf_left(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "discrete-pmf":
            return np.asarray(self.pmf.cdf_left(x))
        if self.kind == "empirical-samples":
            return np.searchsorted(self.samples, x, side="left") / self.samples.size
        return self.cdf(x)

    def prob_open_closed(self, lo, hi):
        """P(lo < N <= hi)."""
        return self.cdf(hi) - self.cdf(lo)

    def prob_closed(self, lo, hi):
        """P(lo <= N <= hi)."""
        return self.cdf(hi) - self.cdf_left(lo)

    @property
    def band(self) -> float:
        """DKW half-width for the empirical cdf; zero for exact noises."""
        if self.kind != "empirical-samples":
            return 0.0
        return math.sqrt(math.log(2 / DKW_LEVEL) / (2 * self.samples.size))

    def quantile(self, u: float) -> float:
        if self.kind == "discrete-pmf":
            cum = np.cumsum(self.pmf.mass) / self.pmf.total
            return float(self.pmf.lo + np.searchsorted(cum, u))
        if self.kind == "empirical-samples":
            return float(np.quantile(self.samples, u))
        lo, hi = -1.0, 1.0
        while self.cdf(lo) >= u and lo > -1e12:
            lo *= 2
        while self.cdf(hi) < u and hi < 1e12:
            hi *= 2
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) >= u:
                hi = mid
            else:
                lo = mid
        return hi


@dataclass(frozen=True)
class NoiseSpec:
    """A noise together with the sensitivity it is declared for."""

    noise: RivalNoise
    sensitivity: float = 1


def as_noise(noise) -> RivalNoise:
    """Accept a RivalNoise, a NoiseSpec or a bare DiscretePMF."""
    if isinstance(noise, NoiseSpec):
        return noise.noise
    if isinstance(noise, DiscretePMF):
        return RivalNoise.from_pmf(noise)
    if not isinstance(noise, RivalNoise):
        raise TypeError(f"expected RivalNoise, NoiseSpec or DiscretePMF, got {type(noise).__name__}")
    return noise


# ---------------------------------------------------------------- built-ins

def laplace_noise(scale: float, loc: float = 0.0) -> RivalNoise:
    def F(x):
        z = (np.asarray(x, dtype=float) - loc) / scale
        with np.errstate(over="ignore"):
            return np.where(z < 0, 0.5 * np.exp(z), 1 - 0.5 * np.exp(-z))
    return RivalNoise.from_cdf(F, f"Laplace({loc:g},{scale:g})")


def normal_noise(sigma: float, loc: float = 0.0) -> RivalNoise:
    return RivalNoise.from_cdf(lambda x: norm_cdf((np.asarray(x) - loc) / sigma),
                               f"N({loc:g},{sigma:g}^2)")


def cnd_noise(cnd) -> RivalNoise:
    return RivalNoise.from_cdf(cnd.cdf_fn, cnd.label)


# ---------------------------------------------------------------- JSON

def _require(d: dict, key: str, ctx: str = ""):
    if key not in d:
        raise SpecError(ctx + key, "missing")
    return d[key]


def _numbers(value, name: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise SpecError(name, "must be a list of numbers") from None
    if arr.ndim != 1:
        raise SpecError(name, "must be a flat list")
    return arr


def pmf_from_json(d: dict) -> DiscretePMF:
    """Discrete pmf JSON: ``{"lo": -5, "mass": [...]}``."""
    if not isinstance(d, dict):
        raise SpecError("pmf", "must be a JSON object")
    lo = _require(d, "lo")
    if not isinstance(lo, int) or isinstance(lo, bool):
        raise SpecError("lo", "must be an integer")
    mass = _numbers(_require(d, "mass"), "mass")
    try:
        return DiscretePMF(lo, mass, float(d.get("truncated_mass", 0.0)))
    except ValueError as exc:
        raise SpecError("mass", str(exc)) from None


def noise_from_json(d: dict, base_dir: Path | str = ".") -> NoiseSpec:
    if not isinstance(d, dict):
        raise SpecError("noise", "must be a JSON object")
    kind = _require(d, "kind")
    sens = d.get("delta", d.get("sensitivity", 1))
    try:
        if kind == "cdf-grid":
            noise = RivalNoise.from_cdf_grid(_numbers(_require(d, "x"), "x"),
                                             _numbers(_require(d, "F"), "F"))
        elif kind == "pmf":
            support = _numbers(_require(d, "support"), "support")
            mass = _numbers(_require(d, "mass"), "mass")
            if np.any(support != np.round(support)):
                raise SpecError("support", "must contain integers")
            noise = RivalNoise.from_pmf(DiscretePMF.from_support(
                support.astype(int).tolist(), mass.tolist()))
        elif kind == "samples":
            path = Path(base_dir) / str(_require(d, "path"))
            noise = RivalNoise.from_samples(read_samples_csv(path), path.name)
        else:
            raise SpecError("kind", f"unknown noise kind {kind!r}")
    except SpecError:
        raise
    except (ValueError, OSError) as exc:
        raise SpecError(kind if isinstance(kind, str) else "kind", str(exc)) from None
    return NoiseSpec(noise, sens)


def read_samples_csv(path: Path | str) -> np.ndarray:
    """First numeric column of a CSV file; a non-numeric header row is skipped."""
    values = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                if i == 0:
                    continue
                raise
    return np.array(values)
