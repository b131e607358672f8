"""Tradeoff-function specifications in JSON form.

Accepted shapes::

    {"kind": "eps_delta", "eps": 1.0, "delta": 0.0}
    {"kind": "gdp", "mu": 1.0}
    {"kind": "family", "base": "laplace", "t": 1.0}
    {"kind": "cauchy", "m": 1.0}
    {"kind": "iterate", "inner": {...}, "k": 3}
"""

from __future__ import annotations

import json
import math
from typing import Any

from .noise import SpecError
from .tradeoff import (BASES, TradeoffFamily, TradeoffFunction, cauchy_tradeoff,
                       gdp_family, iterate, make_eps_delta, make_gdp,
                       make_logconcave_family)

KINDS = ("eps_delta", "gdp", "family", "cauchy", "iterate")


def _load(spec: Any) -> dict:
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecError("spec", f"invalid JSON ({exc.msg})") from None
    if not isinstance(spec, dict):
        raise SpecError("spec", "must be a JSON object")
    return spec


def _number(d: dict, key: str, path: str, default=None) -> float:
    if key not in d:
        if default is not None:
            return default
        raise SpecError(path + key, "missing")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SpecError(path + key, "must be a finite number")
    return float(v)


def _kind(d: dict, path: str) -> str:
    kind = d.get("kind")
    if kind not in KINDS:
        raise SpecError(path + "kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    return kind


def tradeoff_from_json(spec: Any, _path: str = "") -> TradeoffFunction:
    """Build a tradeoff function; ``SpecError.field`` names the bad key."""
    d = _load(spec)
    kind = _kind(d, _path)
    try:
        if kind == "eps_delta":
            return make_eps_delta(_number(d, "eps", _path), _number(d, "delta", _path, 0.0))
        if kind == "gdp":
            return make_gdp(_number(d, "mu", _path))
        if kind == "family":
            return family_from_json(d, _path)(_number(d, "t", _path, 1.0))
        if kind == "cauchy":
            return cauchy_tradeoff(_number(d, "m", _path)).curve
        if "inner" not in d:
            raise SpecError(_path + "inner", "missing")
        k = d.get("k")
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise SpecError(_path + "k", "must be a positive integer")
        return iterate(tradeoff_from_json(d["inner"], _path + "inner."), k)
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(_path + kind, str(exc)) from None


def family_from_json(spec: Any, _path: str = "") -> TradeoffFamily:
    """The infinitely divisible family behind a ``family`` or ``gdp`` spec."""
    d = _load(spec)
    kind = _kind(d, _path)
    if kind == "gdp":
        return gdp_family(_number(d, "mu", _path))
    if kind != "family":
        raise SpecError(_path + "kind", "a family is only available for 'family' or 'gdp' specs")
    base = d.get("base")
    if base not in BASES:
        raise SpecError(_path + "base", f"expected one of {', '.join(BASES)}, got {base!r}")
    return make_logconcave_family(base)
