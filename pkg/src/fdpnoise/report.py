"""Structured audit results."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional


@dataclass
class CheckRecord:
    name: str
    location: dict[str, Any]
    bound: float
    achieved: float
    margin: float
    passed: bool
    kind: str = "upper"
    tol: float = 0.0


@dataclass
class AuditReport:
    """Outcome of a batch of bound checks.

    For ``kind="upper"`` checks the margin is ``bound - achieved``; for
    ``kind="lower"`` it is ``achieved - bound``. A check passes when its
    margin is at least ``-tol``.
    """

    title: str
    assumptions: list[str] = field(default_factory=list)
    checks: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    applicable: bool = True

    def add(self, name: str, location: dict, bound: float, achieved: float,
            kind: str = "upper", tol: float = 0.0, slack: float = 0.0) -> CheckRecord:
        """Record one comparison.

        ``slack`` widens the pass region (e.g. a sampling confidence band)
        without altering the reported margin.
        """
        bound, achieved = float(bound), float(achieved)
        margin = bound - achieved if kind == "upper" else achieved - bound
        rec = CheckRecord(name, dict(location), bound, achieved, margin,
                          bool(margin >= -(tol + slack)), kind, tol + slack)
        self.checks.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def violations(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    @property
    def worst(self) -> Optional[CheckRecord]:
        if not self.checks:
            return None
        return min(self.checks, key=lambda c: c.margin)

    @property
    def worst_margin(self) -> float:
        w = self.worst
        return math.inf if w is None else w.margin

    def checks_named(self, name: str) -> list[CheckRecord]:
        return [c for c in self.checks if c.name == name]

    def to_dict(self) -> dict:
        d = {
            "title": self.title,
            "applicable": self.applicable,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "assumptions": list(self.assumptions),
            "notes": list(self.notes),
            "checks": [asdict(c) for c in self.checks],
        }
        return d

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_table(self, limit: Optional[int] = None) -> str:
        lines = [self.title, "=" * len(self.title)]
        lines += [f"assume: {a}" for a in self.assumptions]
        lines += [f"note:   {n}" for n in self.notes]
        if not self.applicable:
            lines.append("status: not applicable")
            return "\n".join(lines)
        lines.append(f"{'check':<16} {'location':<26} {'bound':>14} {'achieved':>14} "
                     f"{'margin':>12}  ok")
        # when truncating, lead with the failures
        rows = self.checks if limit is None else (self.violations or self.checks)[:limit]
        for c in rows:
            loc = ",".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                           for k, v in c.location.items())
            lines.append(f"{c.name:<16} {loc:<26} {c.bound:>14.8g} {c.achieved:>14.8g} "
                         f"{c.margin:>12.3e}  {'y' if c.passed else 'N'}")
        if limit is not None and len(self.checks) > limit:
            lines.append(f"... {len(self.checks) - limit} more checks")
        lines.append(f"status: {'PASS' if self.passed else 'VIOLATION'} "
                     f"({len(self.violations)} of {len(self.checks)} failed, "
                     f"worst margin {self.worst_margin:.3e})")
        return "\n".join(lines)
