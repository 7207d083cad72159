"""Machine-readable run reports.

Reports are serialized with sorted keys and shortest round-trip float
formatting, so the same command, seed and version give the same bytes.
Wall-clock time is kept out of the JSON for that reason.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from . import __version__

SCHEMA = 1
TOOL = "monogamy"


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    count: int = 1
    detail: str = ""

    def as_dict(self) -> dict:
        d = {
            "name": self.name,
            "value": _finite(self.value),
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "count": int(self.count),
        }
        if self.detail:
            d["detail"] = self.detail
        return d


def _finite(x: float) -> float | str | None:
    # JSON has no inf/nan; keep them readable instead of emitting invalid tokens
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else repr(x)


@dataclass
class RunReport:
    command: str
    parameters: dict[str, Any]
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, value: float, tolerance: float, passed: bool, count: int = 1, detail: str = "") -> Check:
        c = Check(name, float(value), float(tolerance), bool(passed), count, detail)
        self.checks.append(c)
        return c

    def bound_check(self, name: str, lhs: float, rhs: float, tolerance: float, count: int = 1) -> Check:
        """Record ``lhs <= rhs + tolerance``; the stored value is the excess ``lhs - rhs``."""
        return self.add(name, lhs - rhs, tolerance, lhs <= rhs + tolerance, count)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool": TOOL,
            "version": __version__,
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
            "results": self.results,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
