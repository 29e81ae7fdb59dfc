"""Machine-readable verification reports (JSON schema v1 and CSV)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


def _clean(obj: Any) -> Any:
    """Make a value JSON-safe: non-finite floats become strings, numpy scalars plain."""
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        try:
            obj = obj.item()
        except (AttributeError, ValueError):
            pass
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _clean(obj.tolist())
    return str(obj)


def witness_dict(w) -> dict | None:
    if w is None:
        return None
    eps, x = w
    return {"eps": float(eps), "x": [float(v) for v in x]}


@dataclass
class CheckRecord:
    """One check.  ``verdict`` passes when ``observed`` matches ``expected``
    (or ``expected`` is None, which marks an informational check)."""

    identifier: str
    observed: bool | None
    expected: bool | None = True
    worst_margin: float | None = None
    witness: dict | None = None
    detail: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.expected is None or self.observed == self.expected

    def to_dict(self) -> dict:
        return {
            "identifier": self.identifier,
            "verdict": self.verdict,
            "observed": self.observed,
            "expected": self.expected,
            "worst_margin": self.worst_margin,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    suite: str
    config: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)
    wall_time: float | None = None

    @property
    def overall(self) -> bool:
        return all(c.verdict for c in self.checks)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def __getitem__(self, identifier: str) -> CheckRecord:
        for c in self.checks:
            if c.identifier == identifier:
                return c
        raise KeyError(identifier)

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "overall_verdict": self.overall,
        }
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return _clean(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "identifier", "verdict", "observed", "expected", "worst_margin",
                    "witness_eps", "witness_x"])
        for c in self.checks:
            d = _clean(c.to_dict())
            wit = d["witness"] or {}
            w.writerow([self.suite, d["identifier"], d["verdict"], d["observed"], d["expected"],
                        "" if d["worst_margin"] is None else d["worst_margin"],
                        wit.get("eps", ""), " ".join(repr(v) for v in wit.get("x", []))])
        return buf.getvalue()
