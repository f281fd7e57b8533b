"""Verification report records and their JSON / CSV serialisation.

Floats are written with 17 significant digits so every double survives a
round trip.  Apart from ``timestamp`` the output is a pure function of the
report contents.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

__all__ = [
    "RelationResidual",
    "VerificationReport",
    "relative_residual",
    "dumps_json",
    "reports_to_json",
    "reports_to_csv",
]


@dataclass(frozen=True)
class RelationResidual:
    """Residual of one checked relation.

    ``status`` is ``"ok"``, ``"failed"`` or ``"skipped: <reason>"``; a skipped
    relation has ``residual=None`` and never passes.  ``value`` optionally
    carries the quantity the residual was derived from (an observed order,
    an eigenvalue...).
    """

    relation_id: str
    residual: Optional[float]
    tolerance: float
    value: Optional[float] = None
    status: Optional[str] = None

    def __post_init__(self):
        if self.residual is not None and not (self.residual >= 0 or math.isnan(self.residual)):
            raise ValueError("residual must be non-negative")
        if self.status is None:
            object.__setattr__(self, "status", "ok" if self.passed else "failed")

    @property
    def passed(self) -> bool:
        if self.residual is None or (self.status or "").startswith("skipped"):
            return False
        return bool(self.residual <= self.tolerance)

    @classmethod
    def skipped(cls, relation_id, tolerance, reason):
        return cls(relation_id, None, tolerance, status=f"skipped: {reason}")

    def as_dict(self):
        out = {
            "id": self.relation_id,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "status": self.status,
        }
        if self.value is not None:
            out["value"] = self.value
        return out


@dataclass
class VerificationReport:
    params: dict
    basis_size: int
    trusted_size: int
    residuals: list
    grid: Optional[dict] = None
    details: Optional[dict] = None
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def __post_init__(self):
        if not self.residuals:
            raise ValueError("a verification report needs at least one residual")

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    def failures(self):
        return [r for r in self.residuals if not r.passed]

    def __getitem__(self, relation_id) -> RelationResidual:
        for r in self.residuals:
            if r.relation_id == relation_id:
                return r
        raise KeyError(relation_id)

    def as_dict(self):
        out = {
            "params": self.params,
            "basis_size": self.basis_size,
            "trusted": self.trusted_size,
            "relations": [r.as_dict() for r in self.residuals],
        }
        if self.grid is not None:
            out["grid"] = self.grid
        if self.details is not None:
            out["details"] = self.details
        out["timestamp"] = self.timestamp
        return out

    def to_json(self):
        return dumps_json(self.as_dict())

    def to_csv(self):
        return reports_to_csv([self])


def relative_residual(lhs, rhs) -> float:
    """||lhs - rhs||_F / max(1, ||lhs||_F, ||rhs||_F)."""
    import numpy as np

    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    scale = max(1.0, float(np.linalg.norm(lhs)), float(np.linalg.norm(rhs)))
    return float(np.linalg.norm(lhs - rhs)) / scale


def _fmt_float(x):
    if math.isnan(x) or math.isinf(x):
        # JSON has no NaN/inf; these only appear in diagnostics
        return "null"
    text = format(float(x), ".17g")
    # keep floats recognisable as floats after a round trip
    return text if any(c in text for c in ".en") else text + ".0"


def dumps_json(obj, indent=2, _level=0) -> str:
    """JSON text with 17-significant-digit floats and stable key order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        return dumps_json(obj.item(), indent, _level)
    if isinstance(obj, str):
        import json

        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps_json(str(k))}: {dumps_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def reports_to_json(reports) -> str:
    if len(reports) == 1:
        return dumps_json(reports[0].as_dict()) + "\n"
    return dumps_json([r.as_dict() for r in reports]) + "\n"


CSV_COLUMNS = ("omega", "alpha", "L", "basis_size", "trusted", "id", "residual", "tolerance", "pass", "status", "value")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        prm = rep.params
        for r in rep.residuals:
            w.writerow(
                [
                    _cell(prm.get("omega")),
                    _cell(prm.get("alpha")),
                    _cell(prm.get("L")),
                    rep.basis_size,
                    rep.trusted_size,
                    r.relation_id,
                    _cell(r.residual),
                    _cell(r.tolerance),
                    "true" if r.passed else "false",
                    r.status,
                    _cell(r.value),
                ]
            )
    return buf.getvalue()


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)
