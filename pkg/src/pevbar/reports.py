"""Check reports shared by every module and serialized by the CLI."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

DEFAULT_VIOLATION_CAP = 16
_cap: list = [DEFAULT_VIOLATION_CAP]


def set_violation_cap(cap: Optional[int]) -> None:
    """Cap on listed violations for reports created afterwards (None = list all)."""
    _cap[0] = cap


def violation_cap() -> Optional[int]:
    return _cap[0]


def cut(items: list) -> list:
    cap = violation_cap()
    return list(items) if cap is None else list(items)[:cap]


@dataclass
class Report:
    check: str
    status: str = "pass"
    level: Optional[int] = None
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    total_violations: int = 0
    cap: Optional[int] = field(default_factory=violation_cap)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, term, lhs="", rhs="", **extra) -> None:
        self.status = "fail"
        self.total_violations += 1
        if self.cap is None or len(self.violations) < self.cap:
            v = {"term": str(term), "lhs": str(lhs), "rhs": str(rhs)}
            v.update({k: str(x) for k, x in extra.items()})
            self.violations.append(v)

    def merge(self, other: "Report") -> None:
        """Fold another report's violations into this one."""
        if not other.passed:
            self.status = "fail"
        self.total_violations += other.total_violations
        room = None if self.cap is None else max(self.cap - len(self.violations), 0)
        self.violations.extend(other.violations if room is None else other.violations[:room])

    def to_dict(self) -> dict:
        out = {"check": self.check, "status": self.status, "level": self.level,
               "violations": self.violations, "total_violations": self.total_violations}
        if self.details:
            out["details"] = _plain(self.details)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        head = f"{self.check}: {self.status.upper()}"
        if self.level is not None:
            head += f" (level {self.level})"
        lines = [head]
        for k, v in sorted(self.details.items()):
            lines.append(f"  {k}: {_plain(v)}")
        for v in self.violations:
            lines.append(f"  violation: {v['term']}  lhs={v['lhs']}  rhs={v['rhs']}")
        if self.total_violations > len(self.violations):
            lines.append(f"  ... {self.total_violations - len(self.violations)} more")
        return "\n".join(lines)


def _plain(x: Any):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)
