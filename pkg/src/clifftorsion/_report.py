from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

# cap on stored failure witnesses per report
MAX_WITNESSES = 20


@dataclass
class Report:
    """Outcome of a verification sweep: named checks plus failure witnesses."""

    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[dict[str, str]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def check(self, invariant: str, ok: bool) -> bool:
        self.checks[invariant] = self.checks.get(invariant, True) and bool(ok)
        return bool(ok)

    def fail(self, invariant: str, detail: str) -> None:
        self.checks[invariant] = False
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append({"suite": self.name, "invariant": invariant, "detail": detail})

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": dict(self.checks),
            "failures": list(self.failures),
            "details": self.details,
        }

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        bad = [k for k, v in self.checks.items() if not v]
        tail = f"  failing: {', '.join(bad)}" if bad else ""
        return f"[{status}] {self.name}{tail}"
