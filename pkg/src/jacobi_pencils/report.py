"""Pass/fail records shared by the verification routines and the CLI."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    name: str
    passed: bool
    max_deviation: float = 0.0
    tolerance: float = 0.0
    details: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict, repr=False)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            **({"details": self.details} if self.details else {}),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max deviation {self.max_deviation:.3e} (tol {self.tolerance:.1e})"


def dump_reports(reports: list[CheckReport]) -> str:
    return json.dumps(
        {"passed": all(r.passed for r in reports), "checks": [r.to_dict() for r in reports]},
        indent=2,
        sort_keys=True,
        default=str,
    )
