"""
Check Reports

Every command and acceptance criterion produces a Report made of Checks.
Verdicts: pass, fail, vacuous (nothing to check), out-of-bound (the only
offending instances leave the rank bound).
JSON output is sorted and carries no timing unless asked, so identical
argv + seed gives byte-identical output.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import pandas as pd

MAX_WITNESSES = 5


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    VACUOUS = "vacuous"
    OUT_OF_BOUND = "out-of-bound"


@dataclass
class Check:
    """One named verdict with instance counts and counterexample witnesses."""

    name: str
    verdict: Verdict = Verdict.PASS
    detail: str = ""
    passed: int = 0
    failed: int = 0
    out_of_bound: int = 0
    witnesses: List[str] = field(default_factory=list)

    def record(self, outcome: Verdict, witness: Optional[str] = None) -> None:
        """Count one instance; failing instances keep a few witnesses."""
        if outcome == Verdict.PASS:
            self.passed += 1
        elif outcome == Verdict.FAIL:
            self.failed += 1
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)
        elif outcome == Verdict.OUT_OF_BOUND:
            self.out_of_bound += 1

    def settle(self, vacuous: bool = False) -> "Check":
        """Derive the verdict from the counts."""
        if self.failed:
            self.verdict = Verdict.FAIL
        elif vacuous or self.passed + self.out_of_bound == 0:
            self.verdict = Verdict.VACUOUS
        elif self.passed == 0:
            self.verdict = Verdict.OUT_OF_BOUND
        else:
            self.verdict = Verdict.PASS
        return self

    @property
    def ok(self) -> bool:
        return self.verdict != Verdict.FAIL

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "detail": self.detail,
            "passed": self.passed,
            "failed": self.failed,
            "out_of_bound": self.out_of_bound,
            "witnesses": list(self.witnesses),
        }


def check_of(name: str, ok: bool, detail: str = "", witnesses: Optional[List[str]] = None) -> Check:
    """Single-instance check."""
    check = Check(name=name, detail=detail)
    check.record(Verdict.PASS if ok else Verdict.FAIL)
    check.witnesses = list(witnesses or [])[:MAX_WITNESSES]
    return check.settle()


@dataclass
class Report:
    command: List[str]
    seed: int
    checks: List[Check] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    timing: Optional[float] = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        out = {
            "command": list(self.command),
            "seed": self.seed,
            "ok": self.ok,
            "checks": [c.as_dict() for c in self.checks],
            "data": self.data,
        }
        if include_timing and self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.as_dict(include_timing), sort_keys=True, indent=2, ensure_ascii=False)

    def to_table(self) -> str:
        if not self.checks:
            return "(no checks)"
        frame = pd.DataFrame(
            [
                {
                    "check": c.name,
                    "verdict": c.verdict.value,
                    "pass": c.passed,
                    "fail": c.failed,
                    "oob": c.out_of_bound,
                    "detail": c.detail,
                }
                for c in self.checks
            ]
        )
        return frame.to_string(index=False)

    def to_text(self) -> str:
        lines = ["=" * 60, " ".join(self.command), "=" * 60, self.to_table()]
        for c in self.checks:
            for w in c.witnesses:
                lines.append(f"  {c.name}: {w}")
        if self.timing is not None:
            lines.append(f"elapsed: {self.timing:.2f}s")
        lines.append("✅ all checks passed" if self.ok else "❌ some checks failed")
        return "\n".join(lines)
