"""Verification reports.

A report is a task id, a parameter dictionary, and a list of named checks.
Its status is derived from the checks: ``pass`` when every check passes,
``budget-exceeded`` when the only non-passing checks ran out of budget, and
``fail`` otherwise.  Serialisation is JSON with sorted keys; the timing field
is kept apart so that two runs with the same configuration produce identical
bytes once timing is dropped.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

PASS = "pass"
FAIL = "fail"
BUDGET = "budget-exceeded"


@dataclass
class Check:
    name: str
    status: str
    witness: str | None = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerificationReport:
    task: str
    params: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    timing: float | None = None

    def add(self, name: str, ok: bool, witness: str | None = None) -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, None if ok else witness))
        return ok

    def add_budget(self, name: str, witness: str) -> None:
        self.checks.append(Check(name, BUDGET, witness))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness))
        self.notes.extend(other.notes)

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if not states or states == {PASS}:
            return PASS
        if FAIL in states:
            return FAIL
        return BUDGET

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status != PASS]

    def to_dict(self, with_timing: bool = False) -> dict[str, Any]:
        d: dict[str, Any] = {
            "task": self.task,
            "params": self.params,
            "status": self.status,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            d["notes"] = self.notes
        if with_timing and self.timing is not None:
            d["timing_seconds"] = round(self.timing, 6)
        return d

    def to_json(self, with_timing: bool = False) -> str:
        return json.dumps(self.to_dict(with_timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def summary_line(self) -> str:
        bad = self.failures()
        tail = "" if not bad else " (" + ", ".join(c.name for c in bad[:5]) + (", ..." if len(bad) > 5 else "") + ")"
        return f"[{self.status}] {self.task} {json.dumps(self.params, sort_keys=True)}{tail}"


@contextmanager
def timed(report: VerificationReport) -> Iterator[VerificationReport]:
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.timing = time.perf_counter() - start
