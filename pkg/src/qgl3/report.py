"""Structured check results with exact-zero semantics."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
EXPECTED = "expected"  # documented expected failure (counts as pass)


@dataclass
class ConditionReport:
    """Outcome of one exact check; pass means exactly zero residual."""

    name: str
    status: str
    witness: dict | None = None
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status in (PASS, EXPECTED, SKIPPED)

    def to_dict(self) -> dict:
        out = {"check": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def passed(name: str, *notes: str) -> ConditionReport:
    return ConditionReport(name, PASS, notes=tuple(notes))


def failed(name: str, witness: dict | None = None, *notes: str) -> ConditionReport:
    return ConditionReport(name, FAIL, witness=witness, notes=tuple(notes))


def skipped(name: str, *notes: str) -> ConditionReport:
    return ConditionReport(name, SKIPPED, notes=tuple(notes))


def expected(name: str, *notes: str) -> ConditionReport:
    return ConditionReport(name, EXPECTED, notes=tuple(notes))


@dataclass
class SolutionReport:
    """All checks for one solution (or one twisted instance)."""

    solution: str
    depth: str
    checks: list[ConditionReport] = field(default_factory=list)
    branch: str = "principal"
    notes: tuple[str, ...] = ()

    def add(self, report: ConditionReport) -> ConditionReport:
        self.checks.append(report)
        return report

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[ConditionReport]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        out = {
            "solution": self.solution,
            "depth": self.depth,
            "branch": self.branch,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out
