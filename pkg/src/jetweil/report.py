"""Structured results for the randomized law-checking suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PropertyResult:
    name: str
    law: str
    passed: bool
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "law": self.law, "pass": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class Report:
    suite: str
    trials: int
    seed: int
    properties: list[PropertyResult] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def add(self, name: str, law: str, passed: bool, counterexample: dict | None = None):
        self.properties.append(PropertyResult(name, law, passed, counterexample))

    def failures(self) -> list[PropertyResult]:
        return [p for p in self.properties if not p.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.all_passed,
            "properties": [p.to_dict() for p in self.properties],
        }
