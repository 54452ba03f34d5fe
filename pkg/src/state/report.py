from typing import Dict, List
from pydantic import BaseModel, Field


class Violation(BaseModel):
    """A single failed rule, with the points/radii that witness it."""
    rule: str = Field(description="Short rule name, e.g. 'strong-triangle' or 'strict-decrease'")
    detail: str = Field(description="Human readable description of the failure")
    witness: Dict[str, str] = Field(default_factory=dict)


class Report(BaseModel):
    """Outcome of an axiom or trace check. An empty violation list means pass."""
    name: str
    checked: int = Field(default=0, description="Number of elementary cases examined")
    violations: List[Violation] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, rule: str, detail: str, **witness: object) -> None:
        self.violations.append(
            Violation(rule=rule, detail=detail, witness={k: str(v) for k, v in witness.items()})
        )

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        self.violations.extend(other.violations)
        return self

    def rules(self) -> List[str]:
        return [v.rule for v in self.violations]

    def summary(self) -> str:
        if self.passed:
            return f"{self.name}: ok ({self.checked} cases)"
        lines = [f"{self.name}: {len(self.violations)} violation(s) in {self.checked} cases"]
        for v in self.violations:
            lines.append(f"  - [{v.rule}] {v.detail}")
        return "\n".join(lines)
