"""Pydantic models for analysis reports.

Every report renders to deterministic structured text, which is what the
command-line front end prints. Sets, points and words are stored already
rendered in their literal syntax.
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class ValidationReport(BaseModel):
    """Result of validating a presentation."""
    presentation: str = Field(description="Presentation name")
    vertex_universe: str = Field(description="'infinite' or the number of vertices")
    families: int = Field(description="Number of edge families")
    edges: str = Field(description="Edge index set")
    distinct_ranges: List[str] = Field(description="Distinct ranges with a representative edge")

    @property
    def passed(self) -> bool:
        return True

    def render(self) -> str:
        lines = [
            f"valid {self.presentation}",
            f"vertices: {self.vertex_universe}",
            f"families: {self.families}",
            f"edges: {self.edges}",
            "distinct ranges:",
        ]
        lines += [f"  {entry}" for entry in self.distinct_ranges]
        return "\n".join(lines)


class RangeDecompositionEntry(BaseModel):
    """A range written as minimal infinite emitters plus single vertices."""
    edge: int = Field(description="Smallest edge with this range")
    range: str = Field(description="The range")
    emitters: List[str] = Field(description="Minimal infinite emitters inside the range")
    singletons: List[int] = Field(description="Remaining vertices")

    def render(self) -> str:
        parts = self.emitters + [f"{{v_{v}}}" for v in self.singletons]
        return f"r(e_{self.edge}) = " + (" | ".join(parts) if parts else "fin{}")


class RfumReport(BaseModel):
    """Condition (RFUM) verdict."""
    presentation: str = Field(description="Presentation name")
    verdict: str = Field(description="'Pass' or 'Fail'")
    edge: Optional[int] = Field(None, description="Failing edge")
    residual: Optional[str] = Field(None, description="Infinite residual of the failing range")
    decompositions: List[RangeDecompositionEntry] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "Pass"

    def render(self) -> str:
        if not self.passed:
            return f"Fail(e_{self.edge}, residual {self.residual})"
        return "\n".join(["Pass"] + [f"  {d.render()}" for d in self.decompositions])


class RelationCheck(BaseModel):
    """One verified instance of a relation."""
    relation: str = Field(description="Relation label")
    subject: str = Field(description="Edges, vertices or sets the instance is about")
    passed: bool = Field(description="Whether the identity holds")
    detail: str = Field("", description="Explanation for failures")


class RelationsReport(BaseModel):
    """Generator-level verification of the ultragraph relations."""
    presentation: str = Field(description="Presentation name")
    checks: List[RelationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[RelationCheck]:
        return [check for check in self.checks if not check.passed]

    def render(self) -> str:
        totals = {}
        for check in self.checks:
            done, ok = totals.get(check.relation, (0, 0))
            totals[check.relation] = (done + 1, ok + int(check.passed))
        lines = [f"relations for {self.presentation}: {'pass' if self.passed else 'FAIL'}"]
        for relation, (done, ok) in totals.items():
            lines.append(f"  {relation}: {ok}/{done}")
        for check in self.failures():
            lines.append(f"  failed {check.relation} [{check.subject}] {check.detail}".rstrip())
        return "\n".join(lines)


class AxiomsReport(BaseModel):
    """Partial-action axioms for a pair of words."""
    t: str = Field(description="Outer word")
    h: str = Field(description="Inner word")
    checked: int = Field(description="Sample points inside both domains")
    skipped: int = Field(description="Sample points outside the domains")
    mismatches: List[str] = Field(default_factory=list)
    containment: Optional[bool] = Field(
        None, description="Whether theta_t(X_{t^-1} & X_h) is inside X_{th}"
    )

    @property
    def passed(self) -> bool:
        return not self.mismatches and self.containment is not False

    def render(self) -> str:
        lines = [
            f"axioms t={self.t} h={self.h}: {'pass' if self.passed else 'FAIL'}",
            f"  composition checked on {self.checked} points ({self.skipped} outside the domains)",
            f"  containment: {self.containment}",
        ]
        lines += [f"  mismatch {m}" for m in self.mismatches]
        return "\n".join(lines)


class MorphismReport(BaseModel):
    """Shift-morphism checks on a finite table."""
    entries: int = Field(description="Table size")
    depth: int = Field(description="Shift-closure depth checked")
    commutes: bool = Field(description="sigma o phi == phi o sigma on the table")
    length_preserving: bool = Field(description="|phi(x)| == |x| on the table")
    injective: bool = Field(description="No two entries share an image")
    lemma_holds: bool = Field(description="phi(a.x) == b.phi(x) for tabled pairs")
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.commutes and self.length_preserving and self.injective and self.lemma_holds

    def render(self) -> str:
        lines = [
            f"morphism check on {self.entries} entries (depth {self.depth}): "
            f"{'pass' if self.passed else 'FAIL'}",
            f"  shift commuting: {self.commutes}",
            f"  length preserving: {self.length_preserving}",
            f"  injective: {self.injective}",
            f"  prefix lemma: {self.lemma_holds}",
        ]
        lines += [f"  {failure}" for failure in self.failures]
        return "\n".join(lines)


class ConvergenceEntry(BaseModel):
    description: str = Field(description="Tested neighborhood")
    settled_from: Optional[int] = Field(None, description="Index from which the test holds")
    window_failures: int = Field(0, description="Failures in the final window")


class ConvergenceReport(BaseModel):
    """Convergence certificate, counterexample or inconclusive verdict."""
    target: str = Field(description="Limit point")
    horizon: int = Field(description="Number of terms inspected")
    verdict: str = Field(description="certificate, counterexample or inconclusive")
    tests: List[ConvergenceEntry] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "certificate"

    def render(self) -> str:
        lines = [f"{self.verdict} for convergence to {self.target} (horizon {self.horizon})"]
        for test in self.tests:
            if test.settled_from is not None:
                lines.append(f"  {test.description}: N = {test.settled_from}")
            else:
                lines.append(f"  {test.description}: fails {test.window_failures} times in window")
        return "\n".join(lines)


class GradingReport(BaseModel):
    """Degree additivity of a product."""
    left_degrees: List[int] = Field(description="Degrees of the left factor's components")
    right_degrees: List[int] = Field(description="Degrees of the right factor's components")
    components: List[str] = Field(description="Product components as 'word: degree'")
    violations: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def render(self) -> str:
        lines = [f"grading: {'pass' if self.passed else 'FAIL'}"]
        lines += [f"  {c}" for c in self.components]
        lines += [f"  violation {v}" for v in self.violations]
        return "\n".join(lines)


class CommandResult(BaseModel):
    """What a CLI handler hands back to ``main``."""
    output: str = Field(description="Text for stdout")
    exit_code: int = Field(0, description="0 success, 1 check failure, 2 input error")
