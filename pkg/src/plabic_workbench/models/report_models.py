from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class CompositionReport(BaseModel):
    """Outcome of comparing a composite promotion with the two-step one"""

    passed: bool = Field(..., description="Every check held")
    glued_valid: bool = Field(..., description="Glued configuration satisfies every relation")
    columns_checked: int = Field(0, description="Blob columns compared up to scaling")
    formula_columns_checked: int = Field(0, description="Columns also compared with the two-step formulas")
    direct_checked: bool = Field(False, description="Glued core was a tree and was promoted directly")
    mismatches: List[str] = Field(default_factory=list, description="Human-readable failures")


class QuasiClusterReport(BaseModel):
    """Outcome of checking a promotion against a pair of seeds"""

    family: str = Field(..., description="Promotion family name")
    trials: int = Field(..., description="Sample points used")
    vertices_checked: int = Field(..., description="Mutable source vertices compared")
    variable_signs: Dict[str, int] = Field(
        default_factory=dict, description="Source vertex to the constant sign s with Psi(x) = s * F * xbar"
    )
    ratio_signs: Dict[str, int] = Field(
        default_factory=dict, description="Source vertex to the constant sign relating the exchange ratios"
    )
    violations: List[str] = Field(default_factory=list, description="Failed checks, one line each")
    notes: List[str] = Field(default_factory=list, description="Resolved conventions worth echoing")

    @property
    def passed(self) -> bool:
        return not self.violations


class MutationStep(BaseModel):
    """One mutation of a named schedule"""

    index: int = Field(..., description="1-based position in the schedule")
    vertex: str = Field(..., description="Mutated vertex")
    expected: Optional[str] = Field(None, description="Closed form the new variable should equal")
    sign: Optional[int] = Field(None, description="Sign relating the new variable to the closed form")


class MutationReport(BaseModel):
    """A schedule run and the comparison of its last seed with the target"""

    name: str = Field(..., description="Schedule name")
    n: int = Field(..., description="Boundary count")
    steps: List[MutationStep] = Field(default_factory=list, description="Applied mutations in order")
    matched: Dict[str, str] = Field(
        default_factory=dict, description="Target vertex to the mutated-seed vertex holding the same variable"
    )
    orientation: int = Field(0, description="+1 if arrows agree, -1 if all reversed, 0 if neither")
    arrows_compared: int = Field(0, description="Arrow slots compared")
    violations: List[str] = Field(default_factory=list, description="Unmatched variables or arrows")
    notes: List[str] = Field(default_factory=list, description="Resolved conventions worth echoing")

    @property
    def passed(self) -> bool:
        return not self.violations


class CertificateCheck(BaseModel):
    """One certified inequality at one point"""

    statement: str = Field(..., description="Inequality being certified")
    value: str = Field(..., description="Exact value, printed")
    passed: bool = Field(..., description="Whether the inequality held")


class CertificateReport(BaseModel):
    """Positivity certificates of the 4-mass box over sampled positive points"""

    n: int = Field(..., description="Boundary count")
    samples: int = Field(..., description="Points certified")
    checks: int = Field(0, description="Inequalities evaluated in total")
    failures: List[CertificateCheck] = Field(default_factory=list, description="Failed inequalities")
    counterexamples: List[List[List[str]]] = Field(
        default_factory=list, description="Points (as printed rationals) where something failed"
    )

    @property
    def passed(self) -> bool:
        return not self.failures


class OperadReport(BaseModel):
    """Operad axioms checked as equalities of canonical tangle encodings"""

    checks: int = Field(0, description="Equalities compared")
    failures: List[str] = Field(default_factory=list, description="Axiom instances whose two sides differ")

    @property
    def passed(self) -> bool:
        return not self.failures
