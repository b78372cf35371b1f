"""Pydantic report models shared by the library and the CLI."""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from topodiag.graph import VertexSet, members


class Status(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    BUDGET_EXHAUSTED = "budget_exhausted"
    INAPPLICABLE = "inapplicable"


def as_list(mask: Optional[VertexSet]) -> Optional[List[int]]:
    return None if mask is None else members(mask)


class LemmaVerdict(BaseModel):
    """Outcome of one lemma or theorem-condition check."""

    id: str
    status: Status
    bound: Optional[int] = None
    witness: Optional[List[int]] = None
    searched: int = 0
    detail: str = ""
    exceptions: List[List[int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _witness_iff_violated(self) -> "LemmaVerdict":
        if (self.witness is not None) != (self.status is Status.VIOLATED):
            raise ValueError("a witness is present exactly when the status is 'violated'")
        return self

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS


class DiagnosisVerdict(BaseModel):
    """
    Result of a t/t-diagnosability decision.

    For ``twin_trivial`` the component lists the two isolated vertices left by
    removing ``witness_S``; for ``small_component`` it is the undersized
    nontrivial component.
    """

    t: int
    diagnosable: bool
    violation_kind: str = "none"
    witness_S: Optional[List[int]] = None
    witness_component: Optional[List[int]] = None
    p: Optional[int] = None
    searched: int = 0

    @model_validator(mode="after")
    def _check_witness(self) -> "DiagnosisVerdict":
        if self.diagnosable != (self.violation_kind == "none"):
            raise ValueError("violation_kind must be 'none' exactly when diagnosable")
        if self.p is not None and self.p > self.t - 1:
            raise ValueError("a violating S has at most t-1 vertices")
        return self


class AnalysisReport(BaseModel):
    family: Optional[str] = None
    n: Optional[int] = None
    order: int = Field(ge=1)
    k: Optional[int] = None
    kappa: int = Field(ge=0)
    girth: Optional[int] = None
    cn_max: int = Field(ge=0)
    l_max: int = Field(ge=0)
    kappa1_upper: Optional[int] = None
    kappa1: Optional[int] = None
    kappa1_exact: bool = False
    tp: Optional[int] = None
    verdicts: List[LemmaVerdict] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    incomplete: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_bounds(self) -> "AnalysisReport":
        if self.k is not None and self.kappa > self.k:
            raise ValueError("kappa cannot exceed the regularity")
        if self.kappa1_upper is not None and self.kappa1_upper < self.kappa:
            raise ValueError("an extra cut is never smaller than kappa")
        if self.kappa1 is not None and not self.kappa1_exact:
            raise ValueError("kappa1 is only reported once certified")
        return self

    @property
    def exhausted(self) -> bool:
        return bool(self.incomplete) or any(v.status is Status.BUDGET_EXHAUSTED for v in self.verdicts)


class TheoremReport(BaseModel):
    instance: str = ""
    applicable: bool
    k: Optional[int] = None
    l: Optional[int] = None
    N: int
    cond1: Optional[LemmaVerdict] = None
    cond2: Optional[LemmaVerdict] = None
    cond3: Optional[LemmaVerdict] = None
    cond4: Optional[LemmaVerdict] = None
    predicted: Optional[int] = None
    tp_computed: Optional[int] = None
    kappa1_upper: Optional[int] = None
    kappa1_source: str = "none"
    certified: bool = False
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_conclusion(self) -> "TheoremReport":
        if self.k is not None and self.l is not None and self.predicted != 2 * self.k - 2 - self.l:
            raise ValueError("predicted must equal 2k - 2 - l")
        if self.certified and not all(c is not None and c.holds for c in self.conditions):
            raise ValueError("certified requires all four conditions to hold")
        return self

    @property
    def conditions(self) -> List[Optional[LemmaVerdict]]:
        return [self.cond1, self.cond2, self.cond3, self.cond4]

    def verdicts(self) -> List[LemmaVerdict]:
        return [c for c in self.conditions if c is not None]


class FamilyPrediction(BaseModel):
    id: str
    family: str
    n: int
    k: Optional[int] = None
    formula: str
    value: int
    threshold: int
    asserted: bool
    tp_measured: Optional[int] = None
    kappa1_upper: Optional[int] = None
    match: Optional[bool] = None


class TpReport(BaseModel):
    """t_p together with the verdict that fails at t_p + 1."""

    family: Optional[str] = None
    n: Optional[int] = None
    order: int
    tp: int
    flagged: bool = False
    failing: Optional[DiagnosisVerdict] = None
