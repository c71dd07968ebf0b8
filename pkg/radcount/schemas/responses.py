"""Pydantic schemas for command results and reports."""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_serializer


class CountResult(BaseModel):
    """An exact count together with what was enumerated to get it."""

    value: int = Field(..., ge=0, description="Exact count")
    q: int = Field(..., description="Field size")
    dim_enumerated: int = Field(..., description="Dimension of the space x ranged over")
    mode: str = Field(..., description="radical, overline, weakened or naive")
    l: Optional[int] = None
    m: Optional[int] = None
    engine: str = Field(default="brute", description="Engine that produced the value")
    elapsed: float = Field(default=0.0, description="Seconds spent computing")

    @field_serializer("value")
    def serialize_value(self, value: int) -> str:
        return str(value)


class ReductionStepOut(BaseModel):
    """One applied rewrite rule."""

    rule: str
    detail: Dict[str, object] = Field(default_factory=dict)
    before: Dict[str, object]
    after: List[Dict[str, object]]


class LeafOut(BaseModel):
    """A terminal component of a reduction."""

    classification: str
    quiver: Dict[str, object]


class ReductionReport(BaseModel):
    """Leaves of a normalization and, optionally, the steps that produced them."""

    summary: str
    leaves: List[LeafOut]
    steps: Optional[List[ReductionStepOut]] = None


class HoldoutPoint(BaseModel):
    """A held-out sample compared against the fitted polynomial."""

    q: int
    predicted: str
    actual: str
    match: bool


class FitReportOut(BaseModel):
    """Interpolation result for one counting mode."""

    mode: str
    degree_bound: int
    samples: List[List[str]] = Field(default_factory=list, description="[q, value] pairs")
    polynomial: Optional[str] = Field(None, description="None means no fit")
    coefficients: Optional[Dict[str, str]] = None
    holdout: List[HoldoutPoint] = Field(default_factory=list)
    nonneg: Optional[bool] = None
    integral: Optional[bool] = None


class ScreenReport(BaseModel):
    """Radical and overline fits for one quiver."""

    canonical_hash: str
    fits: List[FitReportOut]
    verdict: str


class TrialResult(BaseModel):
    """Outcome of one verification trial."""

    name: str
    passed: bool
    detail: str = ""
    skipped: bool = False


class SuiteReport(BaseModel):
    """Outcome of a verification suite."""

    suite: str
    seed: int
    trials: List[TrialResult]
    reproducer: Optional[str] = Field(None, description="Minimized failing quiver JSON")

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.trials)


class FormulaResponse(BaseModel):
    """Closed-form equioriented A3 polynomial."""

    l: int
    d: int
    m: int
    polynomial: str
    coefficients: Dict[str, str]
    q: Optional[int] = None
    value: Optional[str] = None
