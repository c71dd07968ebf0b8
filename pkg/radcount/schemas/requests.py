"""Pydantic schemas for quiver files and command requests."""
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from radcount.config import MAX_BUDGET

CountMode = Literal["radical", "overline", "weakened"]
CountEngine = Literal["brute", "dispatch", "naive"]
VerifySuite = Literal["ops", "oracle", "burnside", "injectivity", "positivity"]


class QuiverFile(BaseModel):
    """Quiver interchange file: vertices, arrows as [source, target] pairs, summand vector."""

    model_config = ConfigDict(extra="forbid")

    vertices: List[str] = Field(..., description="Vertex ids in file order")
    arrows: List[Tuple[str, str]] = Field(default_factory=list, description="Arrows as [source, target]")
    d: Dict[str, int] = Field(..., description="Summand vector keyed by vertex id")


def _parse_csv_ints(value):
    """Parse comma-separated integers from a string or pass a list through."""
    if isinstance(value, str):
        try:
            return [int(item.strip()) for item in value.split(",") if item.strip()]
        except ValueError as e:
            raise ValueError(f"expected comma-separated integers, got '{value}'") from e
    return value


class CountRequest(BaseModel):
    """Request for a single count."""

    quiver: Path = Field(..., description="Quiver JSON file")
    q: int = Field(..., description="Field size")
    mode: CountMode = Field(default="radical", description="What to count")
    l: Optional[int] = Field(None, ge=1, description="Radical power of the pair space (weakened)")
    m: Optional[int] = Field(None, ge=0, description="Radical power the commutator must lie in (weakened)")
    engine: CountEngine = Field(default="brute", description="Counting engine")
    jobs: Optional[int] = Field(None, ge=1, description="Worker processes")
    budget: Optional[int] = Field(None, ge=1, le=MAX_BUDGET, description="Enumeration budget")
    cache: Optional[Path] = Field(None, description="Result cache path")
    json_output: bool = Field(default=False, description="Emit JSON")

    @model_validator(mode="after")
    def check_mode_parameters(self):
        """Weakened counts need both radical powers, other modes take neither."""
        if self.mode == "weakened":
            if self.l is None or self.m is None:
                raise ValueError("--mode weakened requires --l and --m")
        elif self.l is not None or self.m is not None:
            raise ValueError("--l and --m only apply to --mode weakened")
        if self.engine == "dispatch" and self.mode != "radical":
            raise ValueError("--engine dispatch only supports --mode radical")
        return self


class ReduceRequest(BaseModel):
    """Request to normalize a quiver and report its leaves."""

    quiver: Path
    show_steps: bool = False
    json_output: bool = False


class PolyRequest(BaseModel):
    """Request to interpolate counts as a polynomial in q."""

    quiver: Path
    qs: List[int] = Field(..., min_length=1, description="Sample field sizes")
    mode: CountMode = "radical"
    l: Optional[int] = Field(None, ge=1)
    m: Optional[int] = Field(None, ge=0)
    engine: Literal["brute", "dispatch"] = "dispatch"
    screen: bool = Field(default=False, description="Run the conjecture screen instead of one fit")
    jobs: Optional[int] = Field(None, ge=1)
    budget: Optional[int] = Field(None, ge=1, le=MAX_BUDGET)
    json_output: bool = False

    @field_validator("qs", mode="before")
    @classmethod
    def parse_qs(cls, v):
        """Parse the sample list from a comma-separated string."""
        return _parse_csv_ints(v)

    @model_validator(mode="after")
    def check_mode_parameters(self):
        """Weakened fits need both radical powers."""
        if len(set(self.qs)) != len(self.qs):
            raise ValueError("--qs values must be distinct")
        if self.mode == "weakened" and (self.l is None or self.m is None):
            raise ValueError("--mode weakened requires --l and --m")
        return self


class VerifyRequest(BaseModel):
    """Request to run a verification suite or audit the cache."""

    suite: Optional[VerifySuite] = None
    trials: int = Field(default=50, ge=1)
    seed: int = 0
    qs: Optional[List[int]] = Field(None, description="Field sizes; the suite chooses when unset")
    audit_cache: bool = False
    cache: Optional[Path] = None
    jobs: Optional[int] = Field(None, ge=1)
    budget: Optional[int] = Field(None, ge=1, le=MAX_BUDGET)
    json_output: bool = False

    @field_validator("qs", mode="before")
    @classmethod
    def parse_qs(cls, v):
        """Parse the field list from a comma-separated string."""
        return _parse_csv_ints(v)

    @model_validator(mode="after")
    def check_target(self):
        """Exactly one of a suite or the cache audit must be requested."""
        if (self.suite is None) == (not self.audit_cache):
            raise ValueError("pass exactly one of --suite or --cache")
        return self


class FormulaRequest(BaseModel):
    """Request for the closed-form equioriented A3 polynomial."""

    l: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    q: Optional[int] = Field(None, ge=2)
    json_output: bool = False
