"""Error types and error response schemas for consistent error handling."""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class RadcountError(Exception):
    """Base class for every error the engine reports to the caller."""

    code: str = "RADCOUNT_ERROR"
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class QuiverValidationError(RadcountError):
    """Malformed quiver file, cycle, dangling endpoint or bad summand vector."""

    code = "VALIDATION_ERROR"
    exit_code = 2


class InvalidRequestError(RadcountError):
    """An argument is outside the domain of the requested operation."""

    code = "INVALID_REQUEST"
    exit_code = 2


class UnsupportedFieldError(RadcountError):
    """q is not one of the supported prime powers."""

    code = "UNSUPPORTED_FIELD"
    exit_code = 2


class UnsupportedRangeError(RadcountError):
    """The group-theoretic oracle was asked for an out-of-range instance."""

    code = "UNSUPPORTED_RANGE"
    exit_code = 2


class RuleHypothesisError(RadcountError):
    """A rewrite rule was applied where its hypotheses do not hold."""

    code = "RULE_HYPOTHESIS"
    exit_code = 2


class PathCapExceededError(RadcountError):
    """The weighted number of non-constant paths exceeds the configured cap."""

    code = "PATH_CAP"
    exit_code = 3

    def __init__(self, weighted_paths: int, cap: int):
        super().__init__(
            f"weighted non-constant path count {weighted_paths} exceeds cap {cap}"
        )
        self.weighted_paths = weighted_paths
        self.cap = cap


class BudgetExceededError(RadcountError):
    """An enumeration would visit more elements than the budget allows."""

    code = "BUDGET_EXCEEDED"
    exit_code = 3

    def __init__(self, required: int, budget: int, what: str = "q^D"):
        super().__init__(
            f"enumeration needs {what} = {required} elements, budget is {budget}"
        )
        self.required = required
        self.budget = budget


class InsufficientSamplesError(RadcountError):
    """Too few sample points to fit and hold out for the degree bound."""

    code = "INSUFFICIENT_SAMPLES"
    exit_code = 4

    def __init__(self, required: int, given: int):
        super().__init__(
            f"need at least {required} sample points (degree bound + 2), got {given}"
        )
        self.required = required
        self.given = given


class ErrorResponse(BaseModel):
    """Standard error response format."""
    detail: str
    code: Optional[str] = None
    exit_code: int
    errors: Optional[List[Dict[str, Any]]] = None  # For validation errors


def create_error_response(
    detail: str,
    exit_code: int,
    code: Optional[str] = None,
    errors: Optional[List[Dict[str, Any]]] = None,
) -> Dict[str, Any]:
    """Create a standardized error response."""
    response = {
        "detail": detail,
        "exit_code": exit_code,
    }
    if code:
        response["code"] = code
    if errors:
        response["errors"] = errors
    return response
