"""Exact interpolation of counts in q, hold-out validation and conjecture screening."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy

from radcount.graph.canonical import canonical_hash
from radcount.graph.graph import dispatch_count
from radcount.graph.quiver import Quiver, SummandVector, weighted_path_count
from radcount.schemas.errors import InsufficientSamplesError, InvalidRequestError
from radcount.schemas.responses import FitReportOut, HoldoutPoint, ScreenReport
from radcount.services.closed_form import PolyQ
from radcount.services.counting import PairCounter
from radcount.services.finite_field import SUPPORTED_ORDERS
from radcount.services.path_algebra import (
    StructureConstants,
    build_basis,
    radical_power_indices,
)

logger = logging.getLogger(__name__)

_Q = sympy.Symbol("q")


@dataclass(frozen=True)
class SampleSet:
    """Exact counts at distinct supported field sizes."""

    points: tuple[tuple[int, int], ...]
    source: str = "dispatch"

    def __post_init__(self):
        qs = [q for q, _ in self.points]
        if len(set(qs)) != len(qs):
            raise InvalidRequestError("sample field sizes must be distinct")
        unsupported = [q for q in qs if q not in SUPPORTED_ORDERS]
        if unsupported:
            raise InvalidRequestError(f"unsupported field sizes in samples: {unsupported}")

    def ascending(self) -> list[tuple[int, int]]:
        return sorted(self.points)


@dataclass
class FitReport:
    """Fitted polynomial (None for no-fit) and the hold-out comparison."""

    mode: str
    degree_bound: int
    samples: list[tuple[int, int]]
    poly: Optional[PolyQ]
    holdout: list[tuple[int, int | Fraction, int, bool]] = field(default_factory=list)

    @property
    def fits(self) -> bool:
        return self.poly is not None

    @property
    def nonneg(self) -> Optional[bool]:
        return self.poly.is_nonnegative() if self.poly is not None else None

    @property
    def integral(self) -> Optional[bool]:
        return self.poly.is_integral() if self.poly is not None else None

    def to_output(self) -> FitReportOut:
        return FitReportOut(
            mode=self.mode,
            degree_bound=self.degree_bound,
            samples=[[str(q), str(v)] for q, v in self.samples],
            polynomial=str(self.poly) if self.poly is not None else None,
            coefficients=self.poly.to_json_map() if self.poly is not None else None,
            holdout=[
                HoldoutPoint(q=q, predicted=str(p), actual=str(a), match=ok)
                for q, p, a, ok in self.holdout
            ],
            nonneg=self.nonneg,
            integral=self.integral,
        )


def degree_bound(
    quiver: Quiver, d: SummandVector, mode: str = "radical", l: Optional[int] = None
) -> int:
    """Dimension of the pair space: no count can exceed q to this power."""
    if mode == "radical":
        return 2 * weighted_path_count(quiver, d, min_len=1)
    if mode == "overline":
        return weighted_path_count(quiver, d, min_len=0) + weighted_path_count(quiver, d, min_len=1)
    if mode == "weakened":
        if l is None:
            raise InvalidRequestError("weakened degree bound needs l")
        _, basis = build_basis(quiver, d, include_constants=False)
        return 2 * len(radical_power_indices(basis, l))
    raise InvalidRequestError(f"unknown counting mode '{mode}'")


def relation_is_trivial(
    quiver: Quiver,
    d: SummandVector,
    mode: str = "radical",
    l: Optional[int] = None,
    m: Optional[int] = None,
) -> bool:
    """Whether every pair of the pair space satisfies the commuting condition.

    A nonzero product e_a e_b = e_c of path basis elements always has
    e_b e_a = 0, so the condition is trivial exactly when no relevant product
    survives.
    """
    if mode == "radical":
        _, basis = build_basis(quiver, d, include_constants=False)
        return not StructureConstants.build(basis).table
    if mode == "overline":
        return weighted_path_count(quiver, d, min_len=1) == 0
    if mode == "weakened":
        _, basis = build_basis(quiver, d, include_constants=False)
        power = set(radical_power_indices(basis, l))
        table = StructureConstants.build(basis).table
        return not any(
            a in power and b in power and basis.depths[c] < m for (a, b), c in table.items()
        )
    raise InvalidRequestError(f"unknown counting mode '{mode}'")


def fit_degree_bound(
    quiver: Quiver,
    d: SummandVector,
    mode: str = "radical",
    l: Optional[int] = None,
    m: Optional[int] = None,
) -> int:
    """Degree the interpolation allows for.

    When the condition is not trivial the commuting pairs lie on the zero set
    of a nonzero quadratic, at most 2 q^(N-1) of the q^N pairs, so a
    polynomial count has degree at most N - 1.
    """
    bound = degree_bound(quiver, d, mode, l)
    return bound if relation_is_trivial(quiver, d, mode, l, m) else bound - 1


def _to_polyq(expr) -> PolyQ:
    coeffs = {}
    for (exponent,), c in sympy.Poly(expr, _Q).terms():
        rational = sympy.Rational(c)
        coeffs[exponent] = Fraction(int(rational.p), int(rational.q))
    return PolyQ(coeffs)


def interpolate(samples: SampleSet, bound: int, mode: str = "radical") -> FitReport:
    """Exact Lagrange fit on the bound+1 smallest q, checked against the rest.

    Raises:
        InsufficientSamplesError: fewer than bound+2 samples.
    """
    points = samples.ascending()
    required = bound + 2
    if len(points) < required:
        raise InsufficientSamplesError(required, len(points))

    fit_points, held_out = points[: bound + 1], points[bound + 1:]
    poly = _to_polyq(sympy.interpolate([(sympy.Integer(q), sympy.Integer(v)) for q, v in fit_points], _Q))

    holdout = []
    for q, actual in held_out:
        predicted = poly.evaluate(q)
        holdout.append((q, predicted, actual, predicted == actual))

    matched = all(ok for *_, ok in holdout)
    if not matched:
        logger.warning("Hold-out mismatch", extra={"mode": mode, "bound": bound})
    elif not poly.is_integral():
        logger.warning("Fitted polynomial has non-integer coefficients", extra={"mode": mode})
    return FitReport(
        mode=mode,
        degree_bound=bound,
        samples=points,
        poly=poly if matched else None,
        holdout=holdout,
    )


def sample_counts(
    quiver: Quiver,
    d: SummandVector,
    qs: list[int],
    mode: str = "radical",
    l: Optional[int] = None,
    m: Optional[int] = None,
    engine: str = "dispatch",
    counter: Optional[PairCounter] = None,
) -> SampleSet:
    """Exact counts at each q; dispatch applies to the radical mode only."""
    counter = counter or PairCounter()
    points = []
    for q in qs:
        if mode == "radical" and engine == "dispatch":
            value = dispatch_count(quiver, d, q, counter=counter).value
        else:
            value = counter.count(quiver, d, q, mode, l, m).value
        points.append((q, value))
    source = engine if mode == "radical" else "brute"
    return SampleSet(tuple(points), source)


def screen_conjectures(
    quiver: Quiver,
    d: SummandVector,
    qs: list[int],
    counter: Optional[PairCounter] = None,
) -> ScreenReport:
    """Fit the radical and overline counts; overline fits also get a nonnegativity verdict.

    Raises:
        InsufficientSamplesError: qs too short for either mode's bound.
    """
    counter = counter or PairCounter()
    reports = []
    for mode in ("radical", "overline"):
        bound = fit_degree_bound(quiver, d, mode)
        if len(qs) < bound + 2:
            raise InsufficientSamplesError(bound + 2, len(qs))
        samples = sample_counts(quiver, d, qs, mode, counter=counter)
        reports.append(interpolate(samples, bound, mode))

    radical, overline = reports
    if not radical.fits or not overline.fits:
        failed = [r.mode for r in reports if not r.fits]
        verdict = (
            f"NO FIT for {', '.join(failed)}: evidence against polynomiality at this size, "
            "or more likely a bug"
        )
    elif overline.nonneg:
        verdict = "polynomial; overline coefficients nonnegative"
    else:
        verdict = "polynomial; overline has a negative coefficient"
    return ScreenReport(
        canonical_hash=canonical_hash(quiver, d),
        fits=[r.to_output() for r in reports],
        verdict=verdict,
    )
