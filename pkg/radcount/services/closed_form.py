"""Exact polynomials in q and the closed-form base counts."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from radcount.graph.state import Classification, LeafKind
from radcount.schemas.errors import InvalidRequestError

logger = logging.getLogger(__name__)


class PolyQ:
    """Univariate polynomial in q with exact rational coefficients.

    Coefficients live in a dict exponent -> Fraction with zero entries
    removed, so equal polynomials have equal dicts.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int | Fraction] | None = None):
        cleaned = {}
        for exponent, c in (coeffs or {}).items():
            if exponent < 0:
                raise ValueError(f"negative exponent {exponent}")
            c = Fraction(c)
            if c:
                cleaned[int(exponent)] = c
        self._coeffs = cleaned

    @classmethod
    def constant(cls, c: int | Fraction) -> PolyQ:
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, c: int | Fraction = 1) -> PolyQ:
        return cls({exponent: c})

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, exponent: int) -> Fraction:
        return self._coeffs.get(exponent, Fraction(0))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return max(self._coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self._coeffs.values())

    def _coerce(self, other) -> PolyQ:
        if isinstance(other, PolyQ):
            return other
        if isinstance(other, (int, Rational)):
            return PolyQ.constant(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return PolyQ(out)

    __radd__ = __add__

    def __neg__(self) -> PolyQ:
        return PolyQ({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PolyQ:
        if not isinstance(n, int) or n < 0:
            raise ValueError("PolyQ powers must be nonnegative integers")
        result = PolyQ.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __call__(self, q: int | Fraction) -> int | Fraction:
        return self.evaluate(q)

    def evaluate(self, q: int | Fraction) -> int | Fraction:
        """Exact value at q; an int whenever the result is integral."""
        total = Fraction(0)
        for e, c in self._coeffs.items():
            total += c * Fraction(q) ** e
        return int(total) if total.denominator == 1 else total

    def __repr__(self) -> str:
        return f"PolyQ({self})"

    def __str__(self) -> str:
        """Descending ASCII form, e.g. 'q^5 + q^4 - q^3'; zero prints as '0'."""
        if not self._coeffs:
            return "0"
        parts = []
        for e in sorted(self._coeffs, reverse=True):
            c = self._coeffs[e]
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if e == 0:
                body = str(magnitude)
            else:
                power = "q" if e == 1 else f"q^{e}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def to_json_map(self) -> dict[str, str]:
        """{"exponent": "coefficient"} with exact coefficient strings, descending."""
        return {str(e): str(self._coeffs[e]) for e in sorted(self._coeffs, reverse=True)}


Q = PolyQ.monomial(1)


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int) -> PolyQ:
    """[n choose k]_q by the q-Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k]."""
    if n < 0 or k < 0:
        raise InvalidRequestError(f"gaussian binomial needs nonnegative arguments, got ({n}, {k})")
    if k > n:
        raise InvalidRequestError(f"gaussian binomial needs k <= n, got ({n}, {k})")
    if k == 0 or k == n:
        return PolyQ.constant(1)
    return gaussian_binomial(n - 1, k - 1) + Q**k * gaussian_binomial(n - 1, k)


@lru_cache(maxsize=None)
def a3_count_poly(l: int, d: int, m: int) -> PolyQ:
    """Commuting pairs in the radical for equioriented A3 l -> d -> m.

    x = (A, B, C) with A: l x d, C: d x m; the pair commutes iff
    A C' - A' C = 0. Stacking (C, C') into a 2d x m block and grouping by the
    rank i of that block gives

        q^(2lm) * sum_{i=max(0, 2d-l)}^{2d} q^(m i) [2d choose i]_q prod_{j<2d-i} (q^l - q^j)
    """
    if min(l, d, m) < 1:
        raise InvalidRequestError(f"a3 shape needs l, d, m >= 1, got ({l}, {d}, {m})")
    total = PolyQ()
    for i in range(max(0, 2 * d - l), 2 * d + 1):
        term = Q ** (m * i) * gaussian_binomial(2 * d, i)
        for j in range(2 * d - i):
            term = term * (Q**l - Q**j)
        total = total + term
    return Q ** (2 * l * m) * total


def base_count_poly(classification: Classification) -> PolyQ:
    """Closed form for a classified leaf.

    Raises:
        InvalidRequestError: the leaf is irreducible and has no closed form.
    """
    if classification.kind == LeafKind.POINT:
        return PolyQ.constant(1)
    if classification.kind == LeafKind.RAD_SQUARE_ZERO:
        return Q ** (2 * classification.rad_dim)
    if classification.kind == LeafKind.A3_SHAPE:
        return a3_count_poly(*classification.shape)
    raise InvalidRequestError("irreducible leaves have no closed form; count them by enumeration")
