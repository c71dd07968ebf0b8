"""Tests for exact polynomials and closed forms."""
import itertools
import math
import random
from fractions import Fraction

import pytest

from radcount.graph.state import Classification, LeafKind
from radcount.schemas.errors import InvalidRequestError
from radcount.services.closed_form import (
    Q,
    PolyQ,
    a3_count_poly,
    base_count_poly,
    gaussian_binomial,
)
from tests.conftest import linear


def test_format_descending():
    """Normative ASCII format."""
    assert str(Q**5 + Q**4 - Q**3) == "q^5 + q^4 - q^3"
    assert str(2 * Q**8 - Q**6) == "2*q^8 - q^6"
    assert str(PolyQ()) == "0"
    assert str(-Q + 1) == "-q + 1"
    assert str(PolyQ({2: Fraction(1, 2), 0: Fraction(-3, 2)})) == "1/2*q^2 - 3/2"


def test_arithmetic():
    """Ring operations and evaluation."""
    p = (Q + 1) ** 2
    assert p == Q**2 + 2 * Q + 1
    assert p - p == PolyQ()
    assert p.degree == 2
    assert PolyQ().degree == -1
    assert p(3) == 16
    assert p.evaluate(Fraction(1, 2)) == Fraction(9, 4)
    assert 1 - Q == PolyQ({0: 1, 1: -1})


def test_predicates():
    """Integrality and nonnegativity of coefficients."""
    assert (Q**2 + Q).is_integral()
    assert not PolyQ({1: Fraction(1, 2)}).is_integral()
    assert (Q**2 + Q).is_nonnegative()
    assert not (2 * Q**3 - Q**2).is_nonnegative()
    assert PolyQ().is_zero()


def test_json_map():
    """Exponent to coefficient strings, descending."""
    assert (2 * Q**8 - Q**6).to_json_map() == {"8": "2", "6": "-1"}


def test_gaussian_binomial():
    """[4 choose 2]_q = q^4 + q^3 + 2q^2 + q + 1."""
    assert gaussian_binomial(4, 2) == Q**4 + Q**3 + 2 * Q**2 + Q + 1
    assert gaussian_binomial(5, 0) == PolyQ.constant(1)
    assert gaussian_binomial(3, 1)(2) == 7
    with pytest.raises(InvalidRequestError):
        gaussian_binomial(2, 3)


@pytest.mark.parametrize(
    "shape,expected",
    [((1, 1, 1), "q^5 + q^4 - q^3"), ((2, 1, 1), "2*q^8 - q^6")],
)
def test_a3_count_poly(shape, expected):
    """Closed forms for small shapes."""
    assert str(a3_count_poly(*shape)) == expected


def test_a3_count_poly_symmetry():
    """Reversing the arrows swaps l and m."""
    assert a3_count_poly(1, 2, 2) == a3_count_poly(2, 2, 1)


@pytest.mark.parametrize("shape", list(itertools.product((1, 2), repeat=3)))
@pytest.mark.parametrize("q", [2, 3])
def test_a3_count_poly_matches_enumeration(counter, shape, q):
    """The closed form agrees with brute force on every (l, d, m) in {1, 2}^3."""
    assert a3_count_poly(*shape).evaluate(q) == counter.count_commuting(*linear(3, shape), q).value


def test_a3_count_poly_rejects_zero():
    """All multiplicities must be positive."""
    with pytest.raises(InvalidRequestError):
        a3_count_poly(0, 1, 1)


def test_base_count_poly():
    """Leaf closed forms."""
    assert base_count_poly(Classification(LeafKind.POINT)) == PolyQ.constant(1)
    assert base_count_poly(Classification(LeafKind.RAD_SQUARE_ZERO, rad_dim=3)) == Q**6
    assert base_count_poly(Classification(LeafKind.A3_SHAPE, shape=(1, 1, 1))) == a3_count_poly(1, 1, 1)
    with pytest.raises(InvalidRequestError):
        base_count_poly(Classification(LeafKind.IRREDUCIBLE))


@pytest.mark.parametrize("n", range(0, 8))
def test_gaussian_binomial_symmetry_and_q_one(n):
    """[n, k] = [n, n-k], and at q = 1 it is the ordinary binomial."""
    for k in range(n + 1):
        poly = gaussian_binomial(n, k)
        assert poly == gaussian_binomial(n, n - k)
        assert poly.evaluate(1) == math.comb(n, k)
        assert poly.is_integral() and poly.is_nonnegative()


def _random_poly(rng):
    return PolyQ({e: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for e in range(rng.randint(0, 5))})


def test_multiplication_matches_evaluation():
    """(fg)(x) = f(x) g(x) and (f + g)(x) = f(x) + g(x) at rational points."""
    rng = random.Random(2)
    for _ in range(50):
        f, g = _random_poly(rng), _random_poly(rng)
        x = Fraction(rng.randint(-7, 7), rng.randint(1, 4))
        assert (f * g).evaluate(x) == f.evaluate(x) * g.evaluate(x)
        assert (f + g).evaluate(x) == f.evaluate(x) + g.evaluate(x)
        assert (f * g).degree == (-1 if f.is_zero() or g.is_zero() else f.degree + g.degree)
