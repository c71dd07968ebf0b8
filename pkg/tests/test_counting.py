"""Tests for exact commuting-pair counts."""
import random

import pytest

from radcount.schemas.errors import BudgetExceededError, InvalidRequestError, UnsupportedFieldError
from radcount.services.counting import PairCounter
from radcount.services.path_algebra import build_basis, radical_power_indices
from radcount.services.verification import random_instance
from tests.conftest import linear, make_instance


@pytest.mark.parametrize("q,expected", [(2, 4), (3, 9), (4, 16), (5, 25)])
def test_a2_is_q_squared(counter, a2, q, expected):
    """rad of A2 is one-dimensional with zero square."""
    assert counter.count_commuting(*a2, q).value == expected


def test_a3_at_q2(counter, a3):
    """A3 (1,1,1) at q=2 gives q^5 + q^4 - q^3 = 40."""
    result = counter.count_commuting(*a3, 2)
    assert result.value == 40
    assert result.dim_enumerated == 3
    assert result.mode == "radical"


def test_a3_with_multiplicity(counter):
    """A3 (2,1,1) at q=2 gives 2q^8 - q^6 = 448."""
    assert counter.count_commuting(*linear(3, (2, 1, 1)), 2).value == 448


def test_a3_at_q3(counter, a3):
    """243 + 81 - 27."""
    assert counter.count_commuting(*a3, 3).value == 297


def test_a4_matches_unitriangular_classes(counter, a4):
    """k(U_4(F_2)) = 16 and |U_4(F_2)| = 64."""
    assert counter.count_commuting(*a4, 2).value == 16 * 64


def test_single_vertex(counter, point):
    """rad is zero: exactly one pair."""
    assert counter.count_commuting(*point, 3).value == 1
    assert counter.count_overline(*point, 3).value == 3


def test_zero_summands_give_one(counter):
    """d = 0 everywhere means End(P) = 0."""
    instance = linear(3, (0, 0, 0))
    assert counter.count_commuting(*instance, 2).value == 1
    assert counter.count_overline(*instance, 2).value == 1


def test_through_zero_vertex(counter):
    """A3 with d = (1,0,1) counts like A2."""
    assert counter.count_commuting(*linear(3, (1, 0, 1)), 2).value == 4


def test_overline_a2(counter, a2):
    """A x rad for A2 is 2q^3 - q^2."""
    assert counter.count_overline(*a2, 2).value == 12
    assert counter.count_overline(*a2, 3).value == 45


def test_weakened_trivial_quotient(counter, a3):
    """Commutators of rad always lie in rad^2, so every pair counts."""
    result = counter.count_weakened(*a3, 1, 2, 2)
    assert result.value == 64
    assert (result.l, result.m) == (1, 2)


def test_weakened_m3_equals_radical(counter, a3):
    """rad^3 = 0 for A3, so m = 3 is plain commutation."""
    assert counter.count_weakened(*a3, 1, 3, 2).value == 40


def test_weakened_rad2(counter, a4):
    """rad^2 of A4 squares into rad^4 = 0, so all pairs of rad^2 commute."""
    assert counter.count_weakened(*a4, 2, 5, 2).value == 2**6


def test_weakened_rejects_bad_powers(counter, a3):
    """l must be positive."""
    with pytest.raises(InvalidRequestError):
        counter.count_weakened(*a3, 0, 1, 2)


@pytest.mark.parametrize(
    "instance",
    [
        linear(3, (1, 1, 1)),
        linear(3, (1, 2, 1)),
        make_instance(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")], {"1": 1, "2": 1, "3": 1}),
    ],
)
@pytest.mark.parametrize("q", [2, 3])
def test_projective_sum_matches_full_enumeration(counter, instance, q):
    """Enumerating projective representatives loses nothing."""
    full = counter.count_commuting(*instance, q, projective=False).value
    assert counter.count_commuting(*instance, q).value == full


@pytest.mark.parametrize("mode,l,m", [("radical", None, None), ("overline", None, None), ("weakened", 1, 3)])
def test_naive_oracle_agrees(counter, a3, mode, l, m):
    """Direct pair enumeration matches the fibered count."""
    naive = counter.naive_pair_count(*a3, 2, mode, l, m)
    assert naive.value == counter.count(*a3, 2, mode, l, m).value
    assert naive.engine == "naive"


def test_budget_exceeded(a4):
    """The error carries q^D."""
    with pytest.raises(BudgetExceededError) as exc_info:
        PairCounter(budget=10, jobs=1).count_commuting(*a4, 2)
    assert exc_info.value.required == 64
    assert exc_info.value.exit_code == 3


def test_unsupported_q(counter, a2):
    """Only supported prime powers."""
    with pytest.raises(UnsupportedFieldError):
        counter.count_commuting(*a2, 6)


def test_extension_field_count(counter, a3):
    """Counts over F_4 follow the same polynomial."""
    assert counter.count_commuting(*a3, 4).value == 4**5 + 4**4 - 4**3


def test_worker_pool_gives_same_answer(a4):
    """Chunked parallel enumeration is deterministic."""
    serial = PairCounter(jobs=1, chunk_size=16).count_commuting(*a4, 3).value
    parallel = PairCounter(jobs=2, chunk_size=16).count_commuting(*a4, 3).value
    assert serial == parallel == 57 * 3**6


def test_count_dispatches_on_mode(counter, a2):
    """Unknown modes are rejected."""
    with pytest.raises(InvalidRequestError):
        counter.count(*a2, 2, "bogus")


def _random_instances(count, seed):
    rng = random.Random(seed)
    return [random_instance(rng, max_vertices=4, max_rad_dim=6) for _ in range(count)]


@pytest.mark.parametrize("l", [1, 2])
def test_weakened_trivial_when_m_at_most_2l(counter, l):
    """[rad^l, rad^l] lies in rad^(2l), so every pair counts when m <= 2l."""
    for quiver, d in _random_instances(12, seed=l):
        _, rad = build_basis(quiver, d, include_constants=False)
        pairs = 2**(2 * len(radical_power_indices(rad, l)))
        for m in range(1, 2 * l + 1):
            assert counter.count_weakened(quiver, d, l, m, 2).value == pairs


@pytest.mark.parametrize("q", [2, 3])
def test_weakened_monotone_in_m(counter, q):
    """A smaller target ideal rad^m can only lose pairs."""
    for quiver, d in _random_instances(8, seed=10 + q):
        counts = [counter.count_weakened(quiver, d, 1, m, q).value for m in range(1, 6)]
        assert counts == sorted(counts, reverse=True)
        assert counts[-1] == counter.count_commuting(quiver, d, q).value


@pytest.mark.parametrize("field", ["budget", "jobs", "chunk_size", "path_cap"])
def test_explicit_zero_is_rejected(field):
    """Zero is not the same as unset."""
    with pytest.raises(InvalidRequestError):
        PairCounter(**{field: 0})


def test_budget_above_int64_range_is_rejected():
    """Enumeration indices must fit in int64."""
    with pytest.raises(InvalidRequestError):
        PairCounter(budget=2**63)
    assert PairCounter(budget=2**62).budget == 2**62
