"""Tests for path bases, structure constants and adjoint maps."""
import itertools

import numpy as np
import pytest

from radcount.graph.canonical import multiplicity_matrix
from radcount.graph.quiver import opposite, path_counts, weighted_path_count
from radcount.schemas.errors import InvalidRequestError, PathCapExceededError
from radcount.services.finite_field import make_field, nullity
from radcount.services.path_algebra import (
    AdjointStencil,
    RadicalVector,
    StructureConstants,
    adjoint_matrix,
    build_basis,
    lower_depth_indices,
    radical_power_indices,
)
from tests.conftest import linear, make_instance


def test_basis_dimensions(a3):
    """dim A = 6 and dim rad = 3 for A3 (1,1,1)."""
    quiver, d = a3
    slots, full = build_basis(quiver, d, include_constants=True)
    _, rad = build_basis(quiver, d, include_constants=False)
    assert slots.slots == ("1", "2", "3")
    assert full.dim == 6
    assert rad.dim == 3
    assert len(full.non_constant_indices()) == 3


def test_basis_with_multiplicities():
    """Slots repeat vertices d_v times; dim rad equals the weighted path count."""
    quiver, d = linear(3, (2, 1, 2))
    slots, rad = build_basis(quiver, d, include_constants=False)
    assert slots.slots == ("1", "1", "2", "3", "3")
    assert rad.dim == weighted_path_count(quiver, d) == 2 + 4 + 2


def test_path_cap():
    """Too many weighted paths raise before enumeration."""
    quiver, d = linear(3, (2, 2, 2))
    with pytest.raises(PathCapExceededError):
        build_basis(quiver, d, include_constants=False, path_cap=5)


def test_structure_constants_of_a3(a3):
    """The only nonzero product in rad A3 is (1->2)(2->3) = (1->3)."""
    quiver, d = a3
    _, rad = build_basis(quiver, d, include_constants=False)
    sc = StructureConstants.build(rad)
    assert len(sc.table) == 1
    ((a, b), c), = sc.table.items()
    assert rad.elements[a].path.arrows == ("a0",)
    assert rad.elements[b].path.arrows == ("a1",)
    assert rad.elements[c].path.arrows == ("a0", "a1")
    assert sc.product(b, a) is None


def test_multiply_is_associative(a4):
    """(xy)z = x(yz) on random elements of A4."""
    quiver, d = a4
    _, basis = build_basis(quiver, d, include_constants=True)
    sc = StructureConstants.build(basis)
    f = make_field(3)
    rng = np.random.default_rng(0)
    for _ in range(10):
        x, y, z = (rng.integers(0, 3, basis.dim, dtype=np.uint8) for _ in range(3))
        assert (sc.multiply(f, sc.multiply(f, x, y), z) == sc.multiply(f, x, sc.multiply(f, y, z))).all()


def test_identity_is_sum_of_constants(a3):
    """The sum of the constant paths is the unit."""
    quiver, d = a3
    _, basis = build_basis(quiver, d, include_constants=True)
    sc = StructureConstants.build(basis)
    f = make_field(2)
    one = np.zeros(basis.dim, dtype=np.uint8)
    for i, element in enumerate(basis.elements):
        if element.path.is_constant:
            one[i] = 1
    x = np.array([1, 0, 1, 1, 1, 0], dtype=np.uint8)
    assert (sc.multiply(f, one, x) == x).all()
    assert (sc.multiply(f, x, one) == x).all()


def test_depth_skips_zero_vertices():
    """A path through a vertex with d = 0 keeps depth 1."""
    quiver, d = linear(3, (1, 0, 1))
    _, rad = build_basis(quiver, d, include_constants=False)
    assert rad.dim == 1
    assert rad.depths == (1,)
    assert radical_power_indices(rad, 2) == []


def test_radical_powers(a4):
    """rad^l of A4 is spanned by paths of length >= l."""
    quiver, d = a4
    _, rad = build_basis(quiver, d, include_constants=False)
    assert [len(radical_power_indices(rad, l)) for l in range(1, 5)] == [6, 3, 1, 0]
    assert len(lower_depth_indices(rad, 3)) == 5
    assert lower_depth_indices(rad, 1) == []


def test_radical_power_needs_radical_basis(a2):
    """Positive powers on a full basis are rejected."""
    quiver, d = a2
    _, full = build_basis(quiver, d, include_constants=True)
    assert len(radical_power_indices(full, 0)) == 3
    with pytest.raises(InvalidRequestError):
        radical_power_indices(full, 1)


def test_adjoint_matrix_matches_stencil(a4):
    """Scalar and vectorized ad_x agree, and ad_x kills x."""
    quiver, d = a4
    _, rad = build_basis(quiver, d, include_constants=False)
    sc = StructureConstants.build(rad)
    f = make_field(3)
    indices = list(range(rad.dim))
    stencil = AdjointStencil.build(sc, indices, indices, indices)
    rng = np.random.default_rng(5)
    xs = rng.integers(0, 3, size=(8, rad.dim), dtype=np.uint8)
    batch = stencil.matrices(f, xs)
    for x, mat in zip(xs, batch):
        scalar = adjoint_matrix(f, sc, RadicalVector(x), indices, indices)
        assert (scalar.entries == mat).all()
        assert not ((scalar.entries.astype(int) @ x.astype(int)) % 3).any()
        assert nullity(f, scalar) >= 1


def test_basis_vector():
    """Unit coordinate vectors."""
    v = RadicalVector.basis_vector(4, 2)
    assert v.coords.tolist() == [0, 0, 1, 0]
    assert not RadicalVector.zeros(3).coords.any()


SMALL_INSTANCES = [
    linear(3, (1, 1, 1)),
    linear(3, (2, 1, 1)),
    linear(4, (1, 0, 1, 1)),
    make_instance(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")], {"1": 1, "2": 1, "3": 1}),
    make_instance(["1", "2", "3"], [("1", "2"), ("1", "2"), ("2", "3")], {"1": 1, "2": 1, "3": 1}),
    make_instance(["1", "2", "3", "4"], [("1", "3"), ("2", "3"), ("3", "4")], {"1": 1, "2": 1, "3": 1, "4": 1}),
]


@pytest.mark.parametrize("instance", SMALL_INSTANCES)
def test_associative_on_all_basis_triples(instance):
    """(ab)c = a(bc) for every triple of basis elements."""
    _, basis = build_basis(*instance, include_constants=True)
    assert basis.dim <= 12
    sc = StructureConstants.build(basis)

    def times(a, b):
        return None if a is None or b is None else sc.product(a, b)

    for a, b, c in itertools.product(range(basis.dim), repeat=3):
        assert times(times(a, b), c) == times(a, times(b, c))


@pytest.mark.parametrize("instance", SMALL_INSTANCES)
@pytest.mark.parametrize("l", [1, 2, 3])
def test_radical_power_is_two_sided_ideal(instance, l):
    """Products with a factor of depth >= l stay at depth >= l."""
    _, basis = build_basis(*instance, include_constants=True)
    sc = StructureConstants.build(basis)
    for (a, b), c in sc.table.items():
        if basis.depths[a] >= l or basis.depths[b] >= l:
            assert basis.depths[c] >= l


@pytest.mark.parametrize("instance", SMALL_INSTANCES)
def test_weighted_path_count_formula(instance):
    """sum over k >= 1 of d^T N^k d for the arrow-multiplicity matrix N."""
    quiver, d = instance
    n = multiplicity_matrix(quiver)
    v = np.array([d[x] for x in quiver.vertices], dtype=np.int64)
    expected = 0
    power = np.eye(len(v), dtype=np.int64)
    for _ in range(len(v)):
        power = power @ n
        expected += int(v @ power @ v)
    assert weighted_path_count(quiver, d) == expected
    _, rad = build_basis(quiver, d, include_constants=False)
    assert rad.dim == expected


@pytest.mark.parametrize("instance", SMALL_INSTANCES)
def test_path_counts_under_opposite(instance):
    """Reversing arrows transposes the path counts."""
    quiver, d = instance
    counts = path_counts(quiver)
    reversed_counts = path_counts(opposite(quiver))
    assert all(reversed_counts[(v, u)] == n for (u, v), n in counts.items())
    assert weighted_path_count(opposite(quiver), d) == weighted_path_count(quiver, d)
    assert weighted_path_count(opposite(quiver), d, min_len=0) == weighted_path_count(quiver, d, min_len=0)


def test_adjoint_is_linear_in_x(a4):
    """ad_(x+y) = ad_x + ad_y and ad_(cx) = c ad_x."""
    quiver, d = a4
    _, rad = build_basis(quiver, d, include_constants=False)
    sc = StructureConstants.build(rad)
    f = make_field(5)
    indices = list(range(rad.dim))
    rng = np.random.default_rng(17)
    for _ in range(10):
        x, y = (rng.integers(0, 5, rad.dim, dtype=np.uint8) for _ in range(2))
        c = int(rng.integers(1, 5))
        ad_x = adjoint_matrix(f, sc, RadicalVector(x), indices, indices).entries
        ad_y = adjoint_matrix(f, sc, RadicalVector(y), indices, indices).entries
        ad_sum = adjoint_matrix(f, sc, RadicalVector(f.add[x, y]), indices, indices).entries
        ad_scaled = adjoint_matrix(f, sc, RadicalVector(f.mul[c, x]), indices, indices).entries
        assert (ad_sum == f.add[ad_x, ad_y]).all()
        assert (ad_scaled == f.mul[c, ad_x]).all()
