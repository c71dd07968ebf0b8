"""Path bases and structure constants of End(P_{Q,d}) and its radical."""
import logging
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from radcount.config import settings
from radcount.graph.quiver import Path, Quiver, SummandVector, enumerate_paths, weighted_path_count
from radcount.schemas.errors import InvalidRequestError, PathCapExceededError
from radcount.services.finite_field import FieldTable, FqMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlotList:
    """Summand slots v_1..v_t: each vertex repeated d_v times, file vertex order."""

    slots: tuple[str, ...]

    @classmethod
    def from_summands(cls, quiver: Quiver, d: SummandVector) -> "SlotList":
        return cls(tuple(v for v in quiver.vertices for _ in range(d[v])))

    def __len__(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class BasisElement:
    """The map P(v_col) -> P(v_row) given by a path v_row ~> v_col between slots."""

    row: int
    col: int
    path: Path


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    """Ordered basis of A_{Q,d} (include_constants) or of rad A_{Q,d}.

    depths[i] is the radical depth of element i: 0 for constant paths,
    otherwise 1 + the number of interior path vertices whose summand value
    is positive. rad^l is spanned by the elements of depth >= l.
    """

    elements: tuple[BasisElement, ...]
    include_constants: bool
    depths: tuple[int, ...]
    index: dict[BasisElement, int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def non_constant_indices(self) -> list[int]:
        return [i for i, e in enumerate(self.elements) if not e.path.is_constant]


def path_depth(quiver: Quiver, d: SummandVector, path: Path) -> int:
    if path.is_constant:
        return 0
    targets = {a.id: a.target for a in quiver.arrows}
    return 1 + sum(1 for arrow_id in path.arrows[:-1] if d[targets[arrow_id]] > 0)


def build_basis(
    quiver: Quiver,
    d: SummandVector,
    include_constants: bool,
    path_cap: int | None = None,
) -> tuple[SlotList, AlgebraBasis]:
    """Enumerate the slot-pair path basis in (row, col, path) order.

    Raises:
        PathCapExceededError: weighted non-constant path count is over the cap.
    """
    cap = settings.path_cap if path_cap is None else path_cap
    weighted = weighted_path_count(quiver, d, min_len=1)
    if weighted > cap:
        raise PathCapExceededError(weighted, cap)

    slots = SlotList.from_summands(quiver, d)
    min_len = 0 if include_constants else 1
    elements = []
    for i, source in enumerate(slots.slots):
        for j, target in enumerate(slots.slots):
            for path in enumerate_paths(quiver, source, target, min_len):
                elements.append(BasisElement(i, j, path))

    depths = tuple(path_depth(quiver, d, e.path) for e in elements)
    basis = AlgebraBasis(
        elements=tuple(elements),
        include_constants=include_constants,
        depths=depths,
        index={e: n for n, e in enumerate(elements)},
    )
    logger.debug(
        "Built path basis",
        extra={"dim": basis.dim, "slots": len(slots), "include_constants": include_constants},
    )
    return slots, basis


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Sparse multiplication table e_a * e_b = e_c of a path basis.

    (i,k,c) * (k,j,p) = (i,j,cp); mismatched middle slots multiply to zero,
    and zero products are simply absent from the table.
    """

    basis: AlgebraBasis
    table: dict[tuple[int, int], int]

    @classmethod
    def build(cls, basis: AlgebraBasis) -> "StructureConstants":
        by_row: dict[int, list[int]] = defaultdict(list)
        for n, element in enumerate(basis.elements):
            by_row[element.row].append(n)

        table = {}
        for a, left in enumerate(basis.elements):
            for b in by_row.get(left.col, ()):
                right = basis.elements[b]
                product = BasisElement(left.row, right.col, left.path.concat(right.path))
                table[(a, b)] = basis.index[product]
        return cls(basis, table)

    @cached_property
    def right_factors(self) -> dict[int, list[tuple[int, int]]]:
        """b -> [(a, c)] with e_a * e_b = e_c."""
        out = defaultdict(list)
        for (a, b), c in self.table.items():
            out[b].append((a, c))
        return out

    @cached_property
    def left_factors(self) -> dict[int, list[tuple[int, int]]]:
        """b -> [(a, c)] with e_b * e_a = e_c."""
        out = defaultdict(list)
        for (b, a), c in self.table.items():
            out[b].append((a, c))
        return out

    def product(self, a: int, b: int) -> int | None:
        return self.table.get((a, b))

    def multiply(self, field_table: FieldTable, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Coordinates of x*y."""
        out = np.zeros(self.basis.dim, dtype=np.uint8)
        add, mul = field_table.add, field_table.mul
        for (a, b), c in self.table.items():
            if x[a] and y[b]:
                out[c] = add[out[c], mul[x[a], y[b]]]
        return out


@dataclass(frozen=True, eq=False)
class RadicalVector:
    """Coordinates of an algebra element in AlgebraBasis order."""

    coords: np.ndarray

    @classmethod
    def zeros(cls, dim: int) -> "RadicalVector":
        return cls(np.zeros(dim, dtype=np.uint8))

    @classmethod
    def basis_vector(cls, dim: int, index: int) -> "RadicalVector":
        coords = np.zeros(dim, dtype=np.uint8)
        coords[index] = 1
        return cls(coords)


def radical_power_indices(basis: AlgebraBasis, l: int) -> list[int]:
    """Indices spanning rad^l: depth >= l; l = 0 on a full basis gives everything."""
    if l < 0:
        raise InvalidRequestError(f"radical power must be nonnegative, got {l}")
    if basis.include_constants and l >= 1:
        raise InvalidRequestError("radical powers l >= 1 need a radical basis, not a full one")
    return [i for i, depth in enumerate(basis.depths) if depth >= l]


def lower_depth_indices(basis: AlgebraBasis, m: int) -> list[int]:
    """Radical indices of depth < m, i.e. a basis of rad / rad^m."""
    return [i for i, depth in enumerate(basis.depths) if 1 <= depth < m]


def adjoint_matrix(
    field_table: FieldTable,
    sc: StructureConstants,
    x: RadicalVector,
    domain: Sequence[int],
    codomain: Sequence[int],
) -> FqMatrix:
    """Matrix of y -> xy - yx from span(domain) to span(codomain).

    Image components outside codomain are dropped; callers choose a codomain
    that contains the image or that realizes the quotient they want.
    """
    rows = {c: r for r, c in enumerate(codomain)}
    entries = np.zeros((len(codomain), len(domain)), dtype=np.uint8)
    add, sub = field_table.add, field_table.sub
    coords = x.coords
    for col, b in enumerate(domain):
        for a, c in sc.right_factors.get(b, ()):
            if coords[a] and c in rows:
                entries[rows[c], col] = add[entries[rows[c], col], coords[a]]
        for a, c in sc.left_factors.get(b, ()):
            if coords[a] and c in rows:
                entries[rows[c], col] = sub[entries[rows[c], col], coords[a]]
    return FqMatrix(len(codomain), len(domain), entries)


@dataclass(frozen=True, eq=False)
class AdjointStencil:
    """Vectorized ad_x for a batch of x vectors over fixed index sets.

    Entry (r, s) of ad_x is x[plus] - x[minus], where plus / minus are the
    unique support positions contributing through x*e_s and e_s*x; absent
    contributions point at a padding column that is always zero.
    """

    support: tuple[int, ...]
    plus: np.ndarray
    minus: np.ndarray

    @classmethod
    def build(
        cls,
        sc: StructureConstants,
        support: Sequence[int],
        domain: Sequence[int],
        codomain: Sequence[int],
    ) -> "AdjointStencil":
        position = {a: n for n, a in enumerate(support)}
        pad = len(support)
        rows = {c: r for r, c in enumerate(codomain)}
        plus = np.full((len(codomain), len(domain)), pad, dtype=np.int64)
        minus = np.full((len(codomain), len(domain)), pad, dtype=np.int64)
        for col, b in enumerate(domain):
            for a, c in sc.right_factors.get(b, ()):
                if a in position and c in rows:
                    plus[rows[c], col] = position[a]
            for a, c in sc.left_factors.get(b, ()):
                if a in position and c in rows:
                    minus[rows[c], col] = position[a]
        return cls(tuple(support), plus, minus)

    def matrices(self, field_table: FieldTable, xs: np.ndarray) -> np.ndarray:
        """Stack of ad_x matrices for xs shape (B, len(support))."""
        padded = np.concatenate([xs, np.zeros((xs.shape[0], 1), dtype=np.uint8)], axis=1)
        return field_table.sub[padded[:, self.plus], padded[:, self.minus]]
