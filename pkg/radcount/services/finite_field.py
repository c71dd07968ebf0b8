"""Finite field arithmetic tables and batched rank/nullity over F_q."""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from radcount.schemas.errors import UnsupportedFieldError

logger = logging.getLogger(__name__)

# q -> (p, k)
SUPPORTED_ORDERS: dict[int, tuple[int, int]] = {
    2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2),
    11: (11, 1), 13: (13, 1), 16: (2, 4), 17: (17, 1), 19: (19, 1), 23: (23, 1),
    25: (5, 2), 27: (3, 3), 29: (29, 1), 31: (31, 1), 32: (2, 5),
}

# Defining polynomials, coefficients low -> high, monic.
IRREDUCIBLE_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),            # x^2 + x + 1
    8: (1, 1, 0, 1),         # x^3 + x + 1
    9: (2, 2, 1),            # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),     # x^4 + x + 1
    25: (2, 4, 1),           # x^2 + 4x + 2
    27: (1, 2, 0, 1),        # x^3 + 2x + 1
    32: (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
}


def _digits(value: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        value, r = divmod(value, p)
        out.append(r)
    return out


def _undigits(digits: list[int], p: int) -> int:
    value = 0
    for digit in reversed(digits):
        value = value * p + digit
    return value


def _poly_mulmod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    k = len(modulus) - 1
    product = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                product[i + j] = (product[i + j] + x * y) % p
    for degree in range(len(product) - 1, k - 1, -1):
        lead = product[degree]
        if lead:
            shift = degree - k
            for i, c in enumerate(modulus):
                product[shift + i] = (product[shift + i] - lead * c) % p
    return product[:k]


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Arithmetic tables of F_q on the encoding 0..q-1.

    An element is the integer whose base-p digits (least significant first)
    are the coefficients of its residue polynomial, so the prime subfield is
    0..p-1 with arithmetic mod p, 0 is zero and 1 is one.
    """

    q: int
    p: int
    k: int
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    sub: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)

    def power(self, a: int, n: int) -> int:
        result = 1
        base = a
        while n:
            if n & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            n >>= 1
        return result

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldTable:
    """Build (and memoize) the arithmetic tables for F_q.

    Args:
        q: Field size, one of SUPPORTED_ORDERS.

    Returns:
        Immutable FieldTable shared by all callers.

    Raises:
        UnsupportedFieldError: q is not a supported prime power.
    """
    if q not in SUPPORTED_ORDERS:
        raise UnsupportedFieldError(
            f"q={q} is not a supported prime power (supported: {sorted(SUPPORTED_ORDERS)})"
        )
    p, k = SUPPORTED_ORDERS[q]
    digits = [_digits(a, p, k) for a in range(q)]

    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            add[a, b] = _undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
            if k == 1:
                mul[a, b] = (a * b) % p
            else:
                mul[a, b] = _undigits(
                    _poly_mulmod(digits[a], digits[b], IRREDUCIBLE_POLYNOMIALS[q], p), p
                )

    neg = np.array([_undigits([(-x) % p for x in digits[a]], p) for a in range(q)], dtype=np.uint8)
    sub = add[:, neg]
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        (b,) = np.flatnonzero(mul[a] == 1)
        inv[a] = b

    for table in (add, mul, neg, sub, inv):
        table.setflags(write=False)
    logger.debug("Built field tables", extra={"q": q, "p": p, "k": k})
    return FieldTable(q=q, p=p, k=k, add=add, mul=mul, neg=neg, sub=sub, inv=inv)


@dataclass(frozen=True, eq=False)
class FqMatrix:
    """Dense matrix of field elements, shape (rows, cols), stored as uint8."""

    rows: int
    cols: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.rows, self.cols):
            raise ValueError(
                f"entries shape {self.entries.shape} does not match {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: list[list[int]], cols: int | None = None) -> "FqMatrix":
        if not rows:
            return cls.zeros(0, cols or 0)
        entries = np.array(rows, dtype=np.uint8)
        return cls(entries.shape[0], entries.shape[1], entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FqMatrix":
        return cls(rows, cols, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "FqMatrix":
        return cls(n, n, np.eye(n, dtype=np.uint8))

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and np.array_equal(self.entries, other.entries)

    def transpose(self) -> "FqMatrix":
        return FqMatrix(self.cols, self.rows, self.entries.T.copy())

    def permuted(self, row_order, col_order) -> "FqMatrix":
        return FqMatrix(self.rows, self.cols, self.entries[np.ix_(row_order, col_order)])


def _check_entries(field_table: FieldTable, entries: np.ndarray) -> None:
    if entries.size and int(entries.max()) >= field_table.q:
        raise ValueError(f"matrix entry out of range for q={field_table.q}")


def matrix_add(field_table: FieldTable, a: FqMatrix, b: FqMatrix) -> FqMatrix:
    return FqMatrix(a.rows, a.cols, field_table.add[a.entries, b.entries])


def matrix_scale(field_table: FieldTable, scalar: int, a: FqMatrix) -> FqMatrix:
    return FqMatrix(a.rows, a.cols, field_table.mul[scalar, a.entries])


def batch_rank(field_table: FieldTable, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices shape (B, r, c), eliminated in lockstep.

    Each column step picks, per matrix, the first row at or below the current
    rank with a nonzero entry, moves it into place, normalizes it and clears
    the entries below it.
    """
    m = np.array(mats, dtype=np.uint8, copy=True)
    batch, r, c = m.shape
    ranks = np.zeros(batch, dtype=np.int64)
    if batch == 0 or r == 0 or c == 0:
        return ranks
    _check_entries(field_table, m)

    row_ids = np.arange(r)
    batch_ids = np.arange(batch)
    for col in range(c):
        candidates = (m[:, :, col] != 0) & (row_ids[None, :] >= ranks[:, None])
        has_pivot = candidates.any(axis=1)
        if not has_pivot.any():
            continue
        sel = batch_ids[has_pivot]
        pivot_row = np.argmax(candidates[has_pivot], axis=1)
        target_row = ranks[has_pivot]

        pivots = m[sel, pivot_row].copy()
        m[sel, pivot_row] = m[sel, target_row]
        pivots = field_table.mul[field_table.inv[pivots[:, col]][:, None], pivots]
        m[sel, target_row] = pivots

        block = m[sel]
        factors = np.where(row_ids[None, :] > target_row[:, None], block[:, :, col], 0)
        block = field_table.sub[block, field_table.mul[factors[:, :, None], pivots[:, None, :]]]
        m[sel] = block
        ranks[has_pivot] += 1
    return ranks


def rank(field_table: FieldTable, matrix: FqMatrix) -> int:
    return int(batch_rank(field_table, matrix.entries[None])[0])


def nullity(field_table: FieldTable, matrix: FqMatrix) -> int:
    """cols - rank over F_q."""
    return matrix.cols - rank(field_table, matrix)


def batch_nullity(field_table: FieldTable, mats: np.ndarray) -> np.ndarray:
    return mats.shape[2] - batch_rank(field_table, mats)


def rank_by_columns(field_table: FieldTable, matrix: FqMatrix) -> int:
    """Rank by scalar column elimination; an independent check on batch_rank."""
    cols = [list(map(int, matrix.entries[:, j])) for j in range(matrix.cols)]
    _check_entries(field_table, matrix.entries)
    add, mul, neg, inv = field_table.add, field_table.mul, field_table.neg, field_table.inv
    found = 0
    for row in range(matrix.rows):
        pivot = next((j for j in range(found, len(cols)) if cols[j][row]), None)
        if pivot is None:
            continue
        cols[found], cols[pivot] = cols[pivot], cols[found]
        scale = int(inv[cols[found][row]])
        cols[found] = [int(mul[scale, x]) for x in cols[found]]
        for j in range(found + 1, len(cols)):
            factor = cols[j][row]
            if factor:
                negf = int(neg[factor])
                cols[j] = [int(add[x, mul[negf, y]]) for x, y in zip(cols[j], cols[found])]
        found += 1
    return found
