"""Conjugacy classes of unitriangular groups by explicit orbit counting."""
import logging

import numpy as np

from radcount.schemas.errors import UnsupportedRangeError

logger = logging.getLogger(__name__)

MAX_N = 5
SUPPORTED_Q = (2, 3)


class UnionFind:
    """Disjoint sets over 0..size-1 with union by rank."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.components = size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        self.components -= 1


def _upper_positions(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _encode(mats: np.ndarray, positions: list[tuple[int, int]], q: int) -> np.ndarray:
    codes = np.zeros(mats.shape[0], dtype=np.int64)
    for i, j in reversed(positions):
        codes = codes * q + mats[:, i, j]
    return codes


def count_conjugacy_classes_Un(n: int, q: int) -> int:  # noqa: N802
    """k(U_n(F_q)): orbits of U_n acting on itself by conjugation.

    Every element is encoded as the base-q integer of its strictly upper
    entries; conjugation by the generators I + E_{i,i+1} links elements in a
    union-find, and the number of classes is the number of roots.

    Raises:
        UnsupportedRangeError: n outside 1..5 or q not in {2, 3}.
    """
    if not 1 <= n <= MAX_N or q not in SUPPORTED_Q:
        raise UnsupportedRangeError(
            f"unitriangular oracle supports 1 <= n <= {MAX_N} and q in {SUPPORTED_Q}, got n={n}, q={q}"
        )
    positions = _upper_positions(n)
    size = q ** len(positions)

    mats = np.zeros((size, n, n), dtype=np.int64)
    diagonal = np.arange(n)
    mats[:, diagonal, diagonal] = 1
    codes = np.arange(size, dtype=np.int64)
    for t, (i, j) in enumerate(positions):
        mats[:, i, j] = (codes // q**t) % q

    classes = UnionFind(size)
    for k in range(n - 1):
        g = np.eye(n, dtype=np.int64)
        g[k, k + 1] = 1
        g_inv = np.eye(n, dtype=np.int64)
        g_inv[k, k + 1] = q - 1
        conjugates = (g @ mats @ g_inv) % q
        for x, y in zip(range(size), _encode(conjugates, positions, q).tolist()):
            classes.union(x, y)

    logger.debug("Counted unitriangular classes", extra={"n": n, "q": q, "group_order": size})
    return classes.components
