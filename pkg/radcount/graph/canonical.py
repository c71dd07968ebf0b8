"""Exact canonical labeling of small quivers with summand vectors, used as cache and dedup key."""
import hashlib
import json
from collections.abc import Sequence

import numpy as np

from radcount.graph.quiver import Quiver, SummandVector

Encoding = tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]


def multiplicity_matrix(quiver: Quiver) -> np.ndarray:
    """Arrow-multiplicity matrix N with N[i, j] = #arrows v_i -> v_j in vertex order."""
    index = {v: i for i, v in enumerate(quiver.vertices)}
    n = len(quiver.vertices)
    matrix = np.zeros((n, n), dtype=np.int64)
    for arrow in quiver.arrows:
        matrix[index[arrow.source], index[arrow.target]] += 1
    return matrix


def _rank(keys: Sequence) -> list[int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [order[key] for key in keys]


def _refine(matrix: np.ndarray, colors: list[int]) -> list[int]:
    """Iterated degree refinement: split cells by neighbor color multisets until stable."""
    n = len(colors)
    while True:
        signatures = []
        for v in range(n):
            out_sig = tuple(sorted((colors[w], int(matrix[v, w])) for w in range(n) if matrix[v, w]))
            in_sig = tuple(sorted((colors[w], int(matrix[w, v])) for w in range(n) if matrix[w, v]))
            signatures.append((colors[v], out_sig, in_sig))
        refined = _rank(signatures)
        if len(set(refined)) == len(set(colors)):
            return refined
        colors = refined


def _encode(matrix: np.ndarray, weights: list[int], colors: list[int]) -> Encoding:
    order = sorted(range(len(colors)), key=colors.__getitem__)
    permuted = matrix[np.ix_(order, order)]
    return tuple(weights[v] for v in order), tuple(tuple(int(x) for x in row) for row in permuted)


def _search(matrix: np.ndarray, weights: list[int], colors: list[int]) -> Encoding:
    colors = _refine(matrix, colors)
    if len(set(colors)) == len(colors):
        return _encode(matrix, weights, colors)

    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = min(c for c, members in cells.items() if len(members) > 1)

    best = None
    tried = set()
    for v in cells[target]:
        # twins (identical rows and columns) are exchanged by an automorphism
        twin_key = (matrix[v].tobytes(), matrix[:, v].tobytes())
        if twin_key in tried:
            continue
        tried.add(twin_key)
        individualized = [2 * c + (0 if w == v else 1) for w, c in enumerate(colors)]
        candidate = _search(matrix, weights, individualized)
        if best is None or candidate < best:
            best = candidate
    return best


def canonical_form(quiver: Quiver, d: SummandVector) -> Encoding:
    """Lexicographically least (d list, multiplicity matrix) over all labelings reached by the search.

    Initial colors are (d_v, in-degree, out-degree); refinement and
    individualization only ever compare colors, so the result does not depend
    on vertex names or file order.
    """
    matrix = multiplicity_matrix(quiver)
    weights = [d[v] for v in quiver.vertices]
    initial = [
        (weights[i], int(matrix[:, i].sum()), int(matrix[i].sum()))
        for i in range(len(weights))
    ]
    return _search(matrix, weights, _rank(initial))


def canonical_hash(quiver: Quiver, d: SummandVector) -> str:
    """sha256 hex digest of the canonical form."""
    weights, rows = canonical_form(quiver, d)
    payload = json.dumps({"d": list(weights), "arrows": [list(r) for r in rows]}, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
