"""Faithfulness of End(P_{Q,d}) on the vector space at the only sink."""
import logging
import random

import numpy as np

from radcount.graph.quiver import Arrow, Quiver, SummandVector, enumerate_paths
from radcount.schemas.errors import InvalidRequestError
from radcount.services.finite_field import FqMatrix, make_field, nullity
from radcount.services.path_algebra import build_basis

logger = logging.getLogger(__name__)


def only_sink(quiver: Quiver) -> str:
    sinks = [v for v in quiver.vertices if quiver.is_sink(v)]
    if len(sinks) != 1:
        raise InvalidRequestError(f"quiver must have exactly one sink, found {len(sinks)}")
    return sinks[0]


def projection_nullity(quiver: Quiver, d: SummandVector, q: int) -> int:
    """Nullity over F_q of A_{Q,d} -> End(V_n), f -> f_n, where n is the only sink.

    V_n has basis (s, p) for summand slots s and paths p: v_s ~> n; the basis
    element (i, j, c) sends (j, p) to (i, cp) and kills the other basis vectors.
    """
    field = make_field(q)
    sink = only_sink(quiver)
    slots, basis = build_basis(quiver, d, include_constants=True)

    vectors = [
        (s, path)
        for s, vertex in enumerate(slots.slots)
        for path in enumerate_paths(quiver, vertex, sink)
    ]
    position = {v: n for n, v in enumerate(vectors)}
    size = len(vectors)

    matrix = np.zeros((size * size, basis.dim), dtype=np.uint8)
    for col, element in enumerate(basis.elements):
        for s, path in vectors:
            if s != element.col:
                continue
            image = position[(element.row, element.path.concat(path))]
            matrix[image * size + position[(s, path)], col] = 1

    result = nullity(field, FqMatrix(size * size, basis.dim, matrix))
    logger.debug(
        "Projection nullity",
        extra={"dim_algebra": basis.dim, "dim_sink_space": size, "nullity": result},
    )
    return result


def random_single_sink_quiver(
    rng: random.Random, max_vertices: int = 4, max_d: int = 2, extra_arrow_rate: float = 0.3
) -> tuple[Quiver, SummandVector]:
    """Vertices "1".."n", arrows i -> j only for i < j, every i < n has an outgoing arrow."""
    n = rng.randint(1, max_vertices)
    vertices = tuple(str(i) for i in range(1, n + 1))
    arrows = []
    for i in range(1, n):
        targets = [rng.randint(i + 1, n)]
        targets += [j for j in range(i + 1, n + 1) if rng.random() < extra_arrow_rate]
        for j in sorted(targets):
            arrows.append(Arrow(str(i), str(j), f"a{len(arrows)}"))
    d = SummandVector({v: rng.randint(0, max_d) for v in vertices})
    return Quiver(vertices, tuple(arrows)), d
