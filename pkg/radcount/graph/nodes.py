"""Count-preserving rewrite rules on (Quiver, SummandVector) pairs.

Every rule checks its hypotheses and raises RuleHypothesisError when they
fail. Sink variants are the source variants conjugated by arrow reversal.
"""
import logging
from collections.abc import Collection

from radcount.graph.quiver import (
    Arrow,
    Quiver,
    SummandVector,
    connected_components,
    opposite,
)
from radcount.graph.state import Instance
from radcount.schemas.errors import RuleHypothesisError

logger = logging.getLogger(__name__)


def _fresh_arrow_id(taken: set[str], base: str) -> str:
    candidate, n = base, 2
    while candidate in taken:
        candidate = f"{base}~{n}"
        n += 1
    taken.add(candidate)
    return candidate


def _require_source(quiver: Quiver, vertex: str) -> None:
    quiver.require_vertex(vertex)
    if not quiver.is_source(vertex):
        raise RuleHypothesisError(f"vertex '{vertex}' is not a source")


def reverse_arrows(quiver: Quiver, d: SummandVector) -> Instance:
    """The opposite quiver with the same summand vector."""
    return opposite(quiver), d


def remove_zero_vertex(quiver: Quiver, d: SummandVector, vertex: str) -> Instance:
    """Delete a vertex with d_v = 0, replacing each length-two path through it by one arrow.

    The arrow for alpha (into v) followed by beta (out of v) is named
    "<alpha>.<beta>".
    """
    quiver.require_vertex(vertex)
    if d[vertex] != 0:
        raise RuleHypothesisError(f"zero-vertex removal needs d['{vertex}'] = 0, got {d[vertex]}")

    kept = [a for a in quiver.arrows if vertex not in (a.source, a.target)]
    taken = {a.id for a in kept}
    composites = [
        Arrow(alpha.source, beta.target, _fresh_arrow_id(taken, f"{alpha.id}.{beta.id}"))
        for alpha in quiver.arrows_into(vertex)
        for beta in quiver.arrows_from(vertex)
    ]
    vertices = tuple(v for v in quiver.vertices if v != vertex)
    logger.debug("Removed zero vertex", extra={"vertex": vertex, "composites": len(composites)})
    return Quiver(vertices, tuple(kept + composites)), d.restrict(vertices)


def split_components(quiver: Quiver, d: SummandVector) -> list[Instance]:
    """Connected components; the count is the product over them."""
    return connected_components(quiver, d)


def convert_source(quiver: Quiver, d: SummandVector, vertex: str) -> Instance:
    """Set d_v to 1 at a source v, replacing each arrow at v by d_v parallel copies "<a>#k"."""
    _require_source(quiver, vertex)
    copies = d[vertex]
    if copies == 1:
        return quiver, d

    arrows = []
    for arrow in quiver.arrows:
        if arrow.source == vertex:
            arrows.extend(
                Arrow(arrow.source, arrow.target, f"{arrow.id}#{k}") for k in range(1, copies + 1)
            )
        else:
            arrows.append(arrow)
    logger.debug("Converted source", extra={"vertex": vertex, "copies": copies})
    return Quiver(quiver.vertices, tuple(arrows)), SummandVector({**d, vertex: 1})


def convert_sink(quiver: Quiver, d: SummandVector, vertex: str) -> Instance:
    quiver.require_vertex(vertex)
    if not quiver.is_sink(vertex):
        raise RuleHypothesisError(f"vertex '{vertex}' is not a sink")
    converted, d_out = convert_source(opposite(quiver), d, vertex)
    return opposite(converted), d_out


def split_source(
    quiver: Quiver, d: SummandVector, vertex: str, part: Collection[str]
) -> Instance:
    """Replace source v by v^A (arrows in `part`) and v^B (the other arrows), both with d_v.

    Raises:
        RuleHypothesisError: v is not a source or `part` does not split its arrows
            into two nonempty sets.
    """
    _require_source(quiver, vertex)
    at_vertex = {a.id for a in quiver.arrows_from(vertex)}
    part = set(part)
    if not part <= at_vertex:
        raise RuleHypothesisError(f"arrows {sorted(part - at_vertex)} do not start at '{vertex}'")
    if not part or part == at_vertex:
        raise RuleHypothesisError(f"partition of the arrows at '{vertex}' needs two nonempty parts")

    name_a = quiver.fresh_vertex_id(f"{vertex}^A")
    name_b = quiver.fresh_vertex_id(f"{vertex}^B")
    vertices = []
    for v in quiver.vertices:
        vertices.extend([name_a, name_b] if v == vertex else [v])
    arrows = tuple(
        Arrow(name_a if a.id in part else name_b, a.target, a.id) if a.source == vertex else a
        for a in quiver.arrows
    )
    values = {v: d[v] for v in quiver.vertices if v != vertex}
    values[name_a] = values[name_b] = d[vertex]
    logger.debug("Split source", extra={"vertex": vertex, "part": sorted(part)})
    split = Quiver(tuple(vertices), arrows)
    return split, SummandVector(values).ordered(split)


def split_sink(
    quiver: Quiver, d: SummandVector, vertex: str, part: Collection[str]
) -> Instance:
    quiver.require_vertex(vertex)
    if not quiver.is_sink(vertex):
        raise RuleHypothesisError(f"vertex '{vertex}' is not a sink")
    split, d_out = split_source(opposite(quiver), d, vertex, part)
    return opposite(split), d_out


def merge_sources(quiver: Quiver, d: SummandVector, first: str, second: str) -> Instance:
    """Fuse two sources with equal d into the one listed earlier, uniting their arrows."""
    if first == second:
        raise RuleHypothesisError("merge needs two distinct vertices")
    _require_source(quiver, first)
    _require_source(quiver, second)
    if d[first] != d[second]:
        raise RuleHypothesisError(
            f"merge needs equal summand values, got d['{first}']={d[first]}, d['{second}']={d[second]}"
        )
    order = quiver.vertices
    keep, drop = sorted((first, second), key=order.index)
    arrows = tuple(Arrow(keep, a.target, a.id) if a.source == drop else a for a in quiver.arrows)
    vertices = tuple(v for v in order if v != drop)
    logger.debug("Merged sources", extra={"kept": keep, "dropped": drop})
    return Quiver(vertices, arrows), d.restrict(vertices)


def merge_sinks(quiver: Quiver, d: SummandVector, first: str, second: str) -> Instance:
    for v in (first, second):
        quiver.require_vertex(v)
        if not quiver.is_sink(v):
            raise RuleHypothesisError(f"vertex '{v}' is not a sink")
    merged, d_out = merge_sources(opposite(quiver), d, first, second)
    return opposite(merged), d_out
