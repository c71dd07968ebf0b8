"""Strategy predicates: which rule applies next and how a finished component classifies."""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from radcount.graph.nodes import split_sink, split_source
from radcount.graph.quiver import Quiver, SummandVector, longest_path_length, weighted_path_count
from radcount.graph.state import Classification, LeafKind, RuleName

logger = logging.getLogger(__name__)

MAX_PAIRED_SPLIT_ARROWS = 6


@dataclass(frozen=True)
class SplitMove:
    """A source or sink split: vertex and the arrow ids that go to the ^A copy."""

    rule: RuleName
    vertex: str
    part: tuple[str, ...]


def find_zero_vertex(quiver: Quiver, d: SummandVector) -> Optional[str]:
    return next((v for v in quiver.vertices if d[v] == 0), None)


def component_count(quiver: Quiver) -> int:
    return nx.number_weakly_connected_components(quiver.graph) if quiver.vertices else 0


def _arrow_groups(quiver: Quiver, vertex: str) -> list[list[str]]:
    """Arrows at `vertex` grouped by the component of Q - vertex their other end lies in."""
    rest = quiver.subquiver(v for v in quiver.vertices if v != vertex)
    component_of = {}
    for n, members in enumerate(sorted(nx.weakly_connected_components(rest.graph), key=min)):
        for v in members:
            component_of[v] = n
    groups: dict[int, list[str]] = {}
    for arrow in quiver.arrows:
        if vertex in (arrow.source, arrow.target):
            other = arrow.target if arrow.source == vertex else arrow.source
            groups.setdefault(component_of[other], []).append(arrow.id)
    return [groups[k] for k in sorted(groups)]


def find_disconnecting_split(quiver: Quiver, d: SummandVector) -> Optional[SplitMove]:
    """First source or sink whose arrows reach two components of Q - v."""
    for vertex in quiver.vertices:
        if quiver.is_source(vertex):
            rule = RuleName.SOURCE_SPLIT
        elif quiver.is_sink(vertex):
            rule = RuleName.SINK_SPLIT
        else:
            continue
        groups = _arrow_groups(quiver, vertex)
        if len(groups) >= 2:
            return SplitMove(rule, vertex, tuple(groups[0]))
    return None


def _two_part_partitions(arrow_ids: list[str]):
    """Nonempty proper subsets containing the first arrow, so each partition appears once."""
    first, rest = arrow_ids[0], arrow_ids[1:]
    for size in range(len(rest)):
        for combo in itertools.combinations(rest, size):
            yield (first, *combo)


def find_paired_split(
    quiver: Quiver, d: SummandVector
) -> Optional[tuple[SplitMove, SplitMove]]:
    """A source split then a sink split that together raise the component count."""
    before = component_count(quiver)
    sources = [v for v in quiver.vertices if quiver.is_source(v)]
    sinks = [v for v in quiver.vertices if quiver.is_sink(v)]
    for source in sources:
        out_ids = [a.id for a in quiver.arrows_from(source)]
        if not 2 <= len(out_ids) <= MAX_PAIRED_SPLIT_ARROWS:
            continue
        for part_a in _two_part_partitions(out_ids):
            mid_quiver, mid_d = split_source(quiver, d, source, part_a)
            for sink in sinks:
                in_ids = [a.id for a in mid_quiver.arrows_into(sink)]
                if not 2 <= len(in_ids) <= MAX_PAIRED_SPLIT_ARROWS:
                    continue
                for part_b in _two_part_partitions(in_ids):
                    after, _ = split_sink(mid_quiver, mid_d, sink, part_b)
                    if component_count(after) > before:
                        return (
                            SplitMove(RuleName.SOURCE_SPLIT, source, part_a),
                            SplitMove(RuleName.SINK_SPLIT, sink, part_b),
                        )
    return None


def a3_ends(quiver: Quiver) -> Optional[tuple[list[str], str, list[str]]]:
    """(sources, middle, sinks) when Q is sources -> c -> sinks with no other arrows."""
    middles = [v for v in quiver.vertices if not quiver.is_source(v) and not quiver.is_sink(v)]
    if len(middles) != 1:
        return None
    (middle,) = middles
    sources = [v for v in quiver.vertices if quiver.is_source(v) and quiver.arrows_from(v)]
    sinks = [v for v in quiver.vertices if quiver.is_sink(v) and quiver.arrows_into(v)]
    if len(sources) + len(sinks) + 1 != len(quiver.vertices):
        return None
    if any(a.target != middle for s in sources for a in quiver.arrows_from(s)):
        return None
    if any(a.source != middle for t in sinks for a in quiver.arrows_into(t)):
        return None
    return sources, middle, sinks


def classify_component(quiver: Quiver, d: SummandVector) -> Classification:
    """Classify a connected component without zero vertices."""
    if len(quiver.vertices) == 1:
        return Classification(LeafKind.POINT)

    if longest_path_length(quiver) <= 1:
        is_a2 = len(quiver.vertices) == 2 and len(quiver.arrows) == 1 and all(
            d[v] == 1 for v in quiver.vertices
        )
        return Classification(
            LeafKind.RAD_SQUARE_ZERO, rad_dim=weighted_path_count(quiver, d), a2=is_a2
        )

    ends = a3_ends(quiver)
    if ends is not None:
        sources, middle, sinks = ends
        l = sum(d[s] * len(quiver.arrows_from(s)) for s in sources)
        m = sum(d[t] * len(quiver.arrows_into(t)) for t in sinks)
        return Classification(
            LeafKind.A3_SHAPE, rad_dim=weighted_path_count(quiver, d), shape=(l, d[middle], m)
        )

    return Classification(LeafKind.IRREDUCIBLE, rad_dim=weighted_path_count(quiver, d))
