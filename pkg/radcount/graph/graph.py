"""Normalization strategy and dispatch counting over reduction leaves."""
import logging
import time
from collections import deque
from typing import Optional

from radcount.graph.edges import (
    SplitMove,
    a3_ends,
    classify_component,
    find_disconnecting_split,
    find_paired_split,
    find_zero_vertex,
)
from radcount.graph.nodes import (
    convert_sink,
    convert_source,
    merge_sinks,
    merge_sources,
    remove_zero_vertex,
    split_components,
    split_sink,
    split_source,
)
from radcount.graph.quiver import Quiver, SummandVector
from radcount.graph.state import (
    Instance,
    LeafKind,
    Leaf,
    ReductionStep,
    ReductionTrace,
    RuleName,
)
from radcount.schemas.responses import CountResult
from radcount.services.closed_form import base_count_poly
from radcount.services.counting import PairCounter
from radcount.services.finite_field import make_field

logger = logging.getLogger(__name__)


def _apply_split(trace: ReductionTrace, instance: Instance, move: SplitMove) -> Instance:
    rule = split_source if move.rule == RuleName.SOURCE_SPLIT else split_sink
    after = rule(*instance, move.vertex, move.part)
    trace.record(
        ReductionStep(move.rule, instance, (after,), {"vertex": move.vertex, "part": list(move.part)})
    )
    logger.debug("Applied rule", extra={"rule": move.rule.value, "vertex": move.vertex})
    return after


def _components(trace: ReductionTrace, instance: Instance) -> list[Instance]:
    parts = split_components(*instance)
    if len(parts) > 1:
        trace.record(ReductionStep(RuleName.COMPONENT_SPLIT, instance, tuple(parts)))
    return parts


def _fuse_ends(trace: ReductionTrace, instance: Instance) -> Instance:
    """Convert and merge several sources (sinks) of an a3-shaped component into one."""
    quiver, d = instance
    sources, _, sinks = a3_ends(quiver)
    for ends, convert, merge, convert_rule, merge_rule in (
        (sources, convert_source, merge_sources, RuleName.SOURCE_CONVERSION, RuleName.SOURCE_MERGE),
        (sinks, convert_sink, merge_sinks, RuleName.SINK_CONVERSION, RuleName.SINK_MERGE),
    ):
        if len(ends) < 2:
            continue
        for vertex in ends:
            if d[vertex] != 1:
                after = convert(quiver, d, vertex)
                trace.record(ReductionStep(convert_rule, (quiver, d), (after,), {"vertex": vertex}))
                quiver, d = after
        keep = ends[0]
        for vertex in ends[1:]:
            after = merge(quiver, d, keep, vertex)
            trace.record(
                ReductionStep(merge_rule, (quiver, d), (after,), {"vertices": [keep, vertex]})
            )
            quiver, d = after
    return quiver, d


def normalize(quiver: Quiver, d: SummandVector) -> ReductionTrace:
    """Reduce to leaves by a terminating strategy.

    1. remove every zero vertex;
    2. split into connected components;
    3. per component, apply source/sink splits (single, or a source/sink
       pair) only when they raise the component count;
    4. classify what is left, fusing the ends of a3-shaped components.
    """
    trace = ReductionTrace()
    instance = (quiver, d)
    while (vertex := find_zero_vertex(*instance)) is not None:
        after = remove_zero_vertex(*instance, vertex)
        trace.record(ReductionStep(RuleName.ZERO_VERTEX_REMOVAL, instance, (after,), {"vertex": vertex}))
        instance = after

    pending = deque(_components(trace, instance) if instance[0].vertices else [])
    while pending:
        component = pending.popleft()
        move = find_disconnecting_split(*component)
        if move is not None:
            after = _apply_split(trace, component, move)
            pending.extendleft(reversed(_components(trace, after)))
            continue

        pair = find_paired_split(*component)
        if pair is not None:
            after = _apply_split(trace, _apply_split(trace, component, pair[0]), pair[1])
            pending.extendleft(reversed(_components(trace, after)))
            continue

        classification = classify_component(*component)
        if classification.kind == LeafKind.A3_SHAPE:
            component = _fuse_ends(trace, component)
        trace.leaves.append(Leaf(*component, classification))

    logger.debug(
        "Normalized quiver",
        extra={"steps": len(trace.steps), "leaves": len(trace.leaves), "summary": trace.summary},
    )
    return trace


def dispatch_count(
    quiver: Quiver,
    d: SummandVector,
    q: int,
    counter: Optional[PairCounter] = None,
    trace: Optional[ReductionTrace] = None,
) -> CountResult:
    """Product of leaf counts: closed forms where known, enumeration for irreducible leaves."""
    start = time.perf_counter()
    make_field(q)
    counter = counter or PairCounter()
    trace = trace or normalize(quiver, d)

    value = 1
    enumerated = 0
    for leaf in trace.leaves:
        if leaf.classification.kind == LeafKind.IRREDUCIBLE:
            result = counter.count_commuting(leaf.quiver, leaf.d, q)
            value *= result.value
            enumerated += result.dim_enumerated
        else:
            value *= base_count_poly(leaf.classification).evaluate(q)

    elapsed = time.perf_counter() - start
    logger.info(
        "Dispatch count completed",
        extra={"q": q, "leaves": len(trace.leaves), "dim_enumerated": enumerated},
    )
    return CountResult(
        value=value,
        q=q,
        dim_enumerated=enumerated,
        mode="radical",
        engine="dispatch",
        elapsed=elapsed,
    )
