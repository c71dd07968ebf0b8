"""Quiver and summand-vector data model, path enumeration and structural queries."""
from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property, lru_cache
from os import PathLike

import networkx as nx
from pydantic import ValidationError

from radcount.schemas.errors import QuiverValidationError
from radcount.schemas.requests import QuiverFile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    """An arrow source -> target with an opaque, quiver-unique id."""

    source: str
    target: str
    id: str


@dataclass(frozen=True)
class Path:
    """A path listed left to right from start to end; no arrows means the constant path e_start."""

    start: str
    end: str
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_constant(self) -> bool:
        return not self.arrows

    def concat(self, other: Path) -> Path:
        """The path cp: this path followed by `other`."""
        if self.end != other.start:
            raise ValueError(f"cannot compose path ending at {self.end} with path starting at {other.start}")
        return Path(self.start, other.end, self.arrows + other.arrows)


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic multidigraph with named vertices; parallel arrows allowed.

    Validation happens at construction: duplicate vertex or arrow ids, arrows
    touching unknown vertices and directed cycles all raise
    QuiverValidationError.
    """

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverValidationError("duplicate vertex id")
        seen_ids = set()
        known = set(self.vertices)
        for arrow in self.arrows:
            if arrow.id in seen_ids:
                raise QuiverValidationError(f"duplicate arrow id '{arrow.id}'")
            seen_ids.add(arrow.id)
            for endpoint in (arrow.source, arrow.target):
                if endpoint not in known:
                    raise QuiverValidationError(
                        f"arrow '{arrow.id}' references unknown vertex '{endpoint}'"
                    )
        if not nx.is_directed_acyclic_graph(self.graph):
            cycle = nx.find_cycle(self.graph)
            path = " -> ".join(str(edge[0]) for edge in cycle) + f" -> {cycle[0][0]}"
            raise QuiverValidationError(f"quiver has a cycle: {path}")

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        """networkx view keyed by arrow id."""
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            g.add_edge(arrow.source, arrow.target, key=arrow.id)
        return g

    @cached_property
    def _outgoing(self) -> dict[str, tuple[Arrow, ...]]:
        out = defaultdict(list)
        for arrow in self.arrows:
            out[arrow.source].append(arrow)
        return {v: tuple(out[v]) for v in self.vertices}

    @cached_property
    def _incoming(self) -> dict[str, tuple[Arrow, ...]]:
        inc = defaultdict(list)
        for arrow in self.arrows:
            inc[arrow.target].append(arrow)
        return {v: tuple(inc[v]) for v in self.vertices}

    def require_vertex(self, vertex: str) -> None:
        if vertex not in self._outgoing:
            raise QuiverValidationError(f"unknown vertex '{vertex}'")

    def arrows_from(self, vertex: str) -> tuple[Arrow, ...]:
        self.require_vertex(vertex)
        return self._outgoing[vertex]

    def arrows_into(self, vertex: str) -> tuple[Arrow, ...]:
        self.require_vertex(vertex)
        return self._incoming[vertex]

    def is_source(self, vertex: str) -> bool:
        return not self.arrows_into(vertex)

    def is_sink(self, vertex: str) -> bool:
        return not self.arrows_from(vertex)

    def topological_order(self) -> list[str]:
        position = {v: i for i, v in enumerate(self.vertices)}
        return list(nx.lexicographical_topological_sort(self.graph, key=position.__getitem__))

    def subquiver(self, vertices: Iterable[str]) -> Quiver:
        """Full subquiver on `vertices`, keeping file order."""
        keep = set(vertices)
        return Quiver(
            tuple(v for v in self.vertices if v in keep),
            tuple(a for a in self.arrows if a.source in keep and a.target in keep),
        )

    def fresh_vertex_id(self, base: str) -> str:
        """`base` if unused, else `base` with the smallest free numeric suffix."""
        if base not in self._outgoing:
            return base
        n = 2
        while f"{base}{n}" in self._outgoing:
            n += 1
        return f"{base}{n}"


class SummandVector(Mapping[str, int]):
    """Immutable map vertex id -> number of copies of the indecomposable projective."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, int]):
        for vertex, n in values.items():
            if not isinstance(n, int) or n < 0:
                raise QuiverValidationError(f"summand entry for '{vertex}' must be a nonnegative integer, got {n!r}")
        self._values = dict(values)

    def __getitem__(self, vertex: str) -> int:
        return self._values[vertex]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __hash__(self) -> int:
        return hash(frozenset(self._values.items()))

    def __repr__(self) -> str:
        return f"SummandVector({self._values!r})"

    @property
    def total(self) -> int:
        return sum(self._values.values())

    def restrict(self, vertices: Iterable[str]) -> SummandVector:
        return SummandVector({v: self._values[v] for v in vertices})

    def ordered(self, quiver: Quiver) -> SummandVector:
        """Same entries, iterated in the quiver's vertex order."""
        return self.restrict(quiver.vertices)


def check_pair(quiver: Quiver, d: SummandVector) -> None:
    """Summand vector keys must be exactly the vertex set."""
    if set(d) != set(quiver.vertices):
        missing = sorted(set(quiver.vertices) - set(d))
        extra = sorted(set(d) - set(quiver.vertices))
        raise QuiverValidationError(
            f"summand vector does not match vertices (missing {missing}, unknown {extra})"
        )


def quiver_from_file(model: QuiverFile) -> tuple[Quiver, SummandVector]:
    """Build the validated pair; arrow ids are assigned a0, a1, ... in file order."""
    arrows = tuple(
        Arrow(source, target, f"a{index}") for index, (source, target) in enumerate(model.arrows)
    )
    quiver = Quiver(tuple(model.vertices), arrows)
    d = SummandVector(model.d)
    check_pair(quiver, d)
    return quiver, d.ordered(quiver)


def quiver_to_file(quiver: Quiver, d: SummandVector) -> QuiverFile:
    return QuiverFile(
        vertices=list(quiver.vertices),
        arrows=[(a.source, a.target) for a in quiver.arrows],
        d={v: d[v] for v in quiver.vertices},
    )


def parse_quiver(text: str | bytes) -> tuple[Quiver, SummandVector]:
    """Parse quiver file content into a validated (Quiver, SummandVector) pair."""
    try:
        model = QuiverFile.model_validate_json(text)
    except ValidationError as e:
        raise QuiverValidationError(f"malformed quiver file: {e.errors()[0]['msg']}") from e
    return quiver_from_file(model)


def load_quiver(path: str | PathLike) -> tuple[Quiver, SummandVector]:
    """Read and parse a quiver file."""
    try:
        with open(path, "rb") as handle:
            text = handle.read()
    except OSError as e:
        raise QuiverValidationError(f"cannot read quiver file {path}: {e.strerror}") from e
    return parse_quiver(text)


def dump_quiver(quiver: Quiver, d: SummandVector) -> str:
    """Serialize to the quiver file format (arrow ids are not part of the format)."""
    return quiver_to_file(quiver, d).model_dump_json()


@lru_cache(maxsize=1024)
def _paths_from(quiver: Quiver, start: str) -> dict[str, tuple[Path, ...]]:
    found: dict[str, list[Path]] = defaultdict(list)
    stack = [(start, ())]
    while stack:
        vertex, arrows = stack.pop()
        found[vertex].append(Path(start, vertex, arrows))
        for arrow in quiver.arrows_from(vertex):
            stack.append((arrow.target, arrows + (arrow.id,)))
    return {v: tuple(sorted(paths, key=lambda p: p.arrows)) for v, paths in found.items()}


def enumerate_paths(quiver: Quiver, source: str, target: str, min_len: int = 0) -> list[Path]:
    """All paths source ~> target of length >= min_len, ordered by arrow-id sequence."""
    quiver.require_vertex(source)
    quiver.require_vertex(target)
    if min_len < 0:
        raise ValueError("min_len must be nonnegative")
    return [p for p in _paths_from(quiver, source).get(target, ()) if p.length >= min_len]


@lru_cache(maxsize=1024)
def path_counts(quiver: Quiver) -> dict[tuple[str, str], int]:
    """Number of paths u ~> v including constant ones, by dynamic programming."""
    counts: dict[tuple[str, str], int] = {}
    for u in reversed(quiver.topological_order()):
        for v in quiver.vertices:
            total = 1 if u == v else 0
            for arrow in quiver.arrows_from(u):
                total += counts[(arrow.target, v)]
            counts[(u, v)] = total
    return counts


def weighted_path_count(quiver: Quiver, d: Mapping[str, int], min_len: int = 1) -> int:
    """Sum of d_u * d_v * #paths(u ~> v) over paths of length >= min_len (min_len 0 or 1)."""
    counts = path_counts(quiver)
    total = 0
    for (u, v), n in counts.items():
        if min_len >= 1 and u == v:
            n -= 1
        total += d[u] * d[v] * n
    return total


def opposite(quiver: Quiver) -> Quiver:
    """Reverse every arrow, keeping vertex order and arrow ids."""
    return Quiver(quiver.vertices, tuple(Arrow(a.target, a.source, a.id) for a in quiver.arrows))


def connected_components(quiver: Quiver, d: SummandVector) -> list[tuple[Quiver, SummandVector]]:
    """Weakly connected components with restricted summand vectors, ordered by smallest vertex id."""
    groups = sorted(nx.weakly_connected_components(quiver.graph), key=min)
    result = []
    for group in groups:
        sub = quiver.subquiver(group)
        result.append((sub, d.restrict(sub.vertices)))
    return result


def longest_path_length(quiver: Quiver) -> int:
    if not quiver.arrows:
        return 0
    return nx.dag_longest_path_length(nx.DiGraph(quiver.graph))
