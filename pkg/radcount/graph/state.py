"""Reduction trace data types."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from radcount.graph.quiver import Quiver, SummandVector


class RuleName(str, Enum):
    """Count-preserving rewrite rules."""

    ARROW_REVERSAL = "arrow-reversal"
    ZERO_VERTEX_REMOVAL = "zero-vertex-removal"
    COMPONENT_SPLIT = "component-split"
    SOURCE_CONVERSION = "source-conversion"
    SINK_CONVERSION = "sink-conversion"
    SOURCE_SPLIT = "source-split"
    SINK_SPLIT = "sink-split"
    SOURCE_MERGE = "source-merge"
    SINK_MERGE = "sink-merge"


class LeafKind(str, Enum):
    """Classification of a fully reduced component."""

    POINT = "point"
    RAD_SQUARE_ZERO = "rad-square-zero"
    A3_SHAPE = "a3-shape"
    IRREDUCIBLE = "irreducible"


Instance = Tuple[Quiver, SummandVector]


@dataclass(frozen=True)
class Classification:
    """Leaf kind plus what its closed form needs."""

    kind: LeafKind
    rad_dim: int = 0
    """dim rad A_{Q,d}; the rad-square-zero count is q^(2 rad_dim)."""
    shape: Optional[Tuple[int, int, int]] = None
    """(l, d, m) for a3-shape leaves."""
    a2: bool = False
    """Single arrow between two vertices with d = (1, 1)."""

    @property
    def label(self) -> str:
        if self.kind == LeafKind.A3_SHAPE:
            l, d, m = self.shape
            return f"a3-shape({l},{d},{m})"
        if self.kind == LeafKind.RAD_SQUARE_ZERO:
            return "rad-square-zero(A2)" if self.a2 else f"rad-square-zero(dim={self.rad_dim})"
        return self.kind.value


@dataclass(frozen=True)
class ReductionStep:
    """One rule application; component-split has several results."""

    rule: RuleName
    before: Instance
    after: Tuple[Instance, ...]
    detail: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Leaf:
    """A component no rule of the strategy reduces further."""

    quiver: Quiver
    d: SummandVector
    classification: Classification


@dataclass
class ReductionTrace:
    """Steps in application order and the leaves they end in."""

    steps: List[ReductionStep] = field(default_factory=list)
    leaves: List[Leaf] = field(default_factory=list)

    def record(self, step: ReductionStep) -> None:
        self.steps.append(step)

    @property
    def summary(self) -> str:
        """Leaf labels grouped in first-seen order, e.g. '4 × rad-square-zero(A2)'."""
        if not self.leaves:
            return "empty"
        counts: Dict[str, int] = {}
        for leaf in self.leaves:
            label = leaf.classification.label
            counts[label] = counts.get(label, 0) + 1
        return ", ".join(label if n == 1 else f"{n} × {label}" for label, n in counts.items())
