"""Pytest configuration and fixtures."""
import json
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import pytest

from radcount.config import settings
from radcount.graph.quiver import Arrow, Quiver, SummandVector
from radcount.services.counting import PairCounter


def make_instance(
    vertices: List[str], arrows: List[Tuple[str, str]], d: Dict[str, int]
) -> Tuple[Quiver, SummandVector]:
    """Build a (Quiver, SummandVector) pair with arrow ids a0, a1, ..."""
    quiver = Quiver(
        tuple(vertices), tuple(Arrow(s, t, f"a{k}") for k, (s, t) in enumerate(arrows))
    )
    return quiver, SummandVector(d).ordered(quiver)


def linear(n: int, d: Tuple[int, ...]) -> Tuple[Quiver, SummandVector]:
    """Equioriented A_n: 1 -> 2 -> ... -> n."""
    vertices = [str(i) for i in range(1, n + 1)]
    arrows = [(str(i), str(i + 1)) for i in range(1, n)]
    return make_instance(vertices, arrows, dict(zip(vertices, d)))


@pytest.fixture(autouse=True)
def engine_settings(monkeypatch):
    """Single process, no cache: tests never depend on the host."""
    monkeypatch.setattr(settings, "jobs", 1)
    monkeypatch.setattr(settings, "cache", None)
    yield settings


@pytest.fixture
def counter() -> PairCounter:
    return PairCounter(budget=2**24, jobs=1)


@pytest.fixture
def point():
    return make_instance(["1"], [], {"1": 1})


@pytest.fixture
def a2():
    return linear(2, (1, 1))


@pytest.fixture
def a3():
    return linear(3, (1, 1, 1))


@pytest.fixture
def a4():
    return linear(4, (1, 1, 1, 1))


@pytest.fixture
def star4():
    """Out-star: center c with arrows to four leaves."""
    return make_instance(
        ["c", "1", "2", "3", "4"],
        [("c", "1"), ("c", "2"), ("c", "3"), ("c", "4")],
        {"c": 1, "1": 1, "2": 1, "3": 1, "4": 1},
    )


@pytest.fixture
def shortcut():
    """1 -> 2 -> 3 plus 1 -> 3."""
    return make_instance(
        ["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")], {"1": 1, "2": 1, "3": 1}
    )


@pytest.fixture
def write_quiver(tmp_path: Path) -> Callable[..., Path]:
    """Write a quiver file into tmp_path and return its path."""

    def write(name: str, vertices, arrows, d) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps({"vertices": vertices, "arrows": arrows, "d": d}))
        return path

    return write


@pytest.fixture
def quiver_files(write_quiver) -> Dict[str, Path]:
    return {
        "a2": write_quiver("a2.json", ["1", "2"], [["1", "2"]], {"1": 1, "2": 1}),
        "a3": write_quiver(
            "a3.json", ["1", "2", "3"], [["1", "2"], ["2", "3"]], {"1": 1, "2": 1, "3": 1}
        ),
        "a4": write_quiver(
            "a4.json",
            ["1", "2", "3", "4"],
            [["1", "2"], ["2", "3"], ["3", "4"]],
            {"1": 1, "2": 1, "3": 1, "4": 1},
        ),
        "star4": write_quiver(
            "star4.json",
            ["c", "1", "2", "3", "4"],
            [["c", "1"], ["c", "2"], ["c", "3"], ["c", "4"]],
            {"c": 1, "1": 1, "2": 1, "3": 1, "4": 1},
        ),
        "shortcut": write_quiver(
            "shortcut.json",
            ["1", "2", "3"],
            [["1", "2"], ["2", "3"], ["1", "3"]],
            {"1": 1, "2": 1, "3": 1},
        ),
    }
