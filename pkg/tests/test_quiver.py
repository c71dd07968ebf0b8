"""Tests for the quiver data model."""
import json

import pytest

from radcount.graph.quiver import (
    Arrow,
    Quiver,
    SummandVector,
    connected_components,
    dump_quiver,
    enumerate_paths,
    load_quiver,
    longest_path_length,
    opposite,
    parse_quiver,
    weighted_path_count,
)
from radcount.schemas.errors import QuiverValidationError
from tests.conftest import linear, make_instance


def test_parse_quiver_assigns_arrow_ids():
    """Arrows get ids a0, a1, ... in file order."""
    quiver, d = parse_quiver(
        '{"vertices": ["1", "2", "3"], "arrows": [["1", "2"], ["2", "3"]], "d": {"3": 1, "1": 2, "2": 0}}'
    )
    assert [a.id for a in quiver.arrows] == ["a0", "a1"]
    assert list(d) == ["1", "2", "3"]
    assert d["1"] == 2


@pytest.mark.parametrize(
    "payload",
    [
        '{"vertices": ["1", "2"], "arrows": [["1", "2"], ["2", "1"]], "d": {"1": 1, "2": 1}}',
        '{"vertices": ["1"], "arrows": [["1", "1"]], "d": {"1": 1}}',
        '{"vertices": ["1"], "arrows": [["1", "2"]], "d": {"1": 1}}',
        '{"vertices": ["1", "1"], "arrows": [], "d": {"1": 1}}',
        '{"vertices": ["1"], "arrows": [], "d": {"1": -1}}',
        '{"vertices": ["1", "2"], "arrows": [], "d": {"1": 1}}',
        '{"vertices": ["1"], "arrows": [], "d": {"1": 1}, "extra": 0}',
        '{"vertices": ["1"], "arrows": [], "d": {"1": 1}',
    ],
)
def test_parse_quiver_rejects_invalid(payload):
    """Cycles, loops, dangling endpoints, duplicates, bad d and bad JSON are rejected."""
    with pytest.raises(QuiverValidationError):
        parse_quiver(payload)


def test_cycle_error_names_the_cycle():
    """The error message shows the cycle."""
    with pytest.raises(QuiverValidationError, match="cycle"):
        make_instance(["x", "y"], [("x", "y"), ("y", "x")], {"x": 1, "y": 1})


def test_load_quiver_missing_file(tmp_path):
    """Unreadable files are validation errors."""
    with pytest.raises(QuiverValidationError):
        load_quiver(tmp_path / "missing.json")


def test_dump_quiver_is_file_format():
    """dump_quiver writes the interchange format back."""
    quiver, d = linear(2, (2, 1))
    data = json.loads(dump_quiver(quiver, d))
    assert data == {"vertices": ["1", "2"], "arrows": [["1", "2"]], "d": {"1": 2, "2": 1}}
    assert parse_quiver(dump_quiver(quiver, d)) == (quiver, d)


def test_enumerate_paths(shortcut):
    """Paths 1 ~> 3 in the shortcut quiver: the direct arrow and the one through 2."""
    quiver, _ = shortcut
    paths = enumerate_paths(quiver, "1", "3")
    assert sorted(p.arrows for p in paths) == [("a0", "a1"), ("a2",)]
    assert [p.arrows for p in enumerate_paths(quiver, "1", "1")] == [()]
    assert enumerate_paths(quiver, "1", "1", min_len=1) == []
    assert enumerate_paths(quiver, "3", "1") == []


def test_weighted_path_count(a3):
    """dim rad for A3 (1,1,1) is 3 and dim A is 6."""
    quiver, d = a3
    assert weighted_path_count(quiver, d) == 3
    assert weighted_path_count(quiver, d, min_len=0) == 6
    _, d2 = linear(3, (2, 1, 1))
    assert weighted_path_count(quiver, d2) == 2 + 2 + 1


def test_summand_vector_rejects_negative():
    """Negative entries are invalid."""
    with pytest.raises(QuiverValidationError):
        SummandVector({"1": -1})


def test_opposite_reverses_arrows(a3):
    """Arrow ids and vertex order survive reversal."""
    quiver, _ = a3
    rev = opposite(quiver)
    assert rev.arrows[0] == Arrow("2", "1", "a0")
    assert rev.is_sink("1")
    assert opposite(rev) == quiver


def test_connected_components_ordered_by_vertex():
    """Components are listed by their smallest vertex id."""
    quiver, d = make_instance(
        ["3", "1", "4", "2"], [("3", "4"), ("1", "2")], {"1": 1, "2": 2, "3": 1, "4": 1}
    )
    parts = connected_components(quiver, d)
    assert [p[0].vertices for p in parts] == [("1", "2"), ("3", "4")]
    assert parts[0][1]["2"] == 2


def test_fresh_vertex_id():
    """A taken id gets the smallest free numeric suffix."""
    quiver = Quiver(("v^A", "v^A2"))
    assert quiver.fresh_vertex_id("v^B") == "v^B"
    assert quiver.fresh_vertex_id("v^A") == "v^A3"


def test_longest_path_length(a4, star4):
    """A4 has a path of length 3, the star only single arrows."""
    assert longest_path_length(a4[0]) == 3
    assert longest_path_length(star4[0]) == 1
    assert longest_path_length(Quiver(("1",))) == 0
