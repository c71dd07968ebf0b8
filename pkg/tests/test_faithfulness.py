"""Tests for the faithfulness of the projection to the sink."""
import random

import pytest

from radcount.schemas.errors import InvalidRequestError
from radcount.services.faithfulness import (
    only_sink,
    projection_nullity,
    random_single_sink_quiver,
)
from tests.conftest import linear, make_instance


@pytest.mark.parametrize("q", [2, 3])
def test_linear_quivers_are_faithful(q):
    """A_n with any d embeds into End of the sink space."""
    for d in [(1, 1), (2, 1), (1, 2, 1), (2, 0, 1)]:
        assert projection_nullity(*linear(len(d), d), q) == 0


def test_shortcut_is_faithful(shortcut):
    """Parallel paths to the sink stay independent."""
    assert projection_nullity(*shortcut, 2) == 0


def test_only_sink():
    """Exactly one sink is required."""
    quiver, _ = make_instance(["1", "2", "3"], [("1", "2"), ("1", "3")], {"1": 1, "2": 1, "3": 1})
    with pytest.raises(InvalidRequestError):
        only_sink(quiver)
    assert only_sink(linear(3, (1, 1, 1))[0]) == "3"


def test_random_single_sink_quivers():
    """Generated quivers have one sink and arrows pointing up."""
    rng = random.Random(11)
    for _ in range(25):
        quiver, d = random_single_sink_quiver(rng)
        sink = only_sink(quiver)
        assert sink == quiver.vertices[-1]
        assert all(int(a.source) < int(a.target) for a in quiver.arrows)
        assert all(0 <= d[v] <= 2 for v in quiver.vertices)
