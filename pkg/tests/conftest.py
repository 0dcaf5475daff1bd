import pytest

from lightforest import parse_topology

F1_TEXT = "nodes 6\nedge 1 2\nedge 2 3\nedge 3 4\nedge 2 5\nedge 5 6\nedge 4 6"


@pytest.fixture
def f1():
    """Six-node fixture used throughout: 1-2-3-4 chain plus 2-5-6-4 loop."""
    return parse_topology(F1_TEXT, name="f1")


@pytest.fixture
def f1p():
    """f1 plus the edge 1-6."""
    return parse_topology(F1_TEXT + "\nedge 1 6", name="f1p")


@pytest.fixture
def f2():
    """f1 minus the edge 4-6; node 4 then hangs off node 3 only."""
    return parse_topology(
        "nodes 6\nedge 1 2\nedge 2 3\nedge 3 4\nedge 2 5\nedge 5 6", name="f2"
    )
