import pytest

from xifree.census import compute_wk


@pytest.fixture(scope="session")
def wk_graph():
    return compute_wk(6, "graph")


@pytest.fixture(scope="session")
def wk_multigraph():
    return compute_wk(6, "multigraph")
