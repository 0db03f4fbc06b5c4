# tests/conftest.py
import pytest

from helpers.graph_core import Dag
from tests.strategies import complete_dag


@pytest.fixture
def d4() -> Dag:
    """Complete DAG 0 -> 1 -> 2 -> 3 with every forward arc."""
    return complete_dag(4)


@pytest.fixture
def chain3() -> Dag:
    return Dag.from_arcs(3, [(0, 1), (1, 2)])


@pytest.fixture
def collider() -> Dag:
    """0 -> 2 <- 1 with 0 and 1 non-adjacent."""
    return Dag.from_arcs(3, [(0, 2), (1, 2)])
