# tests/test_oracle.py
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers.errors import InputError
from helpers.graph_core import Dag
from helpers.graph_gen import er_dag, matching_instance
from helpers.oracle import (
    InterventionOracle, MeanOracle, ShiftAssignment, ShiftSem, mean_vector, mismatch_of, mismatch_set,
)
from tests.strategies import PROPERTY_SETTINGS, dag_and_interventions


@pytest.fixture
def chain_sem(chain3) -> ShiftSem:
    return ShiftSem.from_dict(chain3, {(0, 1): 1.0, (1, 2): 1.0})


# --- Intervention Oracle ---
def test_oracle_starts_from_essential_graph(d4):
    o = InterventionOracle(d4)
    assert o.count == 0
    assert not o.revealed.oriented


def test_intervene_reveals_and_counts(d4):
    o = InterventionOracle(d4)
    revealed = o.intervene(1)
    assert revealed.undirected == {(2, 3)}
    assert o.count == 1


def test_repeat_intervention_costs_again(d4):
    o = InterventionOracle(d4)
    first = o.intervene(2)
    second = o.intervene(2)
    assert first == second
    assert o.count == 2
    assert o.performed.vertices() == (2, 2)


def test_intervening_everywhere_recovers_hidden(d4):
    o = InterventionOracle(d4)
    for v in range(4):
        o.intervene(v)
    assert o.revealed.to_dag() == d4


def test_intervene_rejects_unknown_vertex(d4):
    with pytest.raises(InputError):
        InterventionOracle(d4).intervene(4)


@PROPERTY_SETTINGS
@given(dag_and_interventions(max_n=9, max_size=4))
def test_revealed_never_contradicts_hidden(case):
    g, chosen = case
    o = InterventionOracle(g)
    for v in chosen:
        o.intervene(v)
        assert o.revealed.oriented <= g.arcs
    assert o.count == len(chosen)


# --- Shift Assignments ---
def test_shift_assignment_is_sorted_and_validated():
    shifts = ShiftAssignment.from_dict({3: 1.0, 1: -0.5})
    assert shifts.values == ((1, -0.5), (3, 1.0))
    assert shifts.targets == {1, 3}
    with pytest.raises(InputError):
        ShiftAssignment(((1, 1.0), (1, 2.0)))
    with pytest.raises(InputError):
        ShiftAssignment.from_dict({0: float("nan")})
    with pytest.raises(InputError):
        shifts.with_shifts({3: 2.0})


def test_shift_sem_requires_weight_for_every_arc(chain3):
    with pytest.raises(InputError):
        ShiftSem.from_dict(chain3, {(0, 1): 1.0})
    with pytest.raises(InputError):
        ShiftSem.from_dict(chain3, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0})


# --- Means ---
def test_shift_propagates_down_chain(chain_sem):
    mean = mean_vector(chain_sem, ShiftAssignment.from_dict({0: 1.0}))
    np.testing.assert_allclose(mean, [1.0, 1.0, 1.0])


def test_observational_mean_is_zero(chain_sem):
    np.testing.assert_allclose(mean_vector(chain_sem, ShiftAssignment()), np.zeros(3))


def test_single_vertex_with_intercept():
    sem = ShiftSem.from_dict(Dag.from_arcs(1, []), {}, [2.5])
    np.testing.assert_allclose(mean_vector(sem, ShiftAssignment.from_dict({0: 0.5})), [3.0])


def test_mismatch_set_examples(chain_sem):
    target = [1.0, 1.0, 1.0]
    assert mismatch_set(chain_sem, ShiftAssignment.from_dict({0: 1.0}), target) == frozenset()
    assert mismatch_set(chain_sem, ShiftAssignment(), target) == {0, 1, 2}
    assert mismatch_set(chain_sem, ShiftAssignment(), [0.0, 0.0, 0.0]) == frozenset()


def test_mismatch_rejects_wrong_length():
    with pytest.raises(InputError):
        mismatch_of(np.zeros(3), [0.0, 0.0], 1e-9)


@PROPERTY_SETTINGS
@given(st.integers(min_value=2, max_value=50), st.integers(min_value=0, max_value=2**20))
def test_mean_vector_matches_dense_solve(n, seed):
    g = er_dag(n, 0.2, seed)
    instance = matching_instance(g, min(3, n), seed)
    sem = instance.sem
    weights = np.zeros((n, n))
    for (u, v), w in sem.weights:
        weights[u, v] = w
    offset = np.asarray(sem.intercepts) + np.array([instance.hidden_targets.as_dict().get(v, 0.0) for v in range(n)])
    expected = np.linalg.solve(np.eye(n) - weights.T, offset)
    np.testing.assert_allclose(mean_vector(sem, instance.hidden_targets), expected, rtol=1e-9, atol=1e-9)


def test_mean_oracle_counts_queries(chain_sem):
    oracle = MeanOracle(chain_sem)
    oracle.query(ShiftAssignment())
    oracle.query(ShiftAssignment.from_dict({1: 1.0}))
    assert oracle.queries == 2
    assert oracle.n == 3
