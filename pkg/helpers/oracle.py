# helpers/oracle.py
import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from helpers.constants import MEAN_TOLERANCE
from helpers.errors import InputError
from helpers.graph_core import Dag, Edge, Pdag, topological_order
from helpers.meek_engine import InterventionSet, essential_graph, interventional_essential_graph

logger = logging.getLogger(__name__)


class InterventionOracle:
    """
    Adaptive intervention environment around a hidden DAG.

    Algorithms only see `revealed`, `count` and `intervene`; the ground truth
    stays private to the oracle.
    """

    def __init__(self, hidden: Dag):
        self._hidden = hidden
        self._essential = essential_graph(hidden)
        self._performed = InterventionSet()
        self._revealed = self._essential

    @property
    def n(self) -> int:
        return self._hidden.n

    @property
    def revealed(self) -> Pdag:
        return self._revealed

    @property
    def performed(self) -> InterventionSet:
        return self._performed

    @property
    def count(self) -> int:
        return len(self._performed)

    def intervene(self, v: int) -> Pdag:
        """Atomic intervention on v; repeats are charged again."""
        if not 0 <= v < self.n:
            raise InputError(f"Cannot intervene on vertex {v}: outside 0..{self.n - 1}.")
        self._performed = self._performed.append(v)
        self._revealed = interventional_essential_graph(self._hidden, self._performed, base=self._essential)
        logger.debug(
            f"Intervention #{self.count} on vertex {v}; "
            f"{len(self._revealed.undirected)} edge(s) still undirected."
        )
        return self._revealed


# --- Shift Interventions ---
@dataclass(frozen=True)
class ShiftAssignment:
    """Atomic shift interventions: target vertex -> additive mean shift, kept sorted by vertex."""

    values: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        cleaned = {}
        for v, a in self.values:
            v, a = int(v), float(a)
            if v < 0:
                raise InputError(f"Shift target {v} is not a valid vertex id.")
            if not np.isfinite(a):
                raise InputError(f"Shift value for vertex {v} is not finite: {a}.")
            if v in cleaned:
                raise InputError(f"Vertex {v} is shifted twice in one assignment.")
            cleaned[v] = a
        object.__setattr__(self, "values", tuple(sorted(cleaned.items())))

    @classmethod
    def from_dict(cls, shifts: Mapping[int, float]) -> "ShiftAssignment":
        return cls(tuple(shifts.items()))

    def as_dict(self) -> dict[int, float]:
        return dict(self.values)

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.values)

    def with_shifts(self, extra: Mapping[int, float]) -> "ShiftAssignment":
        merged = self.as_dict()
        for v, a in extra.items():
            if v in merged:
                raise InputError(f"Vertex {v} already carries a shift of {merged[v]}.")
            merged[v] = a
        return ShiftAssignment.from_dict(merged)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ShiftSem:
    """Linear mean model: mu_v = c_v + a_v + sum over u -> v of w(u, v) * mu_u."""

    g: Dag
    weights: tuple[tuple[Edge, float], ...]
    intercepts: tuple[float, ...]
    _weight_of: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        weight_of = {}
        for (u, v), w in self.weights:
            if not self.g.has_arc(u, v):
                raise InputError(f"Weight given for {u}->{v}, which is not an arc of the graph.")
            if not np.isfinite(w):
                raise InputError(f"Weight on {u}->{v} is not finite: {w}.")
            weight_of[(int(u), int(v))] = float(w)
        missing = self.g.arcs - weight_of.keys()
        if missing:
            raise InputError(f"{len(missing)} arc(s) have no weight, e.g. {min(missing)}.")
        if len(self.intercepts) != self.g.n:
            raise InputError(f"Expected {self.g.n} intercepts, got {len(self.intercepts)}.")
        if not all(np.isfinite(c) for c in self.intercepts):
            raise InputError("Intercepts must be finite.")
        object.__setattr__(self, "weights", tuple(sorted(weight_of.items())))
        object.__setattr__(self, "intercepts", tuple(float(c) for c in self.intercepts))
        object.__setattr__(self, "_weight_of", weight_of)

    @classmethod
    def from_dict(cls, g: Dag, weights: Mapping[Edge, float], intercepts=None) -> "ShiftSem":
        if intercepts is None:
            intercepts = [0.0] * g.n
        return cls(g, tuple(weights.items()), tuple(intercepts))

    def weight(self, u: int, v: int) -> float:
        return self._weight_of[(u, v)]

    @property
    def n(self) -> int:
        return self.g.n


def mean_vector(sem: ShiftSem, shifts: ShiftAssignment) -> np.ndarray:
    """Noiseless means under the shift interventions, propagated in topological order."""
    offset = np.asarray(sem.intercepts, dtype=float).copy()
    for v, a in shifts.values:
        if v >= sem.n:
            raise InputError(f"Shift target {v} is outside 0..{sem.n - 1}.")
        offset[v] += a
    mu = np.zeros(sem.n)
    for v in topological_order(sem.g):
        mu[v] = offset[v] + sum(sem.weight(u, v) * mu[u] for u in sem.g.parents(v))
    return mu


def mismatch_of(mean: np.ndarray, target_mean, tol: float) -> frozenset[int]:
    """Coordinates where |mean - target| exceeds tol * max(1, |target|)."""
    target = np.asarray(target_mean, dtype=float)
    if target.shape != mean.shape:
        raise InputError(f"Target mean has length {target.shape[0]}, expected {mean.shape[0]}.")
    return frozenset(int(i) for i in np.flatnonzero(np.abs(mean - target) > tol * np.maximum(1.0, np.abs(target))))


def mismatch_set(sem: ShiftSem, current: ShiftAssignment, target_mean, tol: float = MEAN_TOLERANCE) -> frozenset[int]:
    return mismatch_of(mean_vector(sem, current), target_mean, tol)


class MeanOracle:
    """Mean-query access to a hidden shift model; the model itself is not exposed."""

    def __init__(self, sem: ShiftSem):
        self._sem = sem
        self.queries = 0

    @property
    def n(self) -> int:
        return self._sem.n

    def query(self, shifts: ShiftAssignment) -> np.ndarray:
        self.queries += 1
        return mean_vector(self._sem, shifts)
