# helpers/graph_gen.py
import logging
from dataclasses import dataclass
from typing import Iterable

import networkx as nx
import numpy as np

from helpers.constants import (
    BA_ATTACH_EDGES, ER_DENSITY, GRAPH_MODELS, RHOP_DENSITY, SHIFT_RANGE, WEIGHT_MIN_ABS, WEIGHT_RANGE,
)
from helpers.errors import InputError
from helpers.graph_core import Dag, EdgeSet, edge_set, skeleton, topological_order, v_structures
from helpers.oracle import ShiftAssignment, ShiftSem, mean_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsetInstance:
    hidden: Dag
    targets: EdgeSet
    hop_center: int
    n: int
    r: int
    density: float
    seed: int


@dataclass(frozen=True)
class MatchingInstance:
    sem: ShiftSem
    hidden_targets: ShiftAssignment
    target_mean: tuple[float, ...]
    model: str
    seed: int

    @property
    def mean_array(self) -> np.ndarray:
        return np.asarray(self.target_mean, dtype=float)


def _nx_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**31 - 1))


def orient_by_label(n: int, edges: Iterable[tuple[int, int]]) -> Dag:
    """Orients every undirected edge from the lower vertex id to the higher."""
    return Dag.from_arcs(n, edge_set(edges))


def moralize(g: Dag) -> Dag:
    """
    Adds u -> w for every v-structure u -> v <- w (u before w in topological order,
    which is label order for label-oriented graphs), repeating until none remain.
    """
    position = {v: i for i, v in enumerate(topological_order(g))}
    arcs = set(g.arcs)
    current = g
    passes = 0
    while found := v_structures(current):
        passes += 1
        for u, _, w in found:
            arcs.add((u, w) if position[u] < position[w] else (w, u))
        current = Dag(g.n, frozenset(arcs))
    if passes:
        logger.debug(f"Moralization added {len(arcs) - len(g.arcs)} arc(s) over {passes} pass(es).")
    return current


def _prufer_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n < 2:
        return []
    sequence = [int(v) for v in rng.integers(0, n, size=n - 2)]
    return list(nx.from_prufer_sequence(sequence).edges())


# --- Subset Search Instances ---
def r_hop_instance(n: int, r: int, density: float = RHOP_DENSITY, seed: int = 0) -> SubsetInstance:
    """
    Random ER graph merged with a random spanning tree, oriented by label and
    moralized; targets are the skeleton edges within r hops of a random center.
    """
    if n < 2:
        raise InputError(f"r-hop instances need n >= 2, got {n}.")
    if r < 1:
        raise InputError(f"r-hop instances need r >= 1, got {r}.")
    rng = np.random.default_rng(seed)
    er = nx.gnp_random_graph(n, density, seed=_nx_seed(rng))
    edges = set(edge_set(er.edges())) | set(edge_set(_prufer_tree(n, rng)))
    hidden = moralize(orient_by_label(n, edges))

    center = int(rng.integers(0, n))
    undirected = nx.Graph()
    undirected.add_nodes_from(range(n))
    undirected.add_edges_from(skeleton(hidden))
    near = nx.single_source_shortest_path_length(undirected, center, cutoff=r)
    targets = frozenset(e for e in skeleton(hidden) if e[0] in near and e[1] in near)
    logger.debug(f"r-hop instance n={n} r={r} seed={seed}: {hidden.num_edges} arcs, {len(targets)} targets around {center}.")
    return SubsetInstance(hidden, targets, center, n, r, float(density), seed)


# --- Graph Models ---
def er_dag(n: int, density: float = ER_DENSITY, seed: int = 0) -> Dag:
    if not 0.0 <= density <= 1.0:
        raise InputError(f"Edge density must lie in [0, 1], got {density}.")
    rng = np.random.default_rng(seed)
    return orient_by_label(n, nx.gnp_random_graph(n, density, seed=_nx_seed(rng)).edges())


def ba_dag(n: int, m_attach: int = BA_ATTACH_EDGES, seed: int = 0) -> Dag:
    if not 1 <= m_attach < n:
        raise InputError(f"Barabasi-Albert needs 1 <= m_attach < n, got m_attach={m_attach}, n={n}.")
    rng = np.random.default_rng(seed)
    return orient_by_label(n, nx.barabasi_albert_graph(n, m_attach, seed=_nx_seed(rng)).edges())


def tree_dag(n: int, seed: int = 0) -> Dag:
    rng = np.random.default_rng(seed)
    return orient_by_label(n, _prufer_tree(n, rng))


def model_dag(model: str, n: int, seed: int, density: float = ER_DENSITY, m_attach: int = BA_ATTACH_EDGES) -> Dag:
    """Dispatches to the generator named by `model` (r-hop graphs drop their targets)."""
    if model == "er":
        return er_dag(n, density, seed)
    if model == "ba":
        return ba_dag(n, m_attach, seed)
    if model == "tree":
        return tree_dag(n, seed)
    if model == "rhop":
        return r_hop_instance(n, 1, density, seed).hidden
    raise InputError(f"Unknown graph model '{model}'; expected one of {', '.join(GRAPH_MODELS)}.")


# --- Mean Matching Instances ---
def _uniform_nonzero(rng: np.random.Generator, low: float, high: float) -> float:
    while True:
        w = float(rng.uniform(low, high))
        if abs(w) >= WEIGHT_MIN_ABS:
            return w


def matching_instance(
    g: Dag,
    k: int,
    seed: int = 0,
    weight_range: tuple[float, float] = WEIGHT_RANGE,
    shift_range: tuple[float, float] = SHIFT_RANGE,
    model: str = "custom",
) -> MatchingInstance:
    """Linear mean model on g with k random shift targets; the target mean is computed exactly."""
    if not 0 <= k <= g.n:
        raise InputError(f"Number of shift targets must lie in 0..{g.n}, got {k}.")
    rng = np.random.default_rng(seed)
    weights = {arc: _uniform_nonzero(rng, *weight_range) for arc in sorted(g.arcs)}
    sem = ShiftSem.from_dict(g, weights)
    chosen = sorted(int(v) for v in rng.choice(g.n, size=k, replace=False)) if k else []
    shifts = ShiftAssignment.from_dict({v: float(rng.uniform(*shift_range)) for v in chosen})
    target_mean = tuple(float(x) for x in mean_vector(sem, shifts))
    return MatchingInstance(sem, shifts, target_mean, model, seed)
