# helpers/chordal.py
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import networkx as nx

from helpers.constants import SEPARATOR_ALPHA
from helpers.errors import DisconnectedGraphError, InputError, NotChordalError, StructuralError
from helpers.graph_core import EdgeSet, Pdag, edge_set, induced_subgraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: EdgeSet
    _adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = edge_set(self.edges)
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"Edge {(u, v)} has an endpoint outside 0..{self.n - 1}.")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_component(cls, p: Pdag, component: Iterable[int]) -> tuple["UndirectedGraph", tuple[int, ...]]:
        """Undirected part of p restricted to `component`, relabeled; returns (graph, mapping)."""
        sub, mapping = induced_subgraph(p, component)
        return cls(sub.n, sub.undirected), mapping

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class CliqueSeparator:
    clique: frozenset[int]
    components: list[frozenset[int]]


# --- Maximum Cardinality Search ---
def mcs_order(g: UndirectedGraph) -> tuple[int, ...]:
    """Visit order of maximum cardinality search; ties go to the smallest id."""
    weight = [0] * g.n
    visited = [False] * g.n
    order = []
    for _ in range(g.n):
        best = -1
        for v in range(g.n):
            if not visited[v] and (best < 0 or weight[v] > weight[best]):
                best = v
        visited[best] = True
        order.append(best)
        for nb in g.neighbors(best):
            if not visited[nb]:
                weight[nb] += 1
    return tuple(order)


def _earlier_neighbors(g: UndirectedGraph, order: tuple[int, ...]) -> list[tuple[int, frozenset[int]]]:
    position = {v: i for i, v in enumerate(order)}
    return [(v, frozenset(nb for nb in g.neighbors(v) if position[nb] < position[v])) for v in order]


def is_chordal(g: UndirectedGraph) -> bool:
    """Reverse MCS order is a perfect elimination ordering iff g is chordal."""
    for _, earlier in _earlier_neighbors(g, mcs_order(g)):
        members = sorted(earlier)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if not g.adjacent(a, b):
                    return False
    return True


def maximal_cliques(g: UndirectedGraph) -> list[frozenset[int]]:
    """Maximal cliques of a chordal graph, in MCS visit order of their last vertex."""
    order = mcs_order(g)
    candidates = []
    for v, earlier in _earlier_neighbors(g, order):
        members = sorted(earlier)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if not g.adjacent(a, b):
                    raise NotChordalError(f"Graph is not chordal: earlier neighbors {a} and {b} of {v} are not adjacent.")
        candidates.append(earlier | {v})
    cliques = []
    for i, c in enumerate(candidates):
        if any(c < other for other in candidates):
            continue
        if c in candidates[:i]:
            continue
        cliques.append(c)
    return cliques


def max_clique_size(g: UndirectedGraph) -> int:
    if g.n == 0:
        return 0
    return max(len(c) for c in maximal_cliques(g))


# --- Separators ---
def components_without(g: UndirectedGraph, removed: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of g after deleting `removed`, ordered by minimum id."""
    removed = set(removed)
    remaining = g.to_networkx().subgraph(v for v in range(g.n) if v not in removed)
    return sorted((frozenset(c) for c in nx.connected_components(remaining)), key=min)


def _separates(g: UndirectedGraph, clique: frozenset[int], limit: Fraction) -> list[frozenset[int]] | None:
    components = components_without(g, clique)
    if all(len(c) <= limit for c in components):
        return components
    return None


def clique_separator(g: UndirectedGraph, alpha: Fraction = SEPARATOR_ALPHA) -> CliqueSeparator:
    """
    Finds a clique whose removal leaves components of at most alpha * n vertices.

    A complete graph returns the whole vertex set. Otherwise the first maximal
    clique that separates is shrunk vertex by vertex (ascending id) for as long
    as it still separates.

    Raises:
        NotChordalError: g is not chordal.
        DisconnectedGraphError: g has more than one connected component.
    """
    if g.n == 0:
        raise InputError("Clique separator needs at least one vertex.")
    if not is_chordal(g):
        raise NotChordalError(f"Clique separator requested on a non-chordal graph with {g.n} vertices.")
    if not nx.is_connected(g.to_networkx()):
        raise DisconnectedGraphError("Clique separator requires a connected graph; separate each component first.")

    if g.is_complete:
        return CliqueSeparator(frozenset(range(g.n)), [])

    limit = Fraction(alpha) * g.n
    for clique in maximal_cliques(g):
        components = _separates(g, clique, limit)
        if components is None:
            continue
        for v in sorted(clique):
            if len(clique) == 1:
                break
            trimmed = _separates(g, clique - {v}, limit)
            if trimmed is not None:
                clique = clique - {v}
                components = trimmed
        logger.debug(f"Clique separator of size {len(clique)} found for a graph with {g.n} vertices.")
        return CliqueSeparator(clique, components)

    raise StructuralError(f"No maximal clique separates the graph at alpha={alpha}; the graph cannot be chordal.")
