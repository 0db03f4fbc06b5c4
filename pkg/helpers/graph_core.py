# helpers/graph_core.py
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from helpers.errors import InputError, StructuralError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]
EdgeSet = frozenset[Edge]


# --- Edge Helpers ---
def edge_key(u: int, v: int) -> Edge:
    """Canonical (smaller, larger) form of an unordered pair."""
    return (u, v) if u < v else (v, u)


def edge_set(pairs: Iterable[tuple[int, int]]) -> EdgeSet:
    """Builds an EdgeSet (unordered, no self-loops) from any iterable of pairs."""
    result = set()
    for u, v in pairs:
        u, v = int(u), int(v)
        if u == v:
            raise StructuralError(f"Self-loop on vertex {u} is not a valid edge.")
        result.add(edge_key(u, v))
    return frozenset(result)


def _check_vertex(n: int, v: int) -> None:
    if not 0 <= v < n:
        raise InputError(f"Vertex {v} is outside the vertex range 0..{n - 1}.")


def _lexicographic_order(n: int, arcs: Iterable[Edge]) -> tuple[int, ...]:
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(n))
    digraph.add_edges_from(arcs)
    try:
        return tuple(nx.lexicographical_topological_sort(digraph))
    except nx.NetworkXUnfeasible as e:
        raise StructuralError(f"Directed cycle detected; the arc set is not a DAG ({e}).") from e


# --- Graph Types ---
@dataclass(frozen=True)
class Dag:
    """Immutable DAG over vertices 0..n-1. `arcs` holds (u, v) for u -> v."""

    n: int
    arcs: frozenset[Edge]
    _parents: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _pairs: frozenset[Edge] = field(init=False, repr=False, compare=False)
    _order: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"Vertex count must be non-negative, got {self.n}.")
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        parents: list[list[int]] = [[] for _ in range(self.n)]
        children: list[list[int]] = [[] for _ in range(self.n)]
        pairs: set[Edge] = set()
        for u, v in arcs:
            _check_vertex(self.n, u)
            _check_vertex(self.n, v)
            if u == v:
                raise StructuralError(f"Self-loop {u}->{v} is not allowed in a DAG.")
            key = edge_key(u, v)
            if key in pairs:
                raise StructuralError(f"Both {u}->{v} and {v}->{u} are present.")
            pairs.add(key)
            parents[v].append(u)
            children[u].append(v)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "_parents", tuple(tuple(sorted(p)) for p in parents))
        object.__setattr__(self, "_children", tuple(tuple(sorted(c)) for c in children))
        object.__setattr__(self, "_pairs", frozenset(pairs))
        object.__setattr__(self, "_order", _lexicographic_order(self.n, arcs))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Dag":
        return cls(n, frozenset((int(u), int(v)) for u, v in arcs))

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._parents[v] + self._children[v]))

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def adjacent(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._pairs

    @property
    def num_edges(self) -> int:
        return len(self.arcs)


@dataclass(frozen=True)
class Pdag:
    """Partially directed graph: arcs in `oriented`, unordered pairs in `undirected`."""

    n: int
    oriented: frozenset[Edge]
    undirected: frozenset[Edge]
    _in: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _out: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _und: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        oriented = frozenset((int(u), int(v)) for u, v in self.oriented)
        undirected = edge_set(self.undirected)
        incoming: list[set[int]] = [set() for _ in range(self.n)]
        outgoing: list[set[int]] = [set() for _ in range(self.n)]
        und: list[set[int]] = [set() for _ in range(self.n)]
        seen: set[Edge] = set()
        for u, v in oriented:
            _check_vertex(self.n, u)
            _check_vertex(self.n, v)
            if u == v:
                raise StructuralError(f"Self-loop {u}->{v} is not allowed.")
            key = edge_key(u, v)
            if key in seen:
                raise StructuralError(f"Pair {key} is oriented in both directions.")
            seen.add(key)
            outgoing[u].add(v)
            incoming[v].add(u)
        for u, v in undirected:
            _check_vertex(self.n, u)
            _check_vertex(self.n, v)
            if (u, v) in seen:
                raise StructuralError(f"Pair {(u, v)} is both oriented and undirected.")
            und[u].add(v)
            und[v].add(u)
        object.__setattr__(self, "oriented", oriented)
        object.__setattr__(self, "undirected", undirected)
        object.__setattr__(self, "_in", tuple(frozenset(s) for s in incoming))
        object.__setattr__(self, "_out", tuple(frozenset(s) for s in outgoing))
        object.__setattr__(self, "_und", tuple(frozenset(s) for s in und))

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def has_undirected(self, u: int, v: int) -> bool:
        return v in self._und[u]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._out[u] or v in self._in[u] or v in self._und[u]

    def parents(self, v: int) -> frozenset[int]:
        """Vertices with an oriented arc into v."""
        return self._in[v]

    def children(self, v: int) -> frozenset[int]:
        return self._out[v]

    def undirected_neighbors(self, v: int) -> frozenset[int]:
        return self._und[v]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._in[v] | self._out[v] | self._und[v]

    @property
    def is_fully_oriented(self) -> bool:
        return not self.undirected

    def to_dag(self) -> Dag:
        if self.undirected:
            raise StructuralError(f"Cannot read a DAG: {len(self.undirected)} edge(s) are still undirected.")
        return Dag(self.n, self.oriented)


def as_pdag(g: Dag) -> Pdag:
    """The fully oriented Pdag view of a DAG."""
    return Pdag(g.n, g.arcs, frozenset())


# --- Queries ---
def topological_order(g: Dag) -> tuple[int, ...]:
    """Topological order with ties broken by ascending vertex id."""
    return g._order


def descendants(g: Dag, v: int) -> frozenset[int]:
    """Des(v), excluding v itself."""
    _check_vertex(g.n, v)
    return _reach(v, g.children)


def ancestors(g: Dag, v: int) -> frozenset[int]:
    """Anc(v), excluding v itself."""
    _check_vertex(g.n, v)
    return _reach(v, g.parents)


def _reach(start: int, step) -> frozenset[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for nxt in step(current):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    seen.discard(start)
    return frozenset(seen)


def directed_reach(p: Pdag, sources: Iterable[int]) -> frozenset[int]:
    """Vertices reachable from `sources` along oriented arcs only (sources included)."""
    seen = set(sources)
    queue = deque(seen)
    while queue:
        current = queue.popleft()
        for nxt in p.children(current):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def chain_components(g: Pdag) -> list[frozenset[int]]:
    """Connected components of the undirected part, singletons included, ordered by minimum id."""
    seen = [False] * g.n
    components = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        members = [start]
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for nxt in g.undirected_neighbors(current):
                if not seen[nxt]:
                    seen[nxt] = True
                    members.append(nxt)
                    queue.append(nxt)
        components.append(frozenset(members))
    return components


def is_chain_graph(g: Pdag) -> bool:
    """True when no partially directed cycle exists (arcs never point back into a component)."""
    comp_of = {}
    for idx, comp in enumerate(chain_components(g)):
        for v in comp:
            comp_of[v] = idx
    condensed = nx.DiGraph()
    condensed.add_nodes_from(set(comp_of.values()))
    for u, v in g.oriented:
        if comp_of[u] == comp_of[v]:
            return False
        condensed.add_edge(comp_of[u], comp_of[v])
    return nx.is_directed_acyclic_graph(condensed)


def v_structures(g: Dag) -> list[tuple[int, int, int]]:
    """All (u, v, w) with u -> v <- w, u and w non-adjacent, u < w; sorted."""
    found = []
    for v in range(g.n):
        pa = g.parents(v)
        for i, u in enumerate(pa):
            for w in pa[i + 1:]:
                if not g.adjacent(u, w):
                    found.append((u, v, w))
    found.sort()
    return found


def is_moral(g: Dag) -> bool:
    for v in range(g.n):
        pa = g.parents(v)
        for i, u in enumerate(pa):
            for w in pa[i + 1:]:
                if not g.adjacent(u, w):
                    return False
    return True


def covered_edges(g: Dag) -> EdgeSet:
    """Edges u -> v with Pa(u) \\ {v} = Pa(v) \\ {u}."""
    covered = []
    for u, v in g.arcs:
        if set(g.parents(u)) - {v} == set(g.parents(v)) - {u}:
            covered.append((u, v))
    return edge_set(covered)


def skeleton(g: Dag | Pdag) -> EdgeSet:
    if isinstance(g, Dag):
        return edge_set(g.arcs)
    return edge_set(g.oriented) | g.undirected


def induced_subgraph(g: Dag | Pdag, s: Iterable[int]) -> tuple[Dag | Pdag, tuple[int, ...]]:
    """
    Restricts g to the vertex set s, relabeled to 0..|s|-1 in ascending order of
    original id. Returns (subgraph, mapping) where mapping[new_id] == original_id.
    """
    mapping = tuple(sorted(set(s)))
    for v in mapping:
        _check_vertex(g.n, v)
    relabel = {old: new for new, old in enumerate(mapping)}
    if isinstance(g, Dag):
        arcs = [(relabel[u], relabel[v]) for u, v in g.arcs if u in relabel and v in relabel]
        return Dag.from_arcs(len(mapping), arcs), mapping
    oriented = [(relabel[u], relabel[v]) for u, v in g.oriented if u in relabel and v in relabel]
    undirected = [(relabel[u], relabel[v]) for u, v in g.undirected if u in relabel and v in relabel]
    return Pdag(len(mapping), frozenset(oriented), frozenset(undirected)), mapping
