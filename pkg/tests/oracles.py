# tests/oracles.py
# Brute-force references, only usable on tiny graphs.
import itertools
from typing import Iterable

import networkx as nx

from helpers.graph_core import Dag, Pdag, edge_key, skeleton, v_structures


def mec_members(g: Dag) -> list[Dag]:
    """Every DAG with g's skeleton and v-structures, by enumerating all orientations."""
    edges = sorted(skeleton(g))
    target = v_structures(g)
    members = []
    for flips in itertools.product((False, True), repeat=len(edges)):
        arcs = [(v, u) if flip else (u, v) for (u, v), flip in zip(edges, flips)]
        digraph = nx.DiGraph(arcs)
        digraph.add_nodes_from(range(g.n))
        if not nx.is_directed_acyclic_graph(digraph):
            continue
        candidate = Dag.from_arcs(g.n, arcs)
        if v_structures(candidate) == target:
            members.append(candidate)
    return members


def interventional_members(g: Dag, interventions: Iterable[int]) -> list[Dag]:
    """MEC members that agree with g on every edge cut by one of the atomic interventions."""
    chosen = set(interventions)
    cut = [(u, v) for u, v in g.arcs if u in chosen or v in chosen]
    return [m for m in mec_members(g) if all(m.has_arc(u, v) for u, v in cut)]


def common_orientation(g: Dag, members: list[Dag]) -> Pdag:
    """Arcs shared by all members; every other skeleton edge undirected."""
    oriented = frozenset(arc for arc in g.arcs if all(m.has_arc(*arc) for m in members))
    undirected = frozenset(edge_key(u, v) for u, v in g.arcs if (u, v) not in oriented)
    return Pdag(g.n, oriented, undirected)


def has_chordless_cycle(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    """True when some vertex subset of size >= 4 induces a plain cycle."""
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    for size in range(4, n + 1):
        for subset in itertools.combinations(range(n), size):
            induced = graph.subgraph(subset)
            if all(d == 2 for _, d in induced.degree()) and nx.is_connected(induced):
                return True
    return False


def reachable(g: Dag, v: int) -> frozenset[int]:
    """Descendants by plain depth-first search."""
    seen, stack = set(), [v]
    while stack:
        for child in g.children(stack.pop()):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return frozenset(seen)


def minimum_vertex_cover_bruteforce(edges: Iterable[tuple[int, int]]) -> int:
    edges = list(edges)
    vertices = sorted({u for e in edges for u in e})
    for k in range(len(vertices) + 1):
        for chosen in itertools.combinations(vertices, k):
            picked = set(chosen)
            if all(u in picked or v in picked for u, v in edges):
                return k
    return len(vertices)
