# helpers/meek_engine.py
import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from helpers.errors import InconsistentInputError, InputError
from helpers.graph_core import Dag, Edge, Pdag, edge_key, edge_set, skeleton, v_structures

logger = logging.getLogger(__name__)


# --- Intervention Sets ---
@dataclass(frozen=True)
class InterventionSet:
    """Ordered list of interventions. Repeats are kept; semantics only look at the distinct targets."""

    interventions: tuple[frozenset[int], ...] = ()

    @classmethod
    def atomic(cls, vertices: Iterable[int]) -> "InterventionSet":
        return cls(tuple(frozenset([int(v)]) for v in vertices))

    def append(self, v: int) -> "InterventionSet":
        return InterventionSet(self.interventions + (frozenset([int(v)]),))

    def extend(self, other: "InterventionSet") -> "InterventionSet":
        return InterventionSet(self.interventions + other.interventions)

    @property
    def atomic_flags(self) -> tuple[bool, ...]:
        return tuple(len(i) == 1 for i in self.interventions)

    def vertices(self) -> tuple[int, ...]:
        """Performed atomic targets in order (the empty observational entry contributes nothing)."""
        return tuple(next(iter(i)) for i in self.interventions if len(i) == 1)

    def distinct(self) -> frozenset[frozenset[int]]:
        return frozenset(i for i in self.interventions if i)

    def __len__(self) -> int:
        return sum(1 for i in self.interventions if i)


# --- Orientation Helpers ---
def cut_arcs(g: Dag, intervention: Iterable[int]) -> frozenset[Edge]:
    """Arcs of g with exactly one endpoint inside the intervention target."""
    targets = set(intervention)
    return frozenset((u, v) for u, v in g.arcs if (u in targets) != (v in targets))


def orient(p: Pdag, arcs: Iterable[Edge]) -> Pdag:
    """Moves the given arcs from the undirected part into the oriented part."""
    new_arcs = set()
    for u, v in arcs:
        if p.has_arc(u, v):
            continue
        if p.has_arc(v, u):
            raise InconsistentInputError(f"Arc {u}->{v} contradicts the already oriented {v}->{u}.")
        if not p.has_undirected(u, v):
            raise InputError(f"Cannot orient {u}->{v}: the pair is not an edge of the graph.")
        new_arcs.add((u, v))
    if not new_arcs:
        return p
    return Pdag(p.n, p.oriented | new_arcs, p.undirected - edge_set(new_arcs))


# --- Meek Closure ---
class _ClosureState:
    def __init__(self, g: Pdag):
        self.n = g.n
        self.incoming = [set(g.parents(v)) for v in range(g.n)]
        self.outgoing = [set(g.children(v)) for v in range(g.n)]
        self.und = [set(g.undirected_neighbors(v)) for v in range(g.n)]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.und[a] or b in self.outgoing[a] or b in self.incoming[a]

    def neighbors(self, v: int) -> set[int]:
        return self.und[v] | self.outgoing[v] | self.incoming[v]

    def fires(self, a: int, b: int) -> str | None:
        """Name of the first Meek rule forcing a -> b on the undirected edge a - b, if any."""
        # R1: c -> a, c not adjacent to b
        for c in self.incoming[a]:
            if c != b and not self.adjacent(c, b):
                return "R1"
        # R2: a -> c -> b
        if self.outgoing[a] & self.incoming[b]:
            return "R2"
        # R3: a - c -> b, a - d -> b, c not adjacent to d
        into_b = sorted(self.und[a] & self.incoming[b])
        for i, c in enumerate(into_b):
            for d in into_b[i + 1:]:
                if not self.adjacent(c, d):
                    return "R3"
        # R4: a - d, d -> c -> b, a adjacent to c, d not adjacent to b
        for c in self.incoming[b]:
            if c == a or not self.adjacent(a, c):
                continue
            for d in self.incoming[c] & self.und[a]:
                if d != b and not self.adjacent(d, b):
                    return "R4"
        return None

    def orient(self, a: int, b: int) -> None:
        self.und[a].discard(b)
        self.und[b].discard(a)
        self.outgoing[a].add(b)
        self.incoming[b].add(a)

    def to_pdag(self) -> Pdag:
        oriented = frozenset((u, v) for u in range(self.n) for v in self.outgoing[u])
        undirected = frozenset(edge_key(u, v) for u in range(self.n) for v in self.und[u] if u < v)
        return Pdag(self.n, oriented, undirected)


def meek_closure(g: Pdag, shuffle_seed: int | None = None) -> Pdag:
    """
    Applies Meek rules R1-R4 until no undirected edge can be oriented further.

    Args:
        g: Partially directed graph with a consistent DAG extension.
        shuffle_seed: When set, the initial worklist is shuffled with this seed.
            The fixed point does not depend on the order; this only exists to
            exercise that.

    Returns:
        A Pdag with the same skeleton and a superset of the input's arcs.
    """
    state = _ClosureState(g)
    pending = sorted(g.undirected)
    if shuffle_seed is not None:
        order = np.random.default_rng(shuffle_seed).permutation(len(pending))
        pending = [pending[i] for i in order]
    queue = deque(pending)
    queued = set(pending)
    applied = 0

    while queue:
        a, b = queue.popleft()
        queued.discard((a, b))
        if b not in state.und[a]:
            continue
        forward = state.fires(a, b)
        backward = state.fires(b, a)
        if forward and backward:
            raise InconsistentInputError(
                f"Meek rules force both {a}->{b} ({forward}) and {b}->{a} ({backward}); "
                f"the partial orientation has no consistent DAG extension."
            )
        if not (forward or backward):
            continue
        tail, head = (a, b) if forward else (b, a)
        state.orient(tail, head)
        applied += 1
        # Anything touching the two endpoints or their neighbors may now fire
        touched = {tail, head} | state.neighbors(tail) | state.neighbors(head)
        for x in touched:
            for y in state.und[x]:
                key = edge_key(x, y)
                if key not in queued:
                    queued.add(key)
                    queue.append(key)

    if applied:
        logger.debug(f"Meek closure oriented {applied} additional edge(s).")
    return state.to_pdag()


# --- Essential Graphs ---
def essential_graph(g: Dag) -> Pdag:
    """CPDAG of g: skeleton with v-structure arcs oriented, then Meek closure."""
    compelled = set()
    for u, v, w in v_structures(g):
        compelled.add((u, v))
        compelled.add((w, v))
    undirected = skeleton(g) - edge_set(compelled)
    return meek_closure(Pdag(g.n, frozenset(compelled), undirected))


def interventional_essential_graph(g: Dag, iset: InterventionSet, base: Pdag | None = None) -> Pdag:
    """
    E_I(G): every edge cut by some intervention in `iset` is oriented as in g,
    on top of the essential graph, followed by Meek closure. `base` may pass a
    precomputed essential_graph(g).
    """
    revealed = base if base is not None else essential_graph(g)
    arcs = set()
    for intervention in iset.distinct():
        arcs |= cut_arcs(g, intervention)
    if not arcs:
        return revealed
    return meek_closure(orient(revealed, arcs))


def oriented_arcs(g: Dag, iset: InterventionSet) -> frozenset[Edge]:
    """R(G, I), the arcs of E_I(G)."""
    return interventional_essential_graph(g, iset).oriented


def recovered_parents(g: Dag, iset: InterventionSet, u: int) -> frozenset[int]:
    if not 0 <= u < g.n:
        raise InputError(f"Vertex {u} is outside the vertex range 0..{g.n - 1}.")
    return interventional_essential_graph(g, iset).parents(u)


def orienting_interventions(g: Dag, arc: Edge) -> frozenset[int]:
    """All w such that intervening on {w} alone orients `arc`."""
    u, v = arc
    if not g.has_arc(u, v):
        raise InputError(f"Arc {u}->{v} is not in the graph.")
    base = essential_graph(g)
    if base.has_arc(u, v):
        return frozenset(range(g.n))
    return frozenset(
        w for w in range(g.n)
        if interventional_essential_graph(g, InterventionSet.atomic([w]), base).has_arc(u, v)
    )
