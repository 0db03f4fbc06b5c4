# helpers/algorithms.py
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import networkx as nx
import numpy as np

from helpers.chordal import UndirectedGraph, clique_separator
from helpers.constants import (
    BRANCH_ASCEND, BRANCH_DESCEND, BRANCH_EARLY_STOP, BRANCH_RANDOM, BRANCH_SEPARATOR,
    BRUTEFORCE_MAX_VERTICES, MAX_MATCHING_ROUNDS_FACTOR, MEAN_TOLERANCE,
)
from helpers.errors import BoundExceededError, InputError, NonRealizableTargetError, PreconditionError, StructuralError
from helpers.graph_core import Dag, EdgeSet, Pdag, chain_components, covered_edges, directed_reach, edge_set, skeleton
from helpers.meek_engine import (
    InterventionSet, cut_arcs, essential_graph, interventional_essential_graph, meek_closure, orient,
)
from helpers.oracle import InterventionOracle, MeanOracle, ShiftAssignment, mismatch_of

logger = logging.getLogger(__name__)

Picker = Callable[[Sequence[int]], int]


# --- Results & Transcripts ---
@dataclass(frozen=True)
class MeekSeparatorResult:
    separator: frozenset[int]
    intervened: tuple[int, ...]
    component_sizes: tuple[int, ...]  # chain components of the input component after the separator, by min id
    stopped_early: bool = False


@dataclass(frozen=True)
class TranscriptStep:
    step: int
    vertex: int
    largest_component: int
    branch: str


@dataclass
class SearchTranscript:
    """One step per oracle query made by an algorithm; `total` follows the oracle counter."""

    steps: list[TranscriptStep] = field(default_factory=list)
    total: int = 0

    def record(self, vertex: int, largest_component: int, branch: str) -> None:
        self.steps.append(TranscriptStep(len(self.steps) + 1, vertex, largest_component, branch))
        self.total += 1


def _record(transcript: SearchTranscript | None, vertex: int, largest: int, branch: str) -> None:
    logger.debug(f"Queried vertex {vertex}: largest component {largest}, branch '{branch}'.")
    if transcript is not None:
        transcript.record(vertex, largest, branch)


def uniform_picker(rng: np.random.Generator) -> Picker:
    """Uniform choice from the candidate list, driven by `rng`."""
    return lambda candidates: int(rng.choice(list(candidates)))


def _delta(o: InterventionOracle, start: int) -> InterventionSet:
    return InterventionSet(o.performed.interventions[start:])


def _largest(components: Iterable[frozenset[int]]) -> frozenset[int]:
    # ties go to the component with the smallest minimum id
    return max(components, key=lambda c: (len(c), -min(c)))


# --- Shared Queries ---
def unoriented_targets(revealed: Pdag, targets: EdgeSet) -> EdgeSet:
    return frozenset(t for t in targets if revealed.has_undirected(*t))


def identified_sources(revealed: Pdag, u_set: Iterable[int]) -> frozenset[int]:
    """Members of u_set whose every edge to another member is oriented away from them."""
    members = frozenset(u_set)
    return frozenset(
        v for v in members
        if all(revealed.has_arc(v, t) for t in revealed.neighbors(v) & members)
    )


def _validate_targets(revealed: Pdag, targets: Iterable[tuple[int, int]]) -> EdgeSet:
    targets = edge_set(targets)
    missing = targets - skeleton(revealed)
    if missing:
        raise InputError(f"{len(missing)} target edge(s) are not in the graph, e.g. {min(missing)}.")
    return targets


def _target_components(revealed: Pdag, pending: EdgeSet) -> list[frozenset[int]]:
    """Chain components with at least two vertices holding an unoriented target edge, by min id."""
    touched = {u for edge in pending for u in edge}
    return [c for c in chain_components(revealed) if len(c) >= 2 and c & touched]


# --- Meek Separator ---
def _local_essential(revealed: Pdag, base: Pdag, local_of: dict[int, int], vertices: Iterable[int]) -> Pdag:
    """
    Component-local graph after intervening on `vertices`: the undirected chain
    component plus the (already revealed) arcs at those vertices, closed under Meek rules.
    """
    arcs = set()
    for v in vertices:
        for nb in revealed.neighbors(v):
            if nb not in local_of:
                continue
            if revealed.has_arc(v, nb):
                arcs.add((local_of[v], local_of[nb]))
            elif revealed.has_arc(nb, v):
                arcs.add((local_of[nb], local_of[v]))
            else:
                raise StructuralError(f"Edge {v}~{nb} is still undirected after intervening on {v}.")
    return meek_closure(orient(base, arcs))


def meek_separator(
    o: InterventionOracle,
    component: Iterable[int],
    rng_seed: int = 0,
    *,
    picker: Picker | None = None,
    stop_when: Callable[[Pdag], bool] | None = None,
    transcript: SearchTranscript | None = None,
) -> MeekSeparatorResult:
    """
    Finds at most two vertices whose interventions split a chain component so that
    every resulting component has at most half of its vertices.

    Vertices are drawn from a clique separator of the component, narrowing the
    clique towards its descendants or ancestors depending on where the largest
    remaining component lies.

    Args:
        o: Oracle holding the hidden graph; every query goes through it.
        component: A chain component of `o.revealed` with at least two vertices.
        rng_seed: Seed for the default uniform picker.
        picker: Overrides the choice of the next vertex from the remaining clique.
        stop_when: Checked on the revealed graph after every query; returning
            True ends the search with `stopped_early` set.
        transcript: Receives one step per query.

    Raises:
        PreconditionError: `component` is not a current chain component of size >= 2.
    """
    component = frozenset(component)
    revealed = o.revealed
    if len(component) < 2:
        raise PreconditionError(f"Meek separator needs a component with at least 2 vertices, got {len(component)}.")
    if component not in chain_components(revealed):
        raise PreconditionError(f"Vertices {sorted(component)[:8]} do not form a chain component of the revealed graph.")
    if picker is None:
        picker = uniform_picker(np.random.default_rng(rng_seed))

    chordal_graph, mapping = UndirectedGraph.from_component(revealed, component)
    local_of = {v: i for i, v in enumerate(mapping)}
    base = Pdag(len(mapping), frozenset(), chordal_graph.edges)
    size = len(component)

    remaining = sorted(mapping[i] for i in clique_separator(chordal_graph).clique)
    u = x = None
    intervened: list[int] = []
    stopped_early = False

    while remaining:
        u_i = int(picker(remaining))
        if u_i not in remaining:
            raise InputError(f"Picker returned {u_i}, which is not among the candidates {remaining}.")
        o.intervene(u_i)
        intervened.append(u_i)
        local = _local_essential(o.revealed, base, local_of, [u_i])
        largest = _largest(chain_components(local))

        if 2 * len(largest) <= size:
            _record(transcript, u_i, len(largest), BRANCH_SEPARATOR)
            u, x = u_i, None
            break

        if stop_when is not None and stop_when(o.revealed):
            _record(transcript, u_i, len(largest), BRANCH_EARLY_STOP)
            u, x = u_i, None
            stopped_early = True
            break

        here = local_of[u_i]
        if directed_reach(local, [here]) & largest:
            children = {mapping[c] for c in local.children(here)}
            remaining = [v for v in remaining if v in children]
            u = u_i
            _record(transcript, u_i, len(largest), BRANCH_DESCEND)
        else:
            parents = {mapping[p] for p in local.parents(here)}
            remaining = [v for v in remaining if v in parents]
            x = u_i
            _record(transcript, u_i, len(largest), BRANCH_ASCEND)

    separator = frozenset(v for v in (u, x) if v is not None)
    after = _local_essential(o.revealed, base, local_of, separator)
    sizes = tuple(len(c) for c in chain_components(after))
    logger.debug(f"Meek separator {sorted(separator)} for a component of {size} after {len(intervened)} intervention(s).")
    return MeekSeparatorResult(separator, tuple(intervened), sizes, stopped_early)


# --- Subset Search ---
def subset_search(
    o: InterventionOracle,
    targets: Iterable[tuple[int, int]],
    rng_seed: int = 0,
    *,
    early_stop: bool = False,
    transcript: SearchTranscript | None = None,
) -> InterventionSet:
    """
    Orients every target edge by running Meek separators on each chain
    component that still holds an unoriented target, round after round.
    With `early_stop`, the search ends as soon as all targets are oriented,
    even in the middle of a separator search.
    """
    targets = _validate_targets(o.revealed, targets)
    picker = uniform_picker(np.random.default_rng(rng_seed))
    start = len(o.performed.interventions)
    stop_when = (lambda revealed: not unoriented_targets(revealed, targets)) if early_stop else None

    rounds = 0
    while unoriented_targets(o.revealed, targets):
        rounds += 1
        pending = unoriented_targets(o.revealed, targets)
        components = _target_components(o.revealed, pending)
        logger.debug(f"Subset search round {rounds}: {len(pending)} target(s) left in {len(components)} component(s).")
        finished = False
        for component in components:
            if early_stop and not unoriented_targets(o.revealed, targets):
                finished = True
                break
            result = meek_separator(o, component, picker=picker, stop_when=stop_when, transcript=transcript)
            if result.stopped_early:
                finished = True
                break
        if finished:
            break

    performed = _delta(o, start)
    logger.info(f"Subset search oriented {len(targets)} target(s) with {len(performed)} intervention(s).")
    return performed


def random_baseline(
    o: InterventionOracle,
    targets: Iterable[tuple[int, int]],
    rng_seed: int = 0,
    *,
    transcript: SearchTranscript | None = None,
) -> InterventionSet:
    """Intervenes on uniformly drawn, not yet used vertices of components that hold unoriented targets."""
    targets = _validate_targets(o.revealed, targets)
    rng = np.random.default_rng(rng_seed)
    start = len(o.performed.interventions)
    used: set[int] = set()

    while pending := unoriented_targets(o.revealed, targets):
        pool = sorted(v for c in _target_components(o.revealed, pending) for v in c if v not in used)
        if not pool:
            raise StructuralError("Every vertex of the remaining components was used and targets are still unoriented.")
        v = int(rng.choice(pool))
        used.add(v)
        revealed = o.intervene(v)
        _record(transcript, v, len(_largest(chain_components(revealed))), BRANCH_RANDOM)

    return _delta(o, start)


# --- Source Finding ---
def _source_component(revealed: Pdag, u_set: frozenset[int]) -> frozenset[int]:
    """Chain component meeting u_set with no directed path from another such component (smallest min id wins)."""
    components = chain_components(revealed)
    comp_of = {v: i for i, c in enumerate(components) for v in c}
    condensed = nx.DiGraph()
    condensed.add_nodes_from(range(len(components)))
    condensed.add_edges_from((comp_of[a], comp_of[b]) for a, b in revealed.oriented)

    candidates = [i for i, c in enumerate(components) if c & u_set]
    reached = set()
    for i in candidates:
        reached |= nx.descendants(condensed, i)
    sources = [i for i in candidates if i not in reached]
    if not sources:
        raise StructuralError("No source component found; the revealed graph has a directed cycle between components.")
    return components[sources[0]]


def find_source(
    o: InterventionOracle,
    u_set: Iterable[int],
    rng_seed: int = 0,
    *,
    strategy: str = "separator",
    early_stop: bool = False,
    accept: Callable[[Pdag], int | None] | None = None,
    transcript: SearchTranscript | None = None,
) -> tuple[int, InterventionSet]:
    """
    Finds a vertex of u_set with no ancestor in u_set.

    Args:
        strategy: "separator" splits the source component with Meek separators;
            "random" intervenes on random vertices of it instead.
        early_stop: Check after every intervention whether the source is already
            determined instead of finishing the current separator search.
        accept: Custom early-exit test; returns a source vertex once one can be
            read off the revealed graph. Implies early_stop.
    """
    u_set = frozenset(u_set)
    if not u_set:
        raise InputError("find_source needs a non-empty vertex set.")
    if strategy not in ("separator", "random"):
        raise InputError(f"Unknown source search strategy '{strategy}'.")
    start = len(o.performed.interventions)

    def single_member(revealed: Pdag) -> int | None:
        members = _source_component(revealed, u_set) & u_set
        return next(iter(members)) if len(members) == 1 else None

    if accept is None and early_stop:
        accept = single_member

    rng = np.random.default_rng(rng_seed)
    picker = uniform_picker(rng)
    used: set[int] = set()

    while True:
        if accept is not None and (found := accept(o.revealed)) is not None:
            return found, _delta(o, start)
        component = _source_component(o.revealed, u_set)
        if len(component & u_set) <= 1:
            break
        if strategy == "separator":
            stop_when = (lambda revealed: accept(revealed) is not None) if accept is not None else None
            meek_separator(o, component, picker=picker, stop_when=stop_when, transcript=transcript)
        else:
            pool = sorted(v for v in component if v not in used)
            v = int(rng.choice(pool))
            used.add(v)
            revealed = o.intervene(v)
            _record(transcript, v, len(_largest(chain_components(revealed))), BRANCH_RANDOM)

    (source,) = component & u_set
    return source, _delta(o, start)


# --- Causal Mean Matching ---
def causal_mean_match(
    o: InterventionOracle,
    sem_oracle: MeanOracle,
    target_mean,
    rng_seed: int = 0,
    *,
    tol: float = MEAN_TOLERANCE,
    strategy: str = "separator",
    early_stop: bool = False,
    transcript: SearchTranscript | None = None,
) -> ShiftAssignment:
    """
    Recovers the shift interventions that move the observational mean onto
    `target_mean`, fixing identified sources of the mismatch set round by round.

    Raises:
        NonRealizableTargetError: the mismatch set never empties, e.g. a vertex
            that was already shifted shows up mismatched again.
    """
    target = np.asarray(target_mean, dtype=float)
    if target.shape != (o.n,):
        raise InputError(f"Target mean has {target.shape[0] if target.ndim else 0} entries, expected {o.n}.")
    seeds = np.random.SeedSequence(rng_seed)
    current = ShiftAssignment()
    shifted: set[int] = set()
    max_rounds = MAX_MATCHING_ROUNDS_FACTOR * o.n + 1

    for rounds in itertools.count(1):
        mean = sem_oracle.query(current)
        mismatched = mismatch_of(mean, target, tol)
        if not mismatched:
            break
        if rounds > max_rounds:
            raise NonRealizableTargetError(f"Mean still mismatched on {len(mismatched)} vertex(es) after {max_rounds} rounds.")
        repeated = mismatched & shifted
        if repeated:
            raise NonRealizableTargetError(
                f"Vertex {min(repeated)} is mismatched again after its shift was applied; the target mean is not realizable."
            )

        sources = identified_sources(o.revealed, mismatched)
        if not sources:
            accept = None
            if early_stop:
                accept = lambda revealed: min(identified_sources(revealed, mismatched), default=None)
            source, _ = find_source(
                o, mismatched, int(seeds.spawn(1)[0].generate_state(1)[0]),
                strategy=strategy, accept=accept, transcript=transcript,
            )
            sources = identified_sources(o.revealed, mismatched) or frozenset([source])

        shifts = {v: float(target[v] - mean[v]) for v in sorted(sources)}
        logger.debug(f"Matching round {rounds}: shifting {sorted(shifts)}.")
        current = current.with_shifts(shifts)
        shifted |= sources

    logger.info(f"Mean matching recovered {len(current)} shift(s) with {o.count} structural intervention(s).")
    return current


# --- Lower Bounds & Verification Numbers ---
def _components_with_targets(revealed: Pdag, targets: EdgeSet) -> int:
    return len(_target_components(revealed, unoriented_targets(revealed, targets)))


def subset_lower_bound(g: Dag, targets: Iterable[tuple[int, int]]) -> int:
    """Largest number of target-holding chain components over the empty and every single-vertex intervention."""
    base = essential_graph(g)
    targets = _validate_targets(base, targets)
    if not targets:
        return 0
    best = _components_with_targets(base, targets)
    for v in range(g.n):
        revealed = interventional_essential_graph(g, InterventionSet.atomic([v]), base)
        best = max(best, _components_with_targets(revealed, targets))
    return best


def minimum_vertex_cover_size(edges: Iterable[tuple[int, int]]) -> int:
    """Exact minimum vertex cover by branch and bound (branch on a max-degree vertex, prune with a matching bound)."""
    adjacency: dict[int, set[int]] = {}
    for u, v in edge_set(edges):
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)

    best = len(adjacency)

    def matching_bound(adj: dict[int, set[int]]) -> int:
        matched: set[int] = set()
        size = 0
        for u in sorted(adj):
            if u in matched:
                continue
            for v in sorted(adj[u]):
                if v not in matched:
                    matched.update((u, v))
                    size += 1
                    break
        return size

    def remove(adj: dict[int, set[int]], vertices: Iterable[int]) -> dict[int, set[int]]:
        gone = set(vertices)
        reduced = {u: nbrs - gone for u, nbrs in adj.items() if u not in gone}
        return {u: nbrs for u, nbrs in reduced.items() if nbrs}

    def branch(adj: dict[int, set[int]], chosen: int) -> None:
        nonlocal best
        if not adj:
            best = min(best, chosen)
            return
        if chosen + matching_bound(adj) >= best:
            return
        pivot = max(sorted(adj), key=lambda u: len(adj[u]))
        branch(remove(adj, [pivot]), chosen + 1)
        neighbours = adj[pivot]
        branch(remove(adj, neighbours), chosen + len(neighbours))

    branch(adjacency, 0)
    return best


def full_verification_number(g: Dag) -> int:
    """Minimum vertex cover of the covered edges of g."""
    return minimum_vertex_cover_size(covered_edges(g))


def subset_verification_bruteforce(g: Dag, targets: Iterable[tuple[int, int]], k_max: int | None = None) -> int:
    """Smallest k such that some k atomic interventions orient every target, by enumeration."""
    if g.n > BRUTEFORCE_MAX_VERTICES:
        raise InputError(f"Brute-force verification is limited to {BRUTEFORCE_MAX_VERTICES} vertices, got {g.n}.")
    base = essential_graph(g)
    targets = _validate_targets(base, targets)
    k_max = g.n if k_max is None else k_max
    if not unoriented_targets(base, targets):
        return 0

    arcs_by_target = {(u, v) if g.has_arc(u, v) else (v, u) for u, v in targets}
    for k in range(1, k_max + 1):
        for chosen in itertools.combinations(range(g.n), k):
            cuts = set()
            for v in chosen:
                cuts |= cut_arcs(g, [v])
            revealed = meek_closure(orient(base, cuts))
            if arcs_by_target <= revealed.oriented:
                return k
    raise BoundExceededError(f"No set of at most {k_max} atomic interventions orients all {len(targets)} target(s).")
