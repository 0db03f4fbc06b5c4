# helpers/io_helper.py
import logging
import os
from typing import Iterator

from helpers.algorithms import SearchTranscript, TranscriptStep
from helpers.errors import MeekSepError, ParseError
from helpers.graph_core import Dag, Pdag
from helpers.graph_gen import MatchingInstance, SubsetInstance
from helpers.oracle import ShiftAssignment, ShiftSem

logger = logging.getLogger(__name__)


# --- Line Cursor ---
class _Lines:
    """Iterates over (line number, tokens) of non-blank lines with '#' comments stripped."""

    def __init__(self, text: str, path: str | None = None):
        self.path = path
        self._rows = []
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0].strip()
            if content:
                self._rows.append((number, content.split()))
        self._index = 0

    def error(self, message: str, line: int | None = None) -> ParseError:
        if line is None:
            line = self._rows[self._index - 1][0] if self._index else None
        return ParseError(message, self.path, line)

    def next(self, what: str) -> tuple[int, list[str]]:
        if self._index >= len(self._rows):
            last = self._rows[-1][0] if self._rows else None
            raise ParseError(f"Unexpected end of input while reading {what}.", self.path, last)
        row = self._rows[self._index]
        self._index += 1
        return row

    def rest(self) -> Iterator[tuple[int, list[str]]]:
        while self._index < len(self._rows):
            yield self.next("trailing data")

    def ints(self, tokens: list[str], count: int, what: str) -> list[int]:
        try:
            values = [int(t) for t in tokens[:count]]
        except ValueError:
            raise self.error(f"Expected {count} integer(s) for {what}, got {' '.join(tokens)!r}.") from None
        if len(values) != count or any(v < 0 for v in values):
            raise self.error(f"Expected {count} non-negative integer(s) for {what}, got {' '.join(tokens)!r}.")
        return values

    def real(self, token: str, what: str) -> float:
        try:
            return float(token)
        except ValueError:
            raise self.error(f"Expected a number for {what}, got {token!r}.") from None


# --- File Access ---
def read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise OSError(f"Could not read '{path}': {e.strerror or e}") from e


def write_text(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        logger.debug(f"Wrote {len(text)} characters to {path}.")
    except OSError as e:
        raise OSError(f"Could not write '{path}': {e.strerror or e}") from e


# --- Edge Lists ---
def format_graph(g: Dag | Pdag) -> list[str]:
    """Header 'n m d' then 'u v D' arcs and 'u v U' undirected edges, sorted."""
    if isinstance(g, Dag):
        arcs, undirected = g.arcs, frozenset()
    else:
        arcs, undirected = g.oriented, g.undirected
    lines = [f"{g.n} {len(arcs)} {len(undirected)}"]
    lines += [f"{u} {v} D" for u, v in sorted(arcs)]
    lines += [f"{u} {v} U" for u, v in sorted(undirected)]
    return lines


def _read_graph_body(cursor: _Lines, weighted: bool = False) -> tuple[Pdag, dict]:
    line, header = cursor.next("the graph header")
    n, m, d = cursor.ints(header, 3, "the header 'n m d'")
    if len(header) != 3:
        raise cursor.error("Header must be exactly 'n m d'.", line)
    arcs, undirected, weights = [], [], {}
    for _ in range(m + d):
        line, tokens = cursor.next("an edge line")
        if len(tokens) < 3 or tokens[2] not in ("D", "U"):
            raise cursor.error(f"Edge line must read 'u v D' or 'u v U', got {' '.join(tokens)!r}.", line)
        u, v = cursor.ints(tokens, 2, "edge endpoints")
        if u >= n or v >= n:
            raise cursor.error(f"Edge {u} {v} has an endpoint outside 0..{n - 1}.", line)
        if tokens[2] == "D":
            arcs.append((u, v))
            if weighted:
                if len(tokens) != 4:
                    raise cursor.error("Weighted arc lines must read 'u v D w'.", line)
                weights[(u, v)] = cursor.real(tokens[3], f"the weight of {u}->{v}")
        else:
            undirected.append((u, v))
    if len(arcs) != m or len(undirected) != d:
        raise cursor.error(f"Header promised {m} arc(s) and {d} undirected edge(s), found {len(arcs)} and {len(undirected)}.")
    try:
        graph = Pdag(n, frozenset(arcs), frozenset(undirected))
    except MeekSepError as e:
        raise cursor.error(f"Invalid graph: {e}") from e
    return graph, weights


def parse_graph(text: str, path: str | None = None) -> Pdag:
    cursor = _Lines(text, path)
    graph, _ = _read_graph_body(cursor)
    for line, tokens in cursor.rest():
        raise cursor.error(f"Unexpected trailing line {' '.join(tokens)!r}.", line)
    return graph


def parse_dag(text: str, path: str | None = None) -> Dag:
    graph = parse_graph(text, path)
    try:
        return graph.to_dag()
    except MeekSepError as e:
        raise ParseError(str(e), path) from e


# --- Shift Models ---
def format_sem(sem: ShiftSem) -> list[str]:
    lines = [f"{sem.n} {len(sem.weights)} 0"]
    lines += [f"{u} {v} D {w!r}" for (u, v), w in sem.weights]
    lines.append("intercepts " + " ".join(repr(c) for c in sem.intercepts))
    return lines


def _read_sem_body(cursor: _Lines) -> ShiftSem:
    graph, weights = _read_graph_body(cursor, weighted=True)
    line, tokens = cursor.next("the intercepts line")
    if tokens[0] != "intercepts":
        raise cursor.error("Expected an 'intercepts' line after the weighted arcs.", line)
    intercepts = [cursor.real(t, "an intercept") for t in tokens[1:]]
    try:
        return ShiftSem.from_dict(graph.to_dag(), weights, intercepts)
    except MeekSepError as e:
        raise cursor.error(f"Invalid shift model: {e}", line) from e


def parse_sem(text: str, path: str | None = None) -> ShiftSem:
    return _read_sem_body(_Lines(text, path))


def format_shifts(shifts: ShiftAssignment) -> list[str]:
    return [f"{v} {a!r}" for v, a in shifts.values]


def parse_shifts(text: str, path: str | None = None) -> ShiftAssignment:
    cursor = _Lines(text, path)
    values = {}
    for line, tokens in cursor.rest():
        if len(tokens) != 2:
            raise cursor.error(f"Shift lines must read 'v a', got {' '.join(tokens)!r}.", line)
        (v,) = cursor.ints(tokens[:1], 1, "the shifted vertex")
        if v in values:
            raise cursor.error(f"Vertex {v} is shifted twice.", line)
        values[v] = cursor.real(tokens[1], f"the shift of vertex {v}")
    return ShiftAssignment.from_dict(values)


# --- Instances ---
def _format_meta(meta: dict) -> list[str]:
    return ["meta"] + [f"{key}={value}" for key, value in meta.items()]


def _read_meta(cursor: _Lines) -> dict[str, str]:
    line, tokens = cursor.next("the meta section")
    if tokens != ["meta"]:
        raise cursor.error("Expected the 'meta' section.", line)
    meta = {}
    for line, tokens in cursor.rest():
        key, sep, value = " ".join(tokens).partition("=")
        if not sep or not key:
            raise cursor.error(f"Meta lines must read key=value, got {' '.join(tokens)!r}.", line)
        meta[key.strip()] = value.strip()
    return meta


def format_subset_instance(instance: SubsetInstance) -> str:
    lines = ["# subset search instance"] + format_graph(instance.hidden)
    lines.append(f"targets {len(instance.targets)}")
    lines += [f"{u} {v}" for u, v in sorted(instance.targets)]
    lines += _format_meta({
        "problem": "subset",
        "model": "rhop",
        "n": instance.n,
        "r": instance.r,
        "density": repr(instance.density),
        "seed": instance.seed,
        "center": instance.hop_center,
        "neighborhood": "skeleton",
    })
    return "\n".join(lines) + "\n"


def format_matching_instance(instance: MatchingInstance) -> str:
    lines = ["# mean matching instance"] + format_sem(instance.sem)
    lines.append(f"shifts {len(instance.hidden_targets)}")
    lines += format_shifts(instance.hidden_targets)
    lines.append("mean " + " ".join(repr(x) for x in instance.target_mean))
    lines += _format_meta({
        "problem": "matching",
        "model": instance.model,
        "n": instance.sem.n,
        "k": len(instance.hidden_targets),
        "seed": instance.seed,
    })
    return "\n".join(lines) + "\n"


def _section_count(cursor: _Lines, name: str) -> int:
    line, tokens = cursor.next(f"the '{name}' section")
    if len(tokens) != 2 or tokens[0] != name:
        raise cursor.error(f"Expected '{name} <count>', got {' '.join(tokens)!r}.", line)
    (count,) = cursor.ints(tokens[1:], 1, f"the {name} count")
    return count


def _meta_int(cursor: _Lines, meta: dict, key: str) -> int:
    try:
        return int(meta[key])
    except (KeyError, ValueError):
        raise cursor.error(f"Meta section needs an integer '{key}'.") from None


def parse_instance(text: str, path: str | None = None) -> SubsetInstance | MatchingInstance:
    """Reads a subset or matching instance; the kind is taken from the first section after the graph."""
    cursor = _Lines(text, path)
    # Only matching instances carry weights, detected by the arc line width
    weighted = _is_weighted(text)
    if weighted:
        sem = _read_sem_body(cursor)
        k = _section_count(cursor, "shifts")
        values = {}
        for _ in range(k):
            line, tokens = cursor.next("a shift line")
            if len(tokens) != 2:
                raise cursor.error(f"Shift lines must read 'v a', got {' '.join(tokens)!r}.", line)
            (v,) = cursor.ints(tokens[:1], 1, "the shifted vertex")
            values[v] = cursor.real(tokens[1], f"the shift of vertex {v}")
        line, tokens = cursor.next("the mean line")
        if tokens[0] != "mean" or len(tokens) != sem.n + 1:
            raise cursor.error(f"Expected 'mean' followed by {sem.n} values.", line)
        target_mean = tuple(cursor.real(t, "a mean value") for t in tokens[1:])
        meta = _read_meta(cursor)
        return MatchingInstance(
            sem, ShiftAssignment.from_dict(values), target_mean,
            meta.get("model", "custom"), _meta_int(cursor, meta, "seed"),
        )

    graph, _ = _read_graph_body(cursor)
    k = _section_count(cursor, "targets")
    targets = []
    for _ in range(k):
        line, tokens = cursor.next("a target line")
        if len(tokens) != 2:
            raise cursor.error(f"Target lines must read 'u v', got {' '.join(tokens)!r}.", line)
        u, v = cursor.ints(tokens, 2, "target endpoints")
        targets.append((min(u, v), max(u, v)))
    meta = _read_meta(cursor)
    try:
        hidden = graph.to_dag()
    except MeekSepError as e:
        raise ParseError(str(e), path) from e
    try:
        density = float(meta.get("density", "nan"))
    except ValueError:
        raise cursor.error("Meta 'density' is not a number.") from None
    return SubsetInstance(
        hidden, frozenset(targets), _meta_int(cursor, meta, "center"),
        hidden.n, _meta_int(cursor, meta, "r"), density, _meta_int(cursor, meta, "seed"),
    )


def _is_weighted(text: str) -> bool:
    for raw in text.splitlines():
        tokens = raw.split("#", 1)[0].split()
        if len(tokens) >= 3 and tokens[2] == "D":
            return len(tokens) == 4
        if tokens[:1] == ["intercepts"]:
            return True
    return False


# --- Transcripts ---
def format_transcript(transcript: SearchTranscript) -> str:
    lines = [f"{s.step} {s.vertex} {s.largest_component} {s.branch}" for s in transcript.steps]
    lines.append(f"total={transcript.total}")
    return "\n".join(lines) + "\n"


def parse_transcript(text: str, path: str | None = None) -> SearchTranscript:
    cursor = _Lines(text, path)
    steps = []
    total = None
    for line, tokens in cursor.rest():
        if total is not None:
            raise cursor.error("Nothing may follow the 'total=N' line.", line)
        if len(tokens) == 1 and tokens[0].startswith("total="):
            (total,) = cursor.ints([tokens[0][len("total="):]], 1, "the total")
            continue
        if len(tokens) != 4:
            raise cursor.error(f"Transcript lines must read 'step vertex size branch', got {' '.join(tokens)!r}.", line)
        step, vertex, size = cursor.ints(tokens, 3, "a transcript step")
        steps.append(TranscriptStep(step, vertex, size, tokens[3]))
    if total is None:
        raise cursor.error("Transcript is missing its final 'total=N' line.")
    return SearchTranscript(steps, total)
