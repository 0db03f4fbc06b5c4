# tests/test_io_helper.py
import pytest

from helpers.algorithms import SearchTranscript, TranscriptStep
from helpers.errors import ParseError
from helpers.graph_core import Dag, Pdag
from helpers.graph_gen import MatchingInstance, SubsetInstance, er_dag, matching_instance, r_hop_instance
from helpers.io_helper import (
    format_graph, format_matching_instance, format_sem, format_shifts, format_subset_instance, format_transcript,
    parse_dag, parse_graph, parse_instance, parse_sem, parse_shifts, parse_transcript, read_text, write_text,
)
from helpers.oracle import ShiftAssignment, ShiftSem


# --- Edge Lists ---
def test_parse_graph_reads_mixed_edges_and_comments():
    text = "# a partially directed graph\n3 1 1\n0 1 D  # arc\n\n1 2 U\n"
    g = parse_graph(text)
    assert g.n == 3
    assert g.oriented == {(0, 1)}
    assert g.undirected == {(1, 2)}


def test_format_graph_is_sorted():
    g = Pdag(4, frozenset({(2, 3), (0, 1)}), frozenset({(1, 2)}))
    assert format_graph(g) == ["4 2 1", "0 1 D", "2 3 D", "1 2 U"]
    assert parse_graph("\n".join(format_graph(g))) == g


def test_parse_dag_rejects_undirected_edges():
    with pytest.raises(ParseError):
        parse_dag("2 0 1\n0 1 U\n")


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 2 0\n0 1 D\n", 2),         # promised two arcs, found one
        ("3 1 0\n0 5 D\n", 2),         # endpoint out of range
        ("3 1 0\n0 1 X\n", 2),         # unknown edge kind
        ("3 x 0\n", 1),                # non-integer header
        ("# c\n3 1 0\n0 1 D\n9 9\n", 4),  # trailing data
    ],
)
def test_parse_graph_reports_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text, "g.txt")
    assert info.value.line == line
    assert info.value.path == "g.txt"
    assert str(info.value).startswith(f"g.txt:{line}:")


def test_parse_graph_rejects_pairs_oriented_both_ways():
    with pytest.raises(ParseError, match="Invalid graph"):
        parse_graph("2 2 0\n0 1 D\n1 0 D\n")


# --- Shift Models ---
def test_sem_and_shifts_survive_a_text_pass():
    sem = ShiftSem.from_dict(Dag.from_arcs(3, [(0, 1), (1, 2)]), {(0, 1): 0.5, (1, 2): -1.25}, [0.0, 1.0, 0.0])
    assert parse_sem("\n".join(format_sem(sem))) == sem
    shifts = ShiftAssignment.from_dict({2: 1.5, 0: -0.75})
    assert format_shifts(shifts) == ["0 -0.75", "2 1.5"]
    assert parse_shifts("\n".join(format_shifts(shifts))) == shifts


def test_parse_sem_needs_a_weight_on_every_arc():
    with pytest.raises(ParseError, match="'u v D w'"):
        parse_sem("2 1 0\n0 1 D\nintercepts 0 0\n")


def test_parse_sem_needs_one_intercept_per_vertex():
    with pytest.raises(ParseError, match="Invalid shift model") as info:
        parse_sem("2 1 0\n0 1 D 0.5\nintercepts 0\n")
    assert info.value.line == 3


def test_parse_shifts_rejects_duplicates():
    with pytest.raises(ParseError, match="shifted twice") as info:
        parse_shifts("1 0.5\n1 0.25\n")
    assert info.value.line == 2


# --- Instances ---
def test_subset_instance_text_pass():
    instance = r_hop_instance(15, 2, density=0.1, seed=7)
    text = format_subset_instance(instance)
    assert text.startswith("# subset search instance\n")
    parsed = parse_instance(text, "s.txt")
    assert isinstance(parsed, SubsetInstance)
    assert parsed == instance


def test_matching_instance_text_pass():
    instance = matching_instance(er_dag(12, 0.3, seed=2), 4, seed=2, model="er")
    parsed = parse_instance(format_matching_instance(instance), "m.txt")
    assert isinstance(parsed, MatchingInstance)
    assert parsed == instance


def test_matching_instance_without_arcs_is_still_recognized():
    instance = matching_instance(Dag.from_arcs(3, []), 1, seed=0)
    assert isinstance(parse_instance(format_matching_instance(instance)), MatchingInstance)


def test_instance_without_meta_section_fails():
    text = "3 1 0\n0 1 D\ntargets 1\n0 1\n"
    with pytest.raises(ParseError, match="meta"):
        parse_instance(text)


def test_instance_with_bad_meta_line_reports_it():
    text = "2 1 0\n0 1 D\ntargets 1\n0 1\nmeta\ncenter=0\nnot a pair\n"
    with pytest.raises(ParseError, match="key=value") as info:
        parse_instance(text)
    assert info.value.line == 7


def test_instance_mean_line_must_match_n():
    text = "2 1 0\n0 1 D 1.0\nintercepts 0 0\nshifts 0\nmean 0\nmeta\nseed=1\n"
    with pytest.raises(ParseError, match="'mean'") as info:
        parse_instance(text)
    assert info.value.line == 5


# --- Transcripts ---
def test_transcript_text_pass():
    transcript = SearchTranscript(
        [TranscriptStep(1, 0, 3, "descend"), TranscriptStep(2, 3, 3, "ascend"), TranscriptStep(3, 1, 2, "separator")],
        3,
    )
    text = format_transcript(transcript)
    assert text == "1 0 3 descend\n2 3 3 ascend\n3 1 2 separator\ntotal=3\n"
    assert parse_transcript(text) == transcript


def test_transcript_needs_a_total():
    with pytest.raises(ParseError, match="total=N"):
        parse_transcript("1 0 3 descend\n")


def test_transcript_rejects_lines_after_the_total():
    with pytest.raises(ParseError) as info:
        parse_transcript("total=0\n1 0 3 descend\n")
    assert info.value.line == 2


# --- File Access ---
def test_write_text_creates_parent_directories(tmp_path):
    path = tmp_path / "nested" / "dir" / "out.txt"
    write_text(str(path), "a\nb\n")
    assert read_text(str(path)) == "a\nb\n"


def test_read_text_names_the_missing_file(tmp_path):
    missing = str(tmp_path / "missing.txt")
    with pytest.raises(OSError, match="missing.txt"):
        read_text(missing)
