# tests/test_commands.py
import argparse
import io

import pandas as pd
import pytest

import meeksep
from commands.gen import build_instance_text, instance_path
from commands.report import chart_axis, load_results, render_report, successful_rows, summarize
from commands.run import run_cell
from helpers.config_helper import build_config, load_config_file
from helpers.constants import CSV_COLUMNS, DEFAULT_CONFIG, ERROR_INTERVENTIONS, RHOP_DENSITY
from helpers.errors import EmptyInputError, InputError, ParseError
from helpers.io_helper import parse_transcript, write_text
from utils.seed_mapper import instance_seed, method_seed, split_seed
from utils.status_mapper import get_status_marker, row_status
from utils.svg_chart import line_chart

ALL_METHODS = "meeksep,meeksep1,random,verification-lb,bruteforce-nu"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    monkeypatch.delenv("MEEKSEP_JOBS", raising=False)
    monkeypatch.delenv("MEEKSEP_LOG_LEVEL", raising=False)
    monkeypatch.chdir(tmp_path)


def _csv(rows: list[list]) -> str:
    lines = [",".join(CSV_COLUMNS)] + [",".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


# --- Configuration ---
def test_defaults_fill_per_problem_values():
    config = build_config()
    assert config.problem == "subset"
    assert config.model == "rhop"
    assert config.density == RHOP_DENSITY
    assert config.std_multiplier == 0.5
    assert config.methods == ("meeksep", "meeksep1", "random", "verification-lb")
    assert config.timing is True

    matching = build_config(overrides={"problem": "matching"})
    assert (matching.model, matching.density, matching.std_multiplier) == ("er", 0.2, 0.2)


def test_precedence_env_then_file_then_flags(monkeypatch):
    monkeypatch.setenv("MEEKSEP_JOBS", "3")
    assert build_config().jobs == 3
    assert build_config({"jobs": "2"}).jobs == 2
    assert build_config({"jobs": "2"}, {"jobs": "4", "seed": None}).jobs == 4


def test_list_values_are_parsed():
    config = build_config(overrides={"n_values": "8, 16,32", "param_values": "1,2", "timing": "False"})
    assert config.n_values == (8, 16, 32)
    assert config.param_values == (1, 2)
    assert config.timing is False


@pytest.mark.parametrize(
    "overrides, message",
    [
        ({"problem": "sorting"}, "Unknown problem"),
        ({"model": "er"}, "r-hop graphs only"),
        ({"problem": "matching", "model": "grid"}, "Unknown graph model"),
        ({"methods": "meeksep,oracle"}, "Unknown method"),
        ({"repetitions": "0"}, "repetitions"),
        ({"jobs": "0"}, "jobs"),
        ({"density": "1.5"}, "density"),
        ({"tol": "0"}, "tol"),
        ({"n_values": "1,8"}, "at least 2"),
        ({"param_values": "0"}, "Invalid parameter"),
        ({"seed": "abc"}, "'seed'"),
        ({"timing": "maybe"}, "'timing'"),
        ({"n_values": ","}, "'n_values'"),
    ],
)
def test_invalid_config_is_rejected(overrides, message):
    with pytest.raises(InputError, match=message):
        build_config(overrides=overrides)


def test_matching_allows_zero_shift_targets():
    assert build_config(overrides={"problem": "matching", "param_values": "0"}).param_values == (0,)


def test_load_config_file_drops_unknown_keys(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# experiment\njobs=2\nseed=5\nflavor=vanilla\n", encoding="utf-8")
    assert load_config_file(str(path)) == {"jobs": "2", "seed": "5"}


def test_load_config_file_missing(tmp_path):
    with pytest.raises(OSError):
        load_config_file(str(tmp_path / "absent.cfg"))


def test_every_config_key_has_a_default():
    config = build_config()
    assert set(DEFAULT_CONFIG) == set(config.__dataclass_fields__)


# --- Seeds and Markers ---
def test_seeds_are_stable_and_separated():
    assert split_seed(1, "x", 2) == split_seed(1, "x", 2)
    assert split_seed(1, "x", 2) != split_seed(1, "y", 2)
    assert instance_seed(1, "subset", 8, 2, 0) != instance_seed(1, "subset", 8, 2, 1)
    assert method_seed(7, "meeksep") != method_seed(7, "random")
    assert 0 <= split_seed(123, "z") < 2**32


def test_status_markers():
    assert row_status(ERROR_INTERVENTIONS) == "error"
    assert row_status(0) == "ok"
    assert "FAILED" in get_status_marker("error")
    assert "?" in get_status_marker("no-such-status")


# --- Generation ---
def test_instance_text_depends_only_on_the_cell():
    config = build_config(overrides={"n_values": "10", "param_values": "2", "seed": "9"})
    assert build_instance_text(config, 10, 2, 0) == build_instance_text(config, 10, 2, 0)
    assert build_instance_text(config, 10, 2, 0) != build_instance_text(config, 10, 2, 1)
    assert instance_path(config, 10, 2, 3).endswith("subset_n10_p2_r003.txt")


def test_matching_instance_text_names_its_model():
    config = build_config(overrides={"problem": "matching", "model": "ba", "seed": "2"})
    assert "model=ba" in build_instance_text(config, 12, 3, 0)


# --- End to End ---
def _pipeline(root, problem: str, extra_gen: list[str], methods: str) -> tuple[str, str]:
    instances = str(root / "instances")
    results = str(root / "results.csv")
    report = str(root / "report.svg")
    common = ["--problem", problem, "--seed", "3"]
    assert meeksep.main(["gen", *common, "--n-values", "8", "--reps", "2", "--out", instances, *extra_gen]) == 0
    assert meeksep.main(
        ["run", *common, "--methods", methods, "--instances", instances, "--timing", "false", "--out", results]
    ) == 0
    assert meeksep.main(["report", results, "--problem", problem, "--out", report]) == 0
    return results, report


def test_subset_pipeline_is_byte_stable(tmp_path):
    first, report = _pipeline(tmp_path / "a", "subset", ["--params", "2"], ALL_METHODS)
    second, _ = _pipeline(tmp_path / "b", "subset", ["--params", "2"], ALL_METHODS)
    with open(first, "rb") as a, open(second, "rb") as b:
        assert a.read() == b.read()

    frame = pd.read_csv(first)
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 2 * 5
    assert (frame["interventions"] != ERROR_INTERVENTIONS).all()
    assert (frame["ms"] == 0.0).all()

    wide = frame.pivot(index="seed", columns="method", values="interventions")
    lower = frame.groupby("seed")["lower_bound"].first()
    assert (wide["verification-lb"] == lower).all()
    assert (lower <= wide["bruteforce-nu"]).all()
    assert (wide["bruteforce-nu"] <= wide["meeksep"]).all()

    with open(report, encoding="utf-8") as handle:
        svg = handle.read()
    assert svg.startswith("<svg")
    assert svg.count("<polyline") == 5


def test_matching_pipeline_marks_bruteforce_as_error(tmp_path):
    results, report = _pipeline(tmp_path, "matching", ["--params", "3", "--density", "0.3"], ALL_METHODS)
    frame = pd.read_csv(results)
    errors = frame[frame["interventions"] == ERROR_INTERVENTIONS]
    assert set(errors["method"]) == {"bruteforce-nu"}
    ok = frame[frame["interventions"] != ERROR_INTERVENTIONS]
    assert (ok["lower_bound"] == 3).all()
    assert (ok["interventions"] >= ok["lower_bound"]).all()
    with open(report, encoding="utf-8") as handle:
        assert handle.read().count("<polyline") == 4


def test_run_cell_records_lower_bound_for_verification_method(tmp_path):
    config = build_config(overrides={"n_values": "8", "param_values": "2", "instances_dir": str(tmp_path)})
    path = instance_path(config, 8, 2, 0)
    write_text(path, build_instance_text(config, 8, 2, 0))
    row = run_cell(path, "verification-lb", config.tol, timing=False)
    assert row["interventions"] == row["lower_bound"]
    assert (row["n"], row["param"], row["ms"]) == (8, 2, 0.0)


def test_run_cell_turns_failures_into_error_rows(tmp_path):
    path = tmp_path / "subset_broken.txt"
    path.write_text("3 1 0\n0 1 D\ntargets 1\n0 1\nmeta\nseed=1\ncenter=0\nr=1\ndensity=0.1\n", encoding="utf-8")
    row = run_cell(str(path), "meeksep", 1e-9, timing=False)
    assert row["interventions"] != ERROR_INTERVENTIONS
    path.write_text("3 1 0\n0 1 D\ntargets 1\n1 2\nmeta\nseed=1\ncenter=0\nr=1\ndensity=0.1\n", encoding="utf-8")
    assert run_cell(str(path), "meeksep", 1e-9, timing=False)["interventions"] == ERROR_INTERVENTIONS


# --- Command Line ---
def test_main_returns_one_on_missing_instances(tmp_path):
    assert meeksep.main(["run", "--instances", str(tmp_path / "nothing")]) == 1


def test_main_returns_one_on_missing_config_file(tmp_path):
    assert meeksep.main(["gen", "--config", str(tmp_path / "absent.cfg")]) == 1


def test_main_returns_one_on_bad_results(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("method,n\nmeeksep,8\n", encoding="utf-8")
    assert meeksep.main(["report", str(bad), "--out", str(tmp_path / "r.svg")]) == 1


def test_config_file_feeds_the_commands(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(f"n_values=6\nparam_values=1\nrepetitions=1\ninstances_dir={tmp_path / 'inst'}\n", encoding="utf-8")
    assert meeksep.main(["gen", "--config", str(cfg)]) == 0
    assert (tmp_path / "inst" / "subset_n6_p1_r000.txt").is_file()


def test_verify_accepts_a_keyword_filter():
    args = meeksep.build_parser().parse_args(["verify", "--all", "-k", "chordal"])
    assert args.all is True
    assert args.keyword == "chordal"
    assert args.out_key is None


def test_a_broken_command_module_does_not_stop_the_others():
    parser = argparse.ArgumentParser()
    subparsers = parser.add_subparsers(dest="command")
    loaded = meeksep.load_commands(subparsers, [meeksep.common_options()], ["gen", "no_such_command", "report"])
    assert loaded == 2
    assert parser.parse_args(["report", "r.csv"]).csv_path == "r.csv"


# --- Transcripts ---
def test_run_dumps_one_transcript_per_querying_cell(tmp_path):
    instances, transcripts = tmp_path / "instances", tmp_path / "transcripts"
    common = ["--seed", "5", "--n-values", "8", "--reps", "1"]
    assert meeksep.main(["gen", *common, "--params", "2", "--out", str(instances)]) == 0
    assert meeksep.main([
        "run", "--seed", "5", "--instances", str(instances), "--methods", "meeksep,random,verification-lb",
        "--timing", "false", "--transcripts", str(transcripts), "--out", str(tmp_path / "results.csv"),
    ]) == 0

    dumped = sorted(p.name for p in transcripts.iterdir())
    assert dumped == ["subset_n8_p2_r000__meeksep.txt", "subset_n8_p2_r000__random.txt"]
    frame = pd.read_csv(tmp_path / "results.csv").set_index("method")
    for method in ("meeksep", "random"):
        transcript = parse_transcript((transcripts / f"subset_n8_p2_r000__{method}.txt").read_text(encoding="utf-8"))
        assert transcript.total == len(transcript.steps) == frame.loc[method, "interventions"]


def test_run_cell_writes_no_transcript_for_error_rows(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1 0\n0 1 D\ntargets 1\n1 2\nmeta\nseed=1\ncenter=0\nr=1\ndensity=0.1\n", encoding="utf-8")
    row = run_cell(str(path), "meeksep", 1e-9, timing=False, transcripts_dir=str(tmp_path / "dump"))
    assert row["interventions"] == ERROR_INTERVENTIONS
    assert not (tmp_path / "dump").exists()


# --- Report ---
def test_load_results_reports_the_bad_line():
    text = _csv([["meeksep", 1, 8, 2, 5, 3, 0.0], ["random", 1, 8, 2, "many", 3, 0.0]])
    with pytest.raises(ParseError) as info:
        load_results(text, "r.csv")
    assert info.value.line == 3


def test_load_results_reports_the_line_with_extra_fields():
    text = _csv([["meeksep", 1, 8, 2, 5, 3, 0.0], ["random", 1, 8, 2, 5, 3, 0.0, "extra"]])
    with pytest.raises(ParseError, match="Malformed CSV") as info:
        load_results(text, "r.csv")
    assert info.value.line == 3
    assert str(info.value).startswith("r.csv:3:")


def test_load_results_rejects_fractional_counts():
    with pytest.raises(ParseError) as info:
        load_results(_csv([["meeksep", 1, 8, 2, 2.5, 3, 0.0]]))
    assert info.value.line == 2


def test_load_results_header_and_empty_files():
    with pytest.raises(ParseError, match="Header"):
        load_results("method,seed\nmeeksep,1\n")
    with pytest.raises(EmptyInputError):
        load_results(_csv([]))
    with pytest.raises(EmptyInputError):
        load_results("")


def test_error_rows_are_skipped_but_not_all_of_them():
    frame = load_results(_csv([["meeksep", 1, 8, 2, 5, 3, 0.0], ["random", 1, 8, 2, -1, 3, 0.0]]))
    ok = successful_rows(frame)
    assert list(ok["method"]) == ["meeksep"]
    assert list(ok["extra"]) == [2]

    only_errors = load_results(_csv([["random", 1, 8, 2, -1, 3, 0.0]]))
    with pytest.raises(EmptyInputError):
        successful_rows(only_errors)


def test_summary_uses_population_std():
    frame = load_results(_csv([
        ["meeksep", 1, 8, 2, 2, 1, 0.0],
        ["meeksep", 2, 8, 2, 4, 1, 0.0],
        ["random", 1, 8, 2, 7, 1, 0.0],
    ]))
    summary = summarize(successful_rows(frame)).set_index("method")
    assert summary.loc["meeksep", "runs"] == 2
    assert summary.loc["meeksep", "mean"] == 3.0
    assert summary.loc["meeksep", "std"] == 1.0
    assert summary.loc["meeksep", "extra_mean"] == 2.0
    assert summary.loc["random", "std"] == 0.0


def test_chart_axis_follows_what_varies():
    varying_param = successful_rows(load_results(_csv([["m", 1, 8, 1, 1, 0, 0], ["m", 2, 8, 2, 1, 0, 0]])))
    varying_n = successful_rows(load_results(_csv([["m", 1, 8, 1, 1, 0, 0], ["m", 2, 16, 1, 1, 0, 0]])))
    assert chart_axis(varying_param) == "param"
    assert chart_axis(varying_n) == "n"
    svg = render_report(varying_n, "subset", 0.5)
    assert "n (vertices)" in svg


def test_line_chart_draws_one_series_per_method():
    summary = pd.read_csv(io.StringIO(
        "method,param,mean,std\nmeeksep,1,2.0,0.5\nmeeksep,2,3.0,0.5\nrandom,1,4.0,1.0\nrandom,2,6.0,1.0\n"
    ))
    svg = line_chart(summary, 0.5, "A & B", "r", "interventions")
    assert svg.count("<polyline") == 2
    assert "A &amp; B" in svg
    assert svg.rstrip().endswith("</svg>")
