# commands/run.py
import argparse
import glob
import logging
import os
import time

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from helpers.algorithms import (
    SearchTranscript, causal_mean_match, random_baseline, subset_lower_bound, subset_search,
    subset_verification_bruteforce, unoriented_targets,
)
from helpers.config_helper import RunConfig
from helpers.constants import CSV_COLUMNS, ERROR_INTERVENTIONS
from helpers.errors import InputError, MeekSepError, StructuralError
from helpers.graph_gen import MatchingInstance, SubsetInstance
from helpers.io_helper import format_transcript, parse_instance, read_text, write_text
from helpers.oracle import InterventionOracle, MeanOracle
from utils.seed_mapper import method_seed
from utils.status_mapper import get_status_marker, row_status

logger = logging.getLogger(__name__)

SHIFT_AGREEMENT = 1e-6  # recovered vs. hidden shift values
QUERYING_METHODS = ("meeksep", "meeksep1", "random")


# --- Per-Method Runners ---
def lower_bound_of(instance: SubsetInstance | MatchingInstance) -> int:
    if isinstance(instance, SubsetInstance):
        return subset_lower_bound(instance.hidden, instance.targets)
    return len(instance.hidden_targets)


def _run_subset(
    instance: SubsetInstance, method: str, seed: int, lower_bound: int, transcript: SearchTranscript | None
) -> int:
    if method == "verification-lb":
        return lower_bound
    if method == "bruteforce-nu":
        return subset_verification_bruteforce(instance.hidden, instance.targets)

    oracle = InterventionOracle(instance.hidden)
    if method == "random":
        random_baseline(oracle, instance.targets, seed, transcript=transcript)
    else:
        subset_search(oracle, instance.targets, seed, early_stop=(method == "meeksep1"), transcript=transcript)
    left = unoriented_targets(oracle.revealed, instance.targets)
    if left:
        raise StructuralError(f"{method} finished with {len(left)} target(s) still unoriented.")
    return oracle.count


def _run_matching(
    instance: MatchingInstance, method: str, seed: int, tol: float, lower_bound: int,
    transcript: SearchTranscript | None,
) -> int:
    """Structural interventions plus applied shifts for one mean matching cell."""
    if method == "verification-lb":
        return lower_bound
    if method == "bruteforce-nu":
        raise InputError("bruteforce-nu is only defined for subset search instances.")

    oracle = InterventionOracle(instance.sem.g)
    found = causal_mean_match(
        oracle, MeanOracle(instance.sem), instance.mean_array, seed,
        tol=tol,
        strategy="random" if method == "random" else "separator",
        early_stop=(method == "meeksep1"),
        transcript=transcript,
    )
    expected = instance.hidden_targets.as_dict()
    recovered = found.as_dict()
    if recovered.keys() != expected.keys():
        raise StructuralError(f"{method} recovered shift targets {sorted(recovered)}, expected {sorted(expected)}.")
    if not np.allclose([recovered[v] for v in expected], list(expected.values()), atol=SHIFT_AGREEMENT):
        raise StructuralError(f"{method} recovered the right targets but different shift values.")
    return oracle.count + len(found)


def transcript_path(transcripts_dir: str, instance_path: str, method: str) -> str:
    stem = os.path.splitext(os.path.basename(instance_path))[0]
    return os.path.join(transcripts_dir, f"{stem}__{method}.txt")


def run_cell(path: str, method: str, tol: float, timing: bool, transcripts_dir: str | None = None) -> dict:
    """
    One (method, instance) cell with its own oracle; failures become error rows.
    With `transcripts_dir`, the oracle queries of a successful search are dumped there.
    """
    instance = parse_instance(read_text(path), path)
    if isinstance(instance, SubsetInstance):
        n, param = instance.n, instance.r
    else:
        n, param = instance.sem.n, len(instance.hidden_targets)
    row = {"method": method, "seed": instance.seed, "n": n, "param": param}
    seed = method_seed(instance.seed, method)
    transcript = SearchTranscript() if transcripts_dir and method in QUERYING_METHODS else None

    started = time.perf_counter()
    lower_bound = 0
    try:
        lower_bound = lower_bound_of(instance)
        if isinstance(instance, SubsetInstance):
            interventions = _run_subset(instance, method, seed, lower_bound, transcript)
        else:
            interventions = _run_matching(instance, method, seed, tol, lower_bound, transcript)
    except MeekSepError as e:
        logger.error(f"{method} failed on {path}: {e}", exc_info=True)
        interventions = ERROR_INTERVENTIONS
    except Exception as e:
        logger.error(f"Unexpected error running {method} on {path}: {e}", exc_info=True)
        interventions = ERROR_INTERVENTIONS
    elapsed = (time.perf_counter() - started) * 1000.0

    if transcript is not None and interventions != ERROR_INTERVENTIONS:
        write_text(transcript_path(transcripts_dir, path, method), format_transcript(transcript))

    row.update(interventions=int(interventions), lower_bound=int(lower_bound), ms=round(elapsed, 3) if timing else 0.0)
    return row


# --- Command ---
def list_instances(config: RunConfig) -> list[str]:
    pattern = os.path.join(config.instances_dir, f"{config.problem}_*.txt")
    paths = sorted(glob.glob(pattern))
    if not paths:
        raise InputError(f"No {config.problem} instances match {pattern}; run 'gen' first.")
    return paths


def run_rows(config: RunConfig, transcripts_dir: str | None = None) -> pd.DataFrame:
    paths = list_instances(config)
    cells = [(path, method) for path in paths for method in config.methods]
    logger.info(f"Running {len(cells)} cell(s) over {len(paths)} instance(s) with {config.jobs} job(s).")
    rows = Parallel(n_jobs=config.jobs)(
        delayed(run_cell)(path, method, config.tol, config.timing, transcripts_dir) for path, method in cells
    )
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    return frame.sort_values(["n", "param", "seed", "method"], kind="mergesort").reset_index(drop=True)


def cmd_run(config: RunConfig, args: argparse.Namespace) -> int:
    frame = run_rows(config, args.transcripts_dir)
    write_text(config.results_path, frame.to_csv(index=False, lineterminator="\n"))

    for method in config.methods:
        statuses = frame.loc[frame["method"] == method, "interventions"].map(row_status)
        failed = int((statuses == "error").sum())
        marker = get_status_marker("error" if failed else "ok")
        print(f"{marker} {method}: {len(statuses)} row(s), {failed} failed")
    print(f"{get_status_marker('written')} {len(frame)} row(s) -> {config.results_path}")
    return 0


def setup(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("run", parents=parents, help="Run every method on every instance and write the CSV.")
    parser.add_argument("--problem", dest="problem", help="subset or matching")
    parser.add_argument("--methods", dest="methods", help="Comma-separated method names.")
    parser.add_argument("--instances", dest="instances_dir", help="Directory holding the generated instances.")
    parser.add_argument("--tol", dest="tol", help="Mean matching tolerance.")
    parser.add_argument("--timing", dest="timing", help="true/false; false writes ms=0 for byte-stable replays.")
    parser.add_argument("--transcripts", dest="transcripts_dir", help="Directory for per-cell oracle query transcripts.")
    parser.set_defaults(handler=cmd_run, out_key="results_path")
