# commands/report.py
import argparse
import io
import logging
import re

import pandas as pd
from colorama import Fore, Style

from helpers.config_helper import RunConfig
from helpers.constants import CSV_COLUMNS, ERROR_INTERVENTIONS
from helpers.errors import EmptyInputError, ParseError
from helpers.io_helper import read_text, write_text
from utils.status_mapper import get_status_marker
from utils.svg_chart import line_chart

logger = logging.getLogger(__name__)

INT_COLUMNS = ["seed", "n", "param", "interventions", "lower_bound"]
PARAM_LABELS = {"subset": "r (hops)", "matching": "|I*| (shift targets)"}
PANDAS_LINE = re.compile(r"\bline (\d+)")  # pandas counts the header as line 1


# --- Loading ---
def load_results(text: str, path: str | None = None) -> pd.DataFrame:
    """Parses and validates a results CSV; the header must match CSV_COLUMNS exactly."""
    try:
        raw = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"Results file {path or '<text>'} is empty.") from None
    except pd.errors.ParserError as e:
        found = PANDAS_LINE.search(str(e))
        line = int(found.group(1)) if found else None
        raise ParseError(f"Malformed CSV: {str(e).strip()}", path, line) from None

    if list(raw.columns) != CSV_COLUMNS:
        raise ParseError(f"Header must be {','.join(CSV_COLUMNS)}, got {','.join(raw.columns)}.", path, 1)
    if raw.empty:
        raise EmptyInputError(f"Results file {path or '<text>'} has a header but no rows.")

    frame = raw.copy()
    for column in INT_COLUMNS + ["ms"]:
        frame[column] = pd.to_numeric(raw[column].str.strip(), errors="coerce")
        bad = frame[column].isna()
        if column in INT_COLUMNS:
            bad |= frame[column].notna() & (frame[column] % 1 != 0)
        if bad.any():
            index = int(bad.to_numpy().nonzero()[0][0])
            # header is line 1
            raise ParseError(f"Column '{column}' has a non-numeric value {raw[column].iloc[index]!r}.", path, index + 2)
    blank = frame["method"].str.strip() == ""
    if blank.any():
        raise ParseError("Empty method name.", path, int(blank.to_numpy().nonzero()[0][0]) + 2)
    frame[INT_COLUMNS] = frame[INT_COLUMNS].astype(int)
    return frame


# --- Aggregation ---
def successful_rows(frame: pd.DataFrame) -> pd.DataFrame:
    ok = frame[frame["interventions"] != ERROR_INTERVENTIONS].copy()
    skipped = len(frame) - len(ok)
    if skipped:
        logger.warning(f"Skipping {skipped} error row(s) in the summary.")
    if ok.empty:
        raise EmptyInputError("Every row in the results is an error row; nothing to summarize.")
    ok["extra"] = ok["interventions"] - ok["lower_bound"]
    return ok


def summarize(ok: pd.DataFrame, keys: list[str] | None = None) -> pd.DataFrame:
    """
    Mean and population std (ddof=0) of interventions and of the excess over
    the lower bound, per group (method, n, param by default).
    """
    keys = keys or ["method", "n", "param"]
    grouped = ok.groupby(keys, sort=True)
    return grouped.agg(
        runs=("interventions", "size"),
        mean=("interventions", "mean"),
        std=("interventions", lambda s: s.std(ddof=0)),
        extra_mean=("extra", "mean"),
        extra_std=("extra", lambda s: s.std(ddof=0)),
    ).reset_index()


def chart_axis(ok: pd.DataFrame) -> str:
    """param when it varies (or n is fixed), otherwise n."""
    if ok["param"].nunique() > 1 or ok["n"].nunique() == 1:
        if ok["n"].nunique() > 1:
            logger.warning("Both n and the parameter vary; the chart pools all n per parameter value.")
        return "param"
    return "n"


def render_report(ok: pd.DataFrame, problem: str, std_multiplier: float) -> str:
    axis = chart_axis(ok)
    frame = summarize(ok, ["method", axis])
    if axis == "n":
        frame = frame.rename(columns={"n": "param"})
    x_label = "n (vertices)" if axis == "n" else PARAM_LABELS.get(problem, "parameter")
    if problem == "matching":
        return line_chart(
            frame, std_multiplier, "Extra interventions over |I*|", x_label, "interventions - |I*|",
            value_column="extra_mean", std_column="extra_std",
        )
    return line_chart(frame, std_multiplier, "Interventions to orient all targets", x_label, "interventions")


def print_summary(summary: pd.DataFrame) -> None:
    print(f"{Style.BRIGHT}{'method':<16}{'n':>6}{'param':>7}{'runs':>6}{'mean':>10}{'std':>9}{'extra':>10}{Style.RESET_ALL}")
    for row in summary.itertuples(index=False):
        print(
            f"{Fore.CYAN}{row.method:<16}{Style.RESET_ALL}{row.n:>6}{row.param:>7}{row.runs:>6}"
            f"{row.mean:>10.2f}{row.std:>9.2f}{row.extra_mean:>10.2f}"
        )


def cmd_report(config: RunConfig, args: argparse.Namespace) -> int:
    csv_path = args.csv_path or config.results_path
    ok = successful_rows(load_results(read_text(csv_path), csv_path))
    summary = summarize(ok)
    print_summary(summary)
    write_text(config.report_path, render_report(ok, config.problem, config.std_multiplier))
    logger.info(f"Report for {summary['method'].nunique()} method(s) written to {config.report_path}.")
    print(f"{get_status_marker('written')} chart -> {config.report_path}")
    return 0


def setup(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("report", parents=parents, help="Summarize a results CSV and draw the SVG chart.")
    parser.add_argument("csv_path", nargs="?", help="Results CSV (defaults to results_path from the config).")
    parser.add_argument("--problem", dest="problem", help="Selects labels and the default error bar width.")
    parser.add_argument("--std-multiplier", dest="std_multiplier", help="Error bar half-width in standard deviations.")
    parser.set_defaults(handler=cmd_report, out_key="report_path")
