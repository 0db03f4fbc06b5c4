# helpers/config_helper.py
import logging
import os
from dataclasses import dataclass

from dotenv import dotenv_values

from helpers.constants import (
    DEFAULT_CONFIG, DENSITY_DEFAULTS, GRAPH_MODELS, METHODS, MODEL_DEFAULTS, PROBLEMS, STD_MULTIPLIER_DEFAULTS,
)
from helpers.errors import InputError

logger = logging.getLogger(__name__)

# Environment variables that may stand in for config keys (below the config file)
ENV_OVERRIDES = {"MEEKSEP_JOBS": "jobs"}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class RunConfig:
    problem: str
    model: str
    n_values: tuple[int, ...]
    param_values: tuple[int, ...]
    density: float
    m_attach: int
    methods: tuple[str, ...]
    repetitions: int
    seed: int
    instances_dir: str
    results_path: str
    report_path: str
    tol: float
    std_multiplier: float
    jobs: int
    timing: bool


# --- Value Parsing ---
def _as_int(key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise InputError(f"Config key '{key}' expects an integer, got '{raw}'.") from None


def _as_float(key: str, raw: str) -> float:
    try:
        return float(raw.strip())
    except ValueError:
        raise InputError(f"Config key '{key}' expects a number, got '{raw}'.") from None


def _as_int_list(key: str, raw: str) -> tuple[int, ...]:
    items = [part for part in raw.replace(" ", "").split(",") if part]
    if not items:
        raise InputError(f"Config key '{key}' needs at least one value.")
    return tuple(_as_int(key, part) for part in items)


def _as_bool(key: str, raw: str) -> bool:
    value = raw.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise InputError(f"Config key '{key}' expects true/false, got '{raw}'.")


def load_config_file(path: str) -> dict[str, str]:
    """key=value lines read with python-dotenv; unknown keys are dropped with a warning."""
    if not os.path.isfile(path):
        raise OSError(f"Config file not found: {path}")
    values = {}
    for key, value in dotenv_values(path).items():
        key = key.strip().lower()
        if key not in DEFAULT_CONFIG:
            logger.warning(f"Ignoring unknown config key '{key}' in {path}.")
            continue
        values[key] = "" if value is None else value
    logger.debug(f"Read {len(values)} config value(s) from {path}.")
    return values


def build_config(file_values: dict[str, str] | None = None, overrides: dict[str, object] | None = None) -> RunConfig:
    """
    Merges defaults < environment < config file < command-line overrides and validates the result.

    Empty values for model, density and std_multiplier fall back to the
    per-problem defaults in helpers/constants.py.
    """
    merged = dict(DEFAULT_CONFIG)
    for env_name, key in ENV_OVERRIDES.items():
        if os.getenv(env_name):
            merged[key] = os.getenv(env_name)
    merged.update(file_values or {})
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in DEFAULT_CONFIG:
            raise InputError(f"Unknown config key '{key}'.")
        merged[key] = str(value)

    problem = merged["problem"].strip()
    if problem not in PROBLEMS:
        raise InputError(f"Unknown problem '{problem}'; expected one of {', '.join(PROBLEMS)}.")

    model = merged["model"].strip() or MODEL_DEFAULTS[problem]
    if model not in GRAPH_MODELS:
        raise InputError(f"Unknown graph model '{model}'; expected one of {', '.join(GRAPH_MODELS)}.")
    if problem == "subset" and model != "rhop":
        raise InputError(f"Subset search instances are r-hop graphs only, got model '{model}'.")

    methods = tuple(m for m in merged["methods"].replace(" ", "").split(",") if m)
    unknown = [m for m in methods if m not in METHODS]
    if not methods or unknown:
        raise InputError(f"Unknown method(s) {unknown or methods}; expected a subset of {', '.join(METHODS)}.")

    density_raw = merged["density"].strip()
    std_raw = merged["std_multiplier"].strip()
    config = RunConfig(
        problem=problem,
        model=model,
        n_values=_as_int_list("n_values", merged["n_values"]),
        param_values=_as_int_list("param_values", merged["param_values"]),
        density=_as_float("density", density_raw) if density_raw else DENSITY_DEFAULTS[problem],
        m_attach=_as_int("m_attach", merged["m_attach"]),
        methods=methods,
        repetitions=_as_int("repetitions", merged["repetitions"]),
        seed=_as_int("seed", merged["seed"]),
        instances_dir=merged["instances_dir"].strip(),
        results_path=merged["results_path"].strip(),
        report_path=merged["report_path"].strip(),
        tol=_as_float("tol", merged["tol"]),
        std_multiplier=_as_float("std_multiplier", std_raw) if std_raw else STD_MULTIPLIER_DEFAULTS[problem],
        jobs=_as_int("jobs", merged["jobs"]),
        timing=_as_bool("timing", merged["timing"]),
    )

    if config.repetitions < 1:
        raise InputError(f"repetitions must be at least 1, got {config.repetitions}.")
    if config.jobs < 1:
        raise InputError(f"jobs must be at least 1, got {config.jobs}.")
    if not 0.0 <= config.density <= 1.0:
        raise InputError(f"density must lie in [0, 1], got {config.density}.")
    if config.tol <= 0:
        raise InputError(f"tol must be positive, got {config.tol}.")
    if config.std_multiplier < 0:
        raise InputError(f"std_multiplier must be non-negative, got {config.std_multiplier}.")
    if any(n < 2 for n in config.n_values):
        raise InputError(f"Every n must be at least 2, got {list(config.n_values)}.")
    if any(p < 0 for p in config.param_values) or (problem == "subset" and any(p < 1 for p in config.param_values)):
        raise InputError(f"Invalid parameter values {list(config.param_values)} for problem '{problem}'.")
    return config
