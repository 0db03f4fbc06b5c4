# commands/gen.py
import argparse
import logging
import os

from helpers.config_helper import RunConfig
from helpers.constants import INSTANCE_FILE_TEMPLATE
from helpers.graph_gen import matching_instance, model_dag, r_hop_instance
from helpers.io_helper import format_matching_instance, format_subset_instance, write_text
from utils.seed_mapper import instance_seed, split_seed
from utils.status_mapper import get_status_marker

logger = logging.getLogger(__name__)


def instance_path(config: RunConfig, n: int, param: int, rep: int) -> str:
    name = INSTANCE_FILE_TEMPLATE.format(problem=config.problem, n=n, param=param, rep=rep)
    return os.path.join(config.instances_dir, name)


def build_instance_text(config: RunConfig, n: int, param: int, rep: int) -> str:
    """Serialized instance for one grid cell; depends only on the config and the cell."""
    seed = instance_seed(config.seed, config.problem, n, param, rep)
    if config.problem == "subset":
        return format_subset_instance(r_hop_instance(n, param, config.density, seed))
    g = model_dag(config.model, n, split_seed(seed, "graph"), config.density, config.m_attach)
    return format_matching_instance(matching_instance(g, param, seed, model=config.model))


def cmd_gen(config: RunConfig, args: argparse.Namespace) -> int:
    written = 0
    for n in config.n_values:
        for param in config.param_values:
            for rep in range(config.repetitions):
                path = instance_path(config, n, param, rep)
                write_text(path, build_instance_text(config, n, param, rep))
                written += 1
    logger.info(f"Generated {written} {config.problem} instance(s) in {config.instances_dir}.")
    print(f"{get_status_marker('written')} {written} instance file(s) -> {config.instances_dir}")
    return 0


def setup(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("gen", parents=parents, help="Generate seeded benchmark instances.")
    parser.add_argument("--problem", dest="problem", help="subset or matching")
    parser.add_argument("--model", dest="model", help="Graph model for matching instances (er, ba, tree, rhop).")
    parser.add_argument("--n-values", dest="n_values", help="Comma-separated graph sizes.")
    parser.add_argument("--params", dest="param_values", help="Comma-separated r (subset) or |I*| (matching) values.")
    parser.add_argument("--reps", dest="repetitions", help="Instances per (n, param) cell.")
    parser.add_argument("--density", dest="density", help="Edge density of the random graphs.")
    parser.add_argument("--m-attach", dest="m_attach", help="Barabasi-Albert attachment edges.")
    parser.set_defaults(handler=cmd_gen, out_key="instances_dir")
