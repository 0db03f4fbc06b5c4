# commands/verify.py
import argparse
import logging
import os

import pytest

from helpers.config_helper import RunConfig

logger = logging.getLogger(__name__)

TESTS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "tests")


def cmd_verify(config: RunConfig, args: argparse.Namespace) -> int:
    """Runs the property suites with pytest; the slow acceptance suites only with --all."""
    pytest_args = ["-q", TESTS_DIR]
    if not args.all:
        pytest_args += ["-m", "not slow"]
    if args.keyword:
        pytest_args += ["-k", args.keyword]
    logger.info(f"Running pytest {' '.join(pytest_args)}")
    return int(pytest.main(pytest_args))


def setup(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("verify", parents=parents, help="Run the property and oracle test suites.")
    parser.add_argument("--all", action="store_true", help="Include the slow acceptance suites.")
    parser.add_argument("-k", dest="keyword", help="Only run tests matching this pytest -k expression.")
    parser.set_defaults(handler=cmd_verify, out_key=None)
