# meeksep.py
# Core Python modules
import argparse
import importlib
import logging
import os
import sys

# Third-party libraries
from colorama import Fore, Style, init as colorama_init
from dotenv import load_dotenv

from helpers.config_helper import build_config, load_config_file
from helpers.constants import COMMAND_MODULES, DEFAULT_CONFIG, LOG_FORMAT
from helpers.errors import MeekSepError

logger = logging.getLogger("meeksep")


# --- SETUP LOGGING ---
def setup_logging(level_name: str | None) -> None:
    level_name = (level_name or os.getenv("MEEKSEP_LOG_LEVEL") or "INFO").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
    # Reduce library noise
    logging.getLogger("joblib").setLevel(logging.WARNING)
    if level_name != logging.getLevelName(level):
        logger.warning(f"Unknown log level '{level_name}', using INFO.")


# --- ARGUMENT PARSING ---
def common_options() -> argparse.ArgumentParser:
    """Flags shared by every command; they override the config file."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", dest="seed", help="Master seed for instance and method seeds.")
    common.add_argument("--out", dest="out", help="Output location (instances dir, results CSV or report SVG).")
    common.add_argument("--config", dest="config_path", help="key=value config file.")
    common.add_argument("--jobs", dest="jobs", help="Parallel workers for 'run'.")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR.")
    return common


def load_commands(subparsers, parents: list[argparse.ArgumentParser], names: list[str] | None = None) -> int:
    loaded = 0
    for name in COMMAND_MODULES if names is None else names:
        module_name = f"commands.{name}"
        try:
            module = importlib.import_module(module_name)
            module.setup(subparsers, parents)
            logger.debug(f"Loaded command module: {module_name}")
            loaded += 1
        except ImportError:
            logger.error(f"Failed to import command module {module_name}.", exc_info=True)
        except Exception:
            logger.error(f"Unexpected error loading command module {module_name}.", exc_info=True)
    logger.debug(f"Finished loading {loaded} command module(s).")
    return loaded


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meeksep",
        description="Adaptive intervention design on causal DAGs: instance generation, experiments and reports.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    load_commands(subparsers, [common_options()])
    return parser


def overrides_from(args: argparse.Namespace) -> dict[str, object]:
    """Config keys set on the command line; --out lands on the key the command writes to."""
    overrides = {key: getattr(args, key) for key in DEFAULT_CONFIG if getattr(args, key, None) is not None}
    if args.out is not None:
        if args.out_key is None:
            logger.warning(f"--out has no effect for '{args.command}'.")
        else:
            overrides[args.out_key] = args.out
    return overrides


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    colorama_init()
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    try:
        file_values = load_config_file(args.config_path) if args.config_path else {}
        config = build_config(file_values, overrides_from(args))
        logger.debug(f"Effective config: {config}")
        return args.handler(config, args)
    except MeekSepError as e:
        logger.error(f"'{args.command}' failed: {e}", exc_info=True)
        print(f"{Fore.RED}error:{Style.RESET_ALL} {e}", file=sys.stderr)
        return 1
    except OSError as e:
        logger.error(f"I/O error during '{args.command}': {e}", exc_info=True)
        print(f"{Fore.RED}error:{Style.RESET_ALL} {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted by KeyboardInterrupt (Ctrl+C).")
        sys.exit(130)
