# utils/status_mapper.py
from colorama import Fore, Style

from helpers.constants import ERROR_INTERVENTIONS

STATUS_MARKERS = {
    "ok": (Fore.GREEN, "ok"),
    "error": (Fore.RED, "FAILED"),
    "written": (Fore.CYAN, "wrote"),
    "Default": (Fore.LIGHTBLACK_EX, "?"),  # Fallback
}


def row_status(interventions: int) -> str:
    return "error" if interventions == ERROR_INTERVENTIONS else "ok"


def get_status_marker(status: str) -> str:
    """Colored console marker for a status name."""
    color, label = STATUS_MARKERS.get(status, STATUS_MARKERS["Default"])
    return f"{color}{label}{Style.RESET_ALL}"
