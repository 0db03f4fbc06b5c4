# helpers/constants.py
from fractions import Fraction

# --- Separator Settings ---
SEPARATOR_ALPHA = Fraction(1, 2)  # every caller uses 1/2; other values are for tests only

# --- Oracle / Mean Matching ---
MEAN_TOLERANCE = 1e-9  # noiseless means, only absorbs float error
MAX_MATCHING_ROUNDS_FACTOR = 2  # rounds allowed = factor * n + 1 before giving up

# --- Brute Force Guards ---
BRUTEFORCE_MAX_VERTICES = 12

# --- Instance Generation Defaults ---
RHOP_DENSITY = 0.001   # ER density before the random tree is merged in
ER_DENSITY = 0.2
BA_ATTACH_EDGES = 2
WEIGHT_RANGE = (-1.0, 1.0)
WEIGHT_MIN_ABS = 1e-3  # weights closer to zero are redrawn
SHIFT_RANGE = (0.5, 2.0)

# --- Experiment Harness ---
PROBLEMS = ("subset", "matching")
GRAPH_MODELS = ("rhop", "er", "ba", "tree")
METHODS = ("meeksep", "meeksep1", "random", "verification-lb", "bruteforce-nu")
CSV_COLUMNS = ["method", "seed", "n", "param", "interventions", "lower_bound", "ms"]
ERROR_INTERVENTIONS = -1  # marks a failed (method, instance) cell

DEFAULT_CONFIG = {
    "problem": "subset",
    "model": "",               # empty -> per-problem default below
    "n_values": "100",
    "param_values": "3",       # r for subset, |I*| for matching
    "density": "",             # empty -> per-problem default below
    "m_attach": str(BA_ATTACH_EDGES),
    "methods": "meeksep,meeksep1,random,verification-lb",
    "repetitions": "20",
    "seed": "1",
    "instances_dir": "instances",
    "results_path": "results/results.csv",
    "report_path": "results/report.svg",
    "tol": str(MEAN_TOLERANCE),
    "std_multiplier": "",      # empty -> per-problem default below
    "jobs": "1",
    "timing": "true",
}

# Per-problem fallbacks for the empty keys above
MODEL_DEFAULTS = {"subset": "rhop", "matching": "er"}
DENSITY_DEFAULTS = {"subset": RHOP_DENSITY, "matching": ER_DENSITY}
# Error bar widths of the reference curves
STD_MULTIPLIER_DEFAULTS = {"subset": 0.5, "matching": 0.2}

# --- Report Styling ---
SVG_WIDTH = 640
SVG_HEIGHT = 400
SVG_MARGIN = 56
METHOD_COLORS = {
    "meeksep": "#1f77b4",
    "meeksep1": "#ff7f0e",
    "random": "#2ca02c",
    "verification-lb": "#7f7f7f",
    "bruteforce-nu": "#9467bd",
}
FALLBACK_COLOR = "#d62728"

# --- Transcript Branch Labels ---
BRANCH_SEPARATOR = "separator"   # largest component already small enough
BRANCH_DESCEND = "descend"       # directed path to the big component, keep Q
BRANCH_ASCEND = "ascend"         # no path, keep P
BRANCH_RANDOM = "random"
BRANCH_EARLY_STOP = "early-stop"

# --- Command Line ---
COMMAND_MODULES = ("gen", "run", "report", "verify")  # loaded in this order from commands/
INSTANCE_FILE_TEMPLATE = "{problem}_n{n}_p{param}_r{rep:03d}.txt"
LOG_FORMAT = "%(asctime)s:%(levelname)s:%(name)s: %(message)s"
