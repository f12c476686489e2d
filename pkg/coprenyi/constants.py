"""Constants for coprenyi."""

from __future__ import annotations

from os import environ
from pathlib import Path
from typing import Any

# Numerical defaults

DEFAULT_NODES_PER_AXIS = 64
DEFAULT_MC_SAMPLES = 200_000
DEFAULT_REL_TOL = 1e-6
DEFAULT_MAX_REFINEMENTS = 4
BOUNDS_MAX_REFINEMENTS = 6
BOUNDS_REL_TOL = 1e-10
BOUNDS_AGREEMENT_TOLERANCE = 1e-8
REFERENCE_REL_TOL = 1e-10
MAX_TENSOR_DIMENSION = 4
MAX_TENSOR_POINTS = 2**24
EVALUATION_CHUNK = 2**18

CLAMP_EPSILON = 1e-12
GAMMA_EXCLUSION = 1e-9
DOMINANCE_TOLERANCE = 1e-12
DISTORTION_GRID_POINTS = 1001

OPTIMIZER_XATOL = 1e-8
OPTIMIZER_MAXITER = 500
TAU_XTOL = 1e-8
MIN_DATA_ROWS = 10
MAX_EXCLUDED_FRACTION = 0.05

# Family search intervals for maximum pseudo-likelihood, keyed by (family, "bivariate"|"multivariate")
SEARCH_INTERVALS: dict[tuple[str, str], tuple[float, float]] = {
    ("amh", "bivariate"): (-1.0, 1.0),
    ("clayton", "bivariate"): (1e-6, 30.0),
    ("clayton", "multivariate"): (1e-6, 30.0),
    ("fgm", "bivariate"): (-1.0, 1.0),
    ("frank", "bivariate"): (-35.0, 35.0),
    ("frank", "multivariate"): (1e-6, 35.0),
    ("gumbel", "bivariate"): (1.0, 30.0),
    ("gumbel", "multivariate"): (1.0, 30.0),
    ("joe", "bivariate"): (1.0, 30.0),
    ("joe", "multivariate"): (1.0, 30.0),
}

# CLI constants

FAMILY_NAMES = ["amh", "clayton", "fgm", "frank", "gumbel", "joe", "product"]
MEASURE_NAMES = ["cci", "mccre", "mccri", "mcocri", "mdcri", "mscre", "mscri", "sci"]
OUTPUT_FORMATS = ["csv", "jsonl", "pretty"]

THREADS_ENV = "COPRENYI_THREADS"
DEFAULT_CONCURRENCY = int(environ.get(THREADS_ENV, "4"))

_INTEGRATION_ARGUMENTS: list[tuple[list[str], dict[str, Any]]] = [
    (["--nodes"], {"type": int, "default": DEFAULT_NODES_PER_AXIS, "metavar": f"<{DEFAULT_NODES_PER_AXIS}>"}),
    (
        ["--method"],
        {"choices": ["mc", "tensor"], "default": "tensor", "metavar": "mc|<tensor>"},
    ),
    (["--samples"], {"type": int, "default": DEFAULT_MC_SAMPLES, "metavar": f"<{DEFAULT_MC_SAMPLES}>"}),
    (["--seed"], {"type": int, "default": 0, "metavar": "<0>"}),
    (["--rel-tol"], {"type": float, "default": DEFAULT_REL_TOL, "metavar": f"<{DEFAULT_REL_TOL}>"}),
    (
        ["--max-refinements"],
        {"type": int, "default": DEFAULT_MAX_REFINEMENTS, "metavar": f"<{DEFAULT_MAX_REFINEMENTS}>"},
    ),
]
_MEASURE_ARGUMENTS: list[tuple[list[str], dict[str, Any]]] = [
    (["--kind"], {"choices": MEASURE_NAMES, "required": True, "metavar": "|".join(MEASURE_NAMES)}),
    (["--gamma"], {"type": float, "help": "Rényi order (omit for cci/sci)"}),
    (["--copula-x"], {"required": True, "help": "truth copula as family:theta:dim, e.g. gumbel:2:3"}),
    (["--copula-y"], {"help": "reference copula as family:theta:dim (omit for mccre/mscre)"}),
    (["--marginals"], {"help": "distortion as exp:λ1,λ2 | prhr:α1,α2 | power:a1,a2 (default: identity)"}),
    *_INTEGRATION_ARGUMENTS,
]
_DATA_ARGUMENTS: list[tuple[list[str], dict[str, Any]]] = [
    (["data"], {"type": Path, "help": "CSV file with a header row"}),
    (["--columns"], {"help": "comma-separated column names (default: every column)"}),
]

CLI_COMMANDS: dict[str, dict[str, Any]] = {
    "measure": {
        "help": "evaluate one inaccuracy or entropy measure",
        "arguments": _MEASURE_ARGUMENTS,
    },
    "sweep": {
        "help": "evaluate a measure over a grid of one varying quantity",
        "arguments": [
            *_MEASURE_ARGUMENTS,
            (
                ["--field"],
                {
                    "choices": ["gamma", "lambda", "reference", "truth"],
                    "required": True,
                    "metavar": "gamma|lambda|reference|truth",
                },
            ),
            (["--values"], {"required": True, "help": "comma-separated grid values"}),
        ],
    },
    "bounds": {
        "help": "Fréchet-Hoeffding bounds with closed-form comparison",
        "arguments": [
            (["--gamma"], {"type": float, "required": True}),
            (["--alpha"], {"type": float, "required": True}),
            (["--beta"], {"type": float, "required": True}),
            (["--target"], {"choices": ["mccri", "mscri"], "default": "mccri", "metavar": "<mccri>|mscri"}),
        ],
    },
    "fit": {
        "help": "fit one copula family to a CSV dataset",
        "arguments": [
            *_DATA_ARGUMENTS,
            (["--family"], {"choices": FAMILY_NAMES, "required": True, "metavar": "|".join(FAMILY_NAMES)}),
            (["--estimator"], {"choices": ["mpl", "tau"], "default": "mpl", "metavar": "<mpl>|tau"}),
        ],
    },
    "select": {
        "help": "rank candidate copulas by inaccuracy against a baseline fit",
        "arguments": [
            *_DATA_ARGUMENTS,
            (
                ["--families"],
                {"default": "frank,gumbel,joe,product", "metavar": "<frank,gumbel,joe,product>"},
            ),
            (["--gamma"], {"type": float, "default": 3.0, "metavar": "<3>"}),
            (["--baseline"], {"choices": FAMILY_NAMES, "help": "pin the baseline family"}),
            *_INTEGRATION_ARGUMENTS,
        ],
    },
    "simulate": {
        "help": "run a Monte Carlo study of the plug-in estimator",
        "arguments": [(["config"], {"type": Path, "help": "JSON simulation config"})],
    },
    "sample": {
        "help": "draw a seeded sample from a copula",
        "default_format": "csv",
        "arguments": [
            (["family"], {"choices": FAMILY_NAMES, "metavar": "family"}),
            (["theta"], {"help": "parameter, or - for product"}),
            (["dim"], {"type": int}),
            (["count"], {"type": int}),
            (["seed"], {"type": int}),
        ],
    },
    "run": {
        "help": "execute every job in a JSON run config",
        "arguments": [(["config"], {"type": Path, "help": "JSON run config"})],
    },
}
CLI_GLOBAL_ARGUMENTS: list[tuple[list[str], dict[str, Any]]] = [
    (
        ["-c", "--concurrency"],
        {
            "type": int,
            "default": DEFAULT_CONCURRENCY,
            "metavar": f"<{DEFAULT_CONCURRENCY}>",
            "help": "maximum replications or fits in flight",
        },
    ),
]
CLI_OUTPUT_ARGUMENTS: list[tuple[list[str], dict[str, Any]]] = [
    (["-o", "--output"], {"help": "Output file path (default: stdout)", "type": Path}),
    (
        ["-f", "--format"],
        {"choices": OUTPUT_FORMATS, "default": "jsonl", "metavar": "csv|<jsonl>|pretty"},
    ),
    (
        ["--pretty"],
        {"action": "store_const", "const": "pretty", "dest": "format", "help": "same as -f pretty"},
    ),
]
CLI_HELP_DESCRIPTION: str = """Copula-based Rényi inaccuracy toolkit.

Evaluate copula, survival, co- and dual copula inaccuracy measures,
bound them with Fréchet-Hoeffding envelopes, fit copulas to data by
maximum pseudo-likelihood, study the plug-in estimator by simulation
and rank candidate copulas against a baseline model.
"""
CLI_HELP_EPILOGUE: str | None = (
    f"If an argument has a default, it's shown in <parentheses>. {THREADS_ENV} sets the default concurrency."
)
CLI_HELP_NAME: str = "coprenyi"
