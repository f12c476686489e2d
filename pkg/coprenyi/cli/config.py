"""Run configuration files.

A run config is a JSON object whose sections list jobs. Every job except a
simulation is written with the same option names as the matching sub-command
(underscores or dashes, no leading dashes) and is parsed by that sub-command's
parser, so a config job and a command line accept exactly the same inputs.
Simulations are given inline. The whole file is validated before any job
runs. See docs/config.md for the schema.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from coprenyi.constants import OUTPUT_FORMATS
from coprenyi.copulas.model import CopulaModel
from coprenyi.quadrature import IntegrationConfig
from coprenyi.simulation import SimulationConfig

from .files import FileReader

if TYPE_CHECKING:
    from argparse import Namespace as Arguments

    from .args import CliParser

JOB_SECTIONS: dict[str, str] = {
    "measures": "measure",
    "sweeps": "sweep",
    "bounds": "bounds",
    "fits": "fit",
    "selections": "select",
}
SIMULATION_SECTION = "simulations"
TOP_LEVEL_KEYS = frozenset({*JOB_SECTIONS, SIMULATION_SECTION, "output", "format", "seed"})
POSITIONAL_KEYS: dict[str, tuple[str, ...]] = {"fit": ("data",), "select": ("data",)}
PATH_KEYS = frozenset({"data"})
SEEDED_COMMANDS = frozenset({"measure", "sweep", "select"})
SIMULATION_KEYS = frozenset({
    "gamma",
    "integration",
    "master_seed",
    "replications",
    "sample_sizes",
    "truth_x",
    "truth_y",
})
INTEGRATION_KEYS = frozenset({"max_refinements", "mc_samples", "method", "nodes_per_axis", "rel_tol", "seed"})


@dataclass(slots=True)
class RunPlan:
    """Validated jobs of a run config, in file order.

    Attributes:
        jobs: (label, parsed arguments or simulation config) pairs
        output: Output path from the config, if any
        format: Output format from the config, if any
    """

    jobs: list[tuple[str, Arguments | SimulationConfig]] = field(default_factory=list)
    output: Path | None = None
    format: str | None = None


def _reject_unknown(keys: set[str] | frozenset[str], allowed: frozenset[str], where: str) -> None:
    unknown = sorted(set(keys) - allowed)
    if unknown:
        msg = f"Unknown key(s) in {where}: {', '.join(unknown)}"
        raise ValueError(msg)


def integration_from_dict(doc: dict[str, Any]) -> IntegrationConfig:
    """Build integration settings from a config object.

    Returns:
        Validated settings

    Raises:
        ValueError: If a key is unknown or a value out of range.
    """
    _reject_unknown(set(doc), INTEGRATION_KEYS, "integration")
    return IntegrationConfig(**doc)


def simulation_config_from_dict(doc: dict[str, Any], default_seed: int | None = None) -> SimulationConfig:
    """Build a simulation study from a config object.

    Copulas are written family:theta:dim, as on the command line.

    Args:
        doc: Simulation object
        default_seed: master_seed used when the object has none

    Returns:
        Validated simulation settings

    Raises:
        ValueError: If a key is unknown, required keys are missing or a value is invalid.
    """
    if not isinstance(doc, dict):
        msg = f"A simulation must be a JSON object, got {type(doc).__name__}"
        raise ValueError(msg)
    _reject_unknown(set(doc), SIMULATION_KEYS, "simulation")
    missing = sorted({"truth_x", "truth_y", "gamma"} - set(doc))
    if missing:
        msg = f"Simulation is missing: {', '.join(missing)}"
        raise ValueError(msg)
    options: dict[str, Any] = {
        "truth_x": CopulaModel.parse(str(doc["truth_x"])),
        "truth_y": CopulaModel.parse(str(doc["truth_y"])),
        "gamma": float(doc["gamma"]),
    }
    if "sample_sizes" in doc:
        options["sample_sizes"] = tuple(doc["sample_sizes"])
    if "replications" in doc:
        options["replications"] = int(doc["replications"])
    if "master_seed" in doc or default_seed is not None:
        options["master_seed"] = int(doc.get("master_seed", default_seed))
    if "integration" in doc:
        options["integration"] = integration_from_dict(doc["integration"])
    return SimulationConfig(**options)


def job_to_argv(command: str, job: dict[str, Any], base: Path, seed: int | None) -> list[str]:
    """Translate a config job into sub-command arguments.

    Args:
        command: Sub-command name
        job: Option names to values; lists are joined with commas
        base: Directory relative data paths are resolved against
        seed: Run-wide seed applied when the job sets none

    Returns:
        Argument list starting with the command name

    Raises:
        ValueError: If the job is not a JSON object.
    """
    if not isinstance(job, dict):
        msg = f"A {command} job must be a JSON object, got {type(job).__name__}"
        raise ValueError(msg)
    job = {key.replace("-", "_"): value for key, value in job.items()}
    if seed is not None and command in SEEDED_COMMANDS:
        job.setdefault("seed", seed)
    argv = [command]
    positional = POSITIONAL_KEYS.get(command, ())
    for key in positional:
        if key in job:
            argv.append(_text(key, job[key], base))
    for key, value in job.items():
        if key in positional:
            continue
        argv.append(f"--{key.replace('_', '-')}={_text(key, value, base)}")
    return argv


def _text(key: str, value: Any, base: Path) -> str:
    if isinstance(value, list | tuple):
        return ",".join(str(v) for v in value)
    if key in PATH_KEYS:
        path = Path(str(value))
        return str(path if path.is_absolute() else base / path)
    return str(value)


def load_run_config(path: Path, parser: CliParser) -> RunPlan:
    """Read and validate a run config.

    Args:
        path: JSON file
        parser: Top-level parser used to parse every job

    Returns:
        Plan of parsed jobs

    Raises:
        ValueError: If the file is not a valid run config.
    """
    doc = FileReader(path, "json").data
    if not isinstance(doc, dict):
        msg = f"{path} must hold a JSON object"
        raise ValueError(msg)
    _reject_unknown(set(doc), TOP_LEVEL_KEYS, str(path))
    base = path.parent
    seed = None if doc.get("seed") is None else int(doc["seed"])
    plan = RunPlan(
        output=None if doc.get("output") is None else base / str(doc["output"]),
        format=doc.get("format"),
    )
    for section, jobs in doc.items():
        if section not in JOB_SECTIONS and section != SIMULATION_SECTION:
            continue
        if not isinstance(jobs, list):
            msg = f"Section {section!r} must be a list of jobs"
            raise ValueError(msg)
        for i, job in enumerate(jobs):
            label = f"{section}[{i}]"
            if section == SIMULATION_SECTION:
                plan.jobs.append((label, simulation_config_from_dict(job, seed)))
                continue
            try:
                parsed = parser.parse_args(job_to_argv(JOB_SECTIONS[section], job, base, seed))
            except ValueError as e:
                msg = f"{label}: {e}"
                raise ValueError(msg) from e
            plan.jobs.append((label, parsed))
    if plan.format is not None and plan.format not in OUTPUT_FORMATS:
        msg = f"Unknown output format {plan.format!r}"
        raise ValueError(msg)
    return plan
