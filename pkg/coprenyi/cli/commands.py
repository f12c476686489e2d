"""Sub-command handlers.

Each handler takes the parsed arguments and returns the list of records the
command produces; the entry point writes them in the requested format.
"""

from __future__ import annotations

from inspect import isawaitable
from typing import TYPE_CHECKING, Any

from coprenyi.bounds import BoundRequest, bound_report
from coprenyi.console import log
from coprenyi.copulas.model import CopulaModel
from coprenyi.copulas.sampling import sample
from coprenyi.estimation import DataMatrix, fit_mpl, fit_tau_inversion, pseudo_observations
from coprenyi.marginals import DistortionProfile, exponential_distortion, prhr_distortion
from coprenyi.measures import MeasureKind, MeasureRequest, SweepField, evaluate, scale_for, sweep
from coprenyi.quadrature import IntegrationConfig
from coprenyi.simulation import SimulationConfig, run_study

from .args import build_parser
from .config import load_run_config, simulation_config_from_dict
from .files import FileReader
from .selection import select_models

if TYPE_CHECKING:
    from argparse import Namespace as Arguments
    from collections.abc import Awaitable, Callable

type Records = list[dict[str, Any]]


def split_list(text: str) -> list[str]:
    """Split comma-separated text, dropping blanks.

    Returns:
        Stripped items
    """
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_floats(text: str, what: str) -> list[float]:
    """Parse comma-separated numbers.

    Returns:
        Parsed values

    Raises:
        ValueError: If an item is not a number or the list is empty.
    """
    try:
        values = [float(item) for item in split_list(text)]
    except ValueError as e:
        msg = f"{what} must be comma-separated numbers, got {text!r}"
        raise ValueError(msg) from e
    if not values:
        msg = f"{what} must not be empty"
        raise ValueError(msg)
    return values


def integration_from_args(args: Arguments) -> IntegrationConfig:
    """Integration settings from the shared integration flags.

    Returns:
        Validated settings
    """
    return IntegrationConfig(
        method=args.method,
        nodes_per_axis=args.nodes,
        mc_samples=args.samples,
        seed=args.seed,
        rel_tol=args.rel_tol,
        max_refinements=args.max_refinements,
    )


def parse_marginals(text: str, kind: MeasureKind, dimension: int) -> DistortionProfile:
    """Distortion profile from exp:, prhr: or power: text.

    A single value is applied to every coordinate.

    Args:
        text: e.g. exp:1.5,2 (exponential reference rates against standard exponential truth),
            prhr:0.5 (reference G = F ** a) or power:2,3 (maps u -> u ** a)
        kind: Measure kind, which fixes the distortion scale
        dimension: Copula dimension

    Returns:
        Validated profile

    Raises:
        ValueError: If the text is malformed or the count does not match the dimension.
    """
    family, _, values_text = text.partition(":")
    values = parse_floats(values_text, "--marginals values")
    if len(values) == 1:
        values *= dimension
    if len(values) != dimension:
        msg = f"--marginals needs 1 or {dimension} values, got {len(values)}"
        raise ValueError(msg)
    scale = scale_for(kind)
    match family.strip().lower():
        case "exp":
            return exponential_distortion(values, scale)
        case "prhr":
            return prhr_distortion(values, scale)
        case "power":
            return DistortionProfile.power(values, scale)
        case _:
            msg = f"--marginals must start with exp:, prhr: or power:, got {text!r}"
            raise ValueError(msg)


def request_from_args(args: Arguments) -> MeasureRequest:
    """Measure request from the measure flags.

    Returns:
        Validated request
    """
    kind = MeasureKind(args.kind)
    truth = CopulaModel.parse(args.copula_x)
    reference = None if args.copula_y is None else CopulaModel.parse(args.copula_y, truth.dimension)
    distortion = None if args.marginals is None else parse_marginals(args.marginals, kind, truth.dimension)
    return MeasureRequest(
        kind=kind,
        truth=truth,
        reference=reference,
        gamma=args.gamma,
        distortion=distortion,
        integration=integration_from_args(args),
    )


def load_data(args: Arguments) -> DataMatrix:
    """Dataset from the data flags.

    Returns:
        Validated data matrix
    """
    columns = None if args.columns is None else split_list(args.columns)
    return DataMatrix.from_records(FileReader(args.data, "csv").data, columns)


def cmd_measure(args: Arguments) -> Records:
    """Evaluate one measure."""
    return [evaluate(request_from_args(args)).as_dict()]


def cmd_sweep(args: Arguments) -> Records:
    """Evaluate a measure over a grid of one quantity."""
    grid = parse_floats(args.values, "--values")
    values = sweep(request_from_args(args), SweepField(args.field), grid)
    return [
        {"field": args.field, "grid_value": x} | value.as_dict()
        for x, value in zip(grid, values, strict=True)
    ]


def cmd_bounds(args: Arguments) -> Records:
    """Fréchet-Hoeffding bounds with the closed-form comparison."""
    request = BoundRequest(gamma=args.gamma, alpha=args.alpha, beta=args.beta, target=args.target)
    return [bound_report(request).as_dict()]


def cmd_fit(args: Arguments) -> Records:
    """Fit one family to a dataset."""
    data = load_data(args)
    if args.estimator == "tau":
        result = fit_tau_inversion(args.family, data)
    else:
        result = fit_mpl(args.family, pseudo_observations(data))
    return [result.as_dict() | {"columns": list(data.columns)}]


async def cmd_select(args: Arguments) -> Records:
    """Rank candidate copulas against a baseline fit."""
    report = await select_models(
        load_data(args),
        split_list(args.families),
        gamma=args.gamma,
        baseline=args.baseline,
        integration=integration_from_args(args),
        max_concurrency=args.concurrency,
    )
    log.info("Ranking against %s: %s", report.baseline.family, " < ".join(report.ranking))
    return report.rows()


async def simulate(cfg: SimulationConfig, concurrency: int) -> Records:
    """Run a study and flatten its report."""
    report = await run_study(cfg, concurrency)
    return report.rows()


async def cmd_simulate(args: Arguments) -> Records:
    """Run the simulation study described by a JSON file."""
    cfg = simulation_config_from_dict(FileReader(args.config, "json").data)
    return await simulate(cfg, args.concurrency)


def cmd_sample(args: Arguments) -> Records:
    """Draw a seeded sample."""
    theta = None if args.theta in {"-", ""} else float(args.theta)
    model = CopulaModel(args.family, args.dim, theta)
    draws = sample(model, args.count, args.seed)
    names = [f"u{i + 1}" for i in range(model.dimension)]
    return [dict(zip(names, (float(x) for x in row), strict=True)) for row in draws]


async def cmd_run(args: Arguments) -> Records:
    """Execute every job of a run config in file order.

    The config's output path and format, when present, replace the command line's.
    """
    plan = load_run_config(args.config, build_parser())
    if plan.output is not None:
        args.output = plan.output
    if plan.format is not None:
        args.format = plan.format
    records: Records = []
    for label, job in plan.jobs:
        log.info("Running %s", label)
        if isinstance(job, SimulationConfig):
            rows = await simulate(job, args.concurrency)
        else:
            job.concurrency = args.concurrency
            rows = await run_command(job)
        records.extend({"job": label} | row for row in rows)
    return records


COMMANDS: dict[str, Callable[[Arguments], Records | Awaitable[Records]]] = {
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "fit": cmd_fit,
    "select": cmd_select,
    "simulate": cmd_simulate,
    "sample": cmd_sample,
    "run": cmd_run,
}


async def run_command(args: Arguments) -> Records:
    """Dispatch parsed arguments to their handler.

    Returns:
        Records produced by the command
    """
    result = COMMANDS[args.command](args)
    if isawaitable(result):
        result = await result
    return result
