"""Monte Carlo study of the plug-in copula Rényi inaccuracy estimator.

Each cell is one sample size. A replication draws n rows from each truth
copula with seeds derived from (master_seed, cell, replication, stream), fits
both families by maximum pseudo-likelihood and evaluates the plug-in measure.
The cell reports the standard deviation, absolute bias and mean squared error
of the estimates against the population value of the truth copulas, computed
once per study with a tight quadrature tolerance.

Replications run concurrently in worker threads under a semaphore; results are
gathered in replication order, so the report does not depend on scheduling.
"""

from __future__ import annotations

from asyncio import Semaphore, gather as asyncio_gather, to_thread
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

import numpy as np

from coprenyi.console import log, tracked_progress, update_progress
from coprenyi.constants import DEFAULT_CONCURRENCY, MAX_EXCLUDED_FRACTION, REFERENCE_REL_TOL
from coprenyi.copulas.sampling import sample
from coprenyi.estimation import estimate_mccri
from coprenyi.measures import MeasureKind, MeasureRequest, evaluate
from coprenyi.quadrature import IntegrationConfig
from coprenyi.rng import derive_seed
from coprenyi.types import NumericalFailureError

if TYPE_CHECKING:
    from coprenyi.copulas.model import CopulaModel
    from coprenyi.measures import MeasureValue

MIN_REPLICATIONS = 2
MIN_SAMPLE_SIZE = 20


@dataclass(frozen=True, slots=True)
class SimulationConfig:
    """Settings of a simulation study.

    Attributes:
        truth_x: Truth copula of the first vector (fitted as the truth side)
        truth_y: Truth copula of the second vector (fitted as the reference side)
        gamma: Rényi order
        sample_sizes: One cell per sample size
        replications: Replications per cell
        master_seed: Seed every replication seed is derived from
        integration: Quadrature settings for the per-replication estimates
    """

    truth_x: CopulaModel
    truth_y: CopulaModel
    gamma: float
    sample_sizes: tuple[int, ...] = (100, 300, 500)
    replications: int = 500
    master_seed: int = 0
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)

    def __post_init__(self) -> None:
        """Validate the study design.

        Raises:
            ValueError: If replications, sample sizes or dimensions are out of range.
        """
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        if self.replications < MIN_REPLICATIONS:
            msg = f"replications must be at least {MIN_REPLICATIONS}, got {self.replications}"
            raise ValueError(msg)
        if not self.sample_sizes or min(self.sample_sizes) < MIN_SAMPLE_SIZE:
            msg = f"Every sample size must be at least {MIN_SAMPLE_SIZE}, got {list(self.sample_sizes)}"
            raise ValueError(msg)
        if self.truth_x.dimension != self.truth_y.dimension:
            msg = f"Truth copula dimensions differ: {self.truth_x.dimension} and {self.truth_y.dimension}"
            raise ValueError(msg)
        # validates gamma against the measure's rules
        self.population_request()

    def population_request(self) -> MeasureRequest:
        """Request for the population value of the truth copulas.

        Returns:
            mccri request at the reference tolerance
        """
        return MeasureRequest(
            kind=MeasureKind.MCCRI,
            truth=self.truth_x,
            reference=self.truth_y,
            gamma=self.gamma,
            integration=replace(self.integration, rel_tol=min(self.integration.rel_tol, REFERENCE_REL_TOL)),
        )

    def as_dict(self) -> dict[str, Any]:
        """Convert the settings to a dictionary.

        Returns:
            Dictionary representation of the settings
        """
        return {
            "truth_x": self.truth_x.label,
            "truth_y": self.truth_y.label,
            "gamma": self.gamma,
            "sample_sizes": list(self.sample_sizes),
            "replications": self.replications,
            "master_seed": self.master_seed,
            "integration": self.integration.as_dict(),
        }


@dataclass(frozen=True, slots=True)
class SimulationCell:
    """Error summary of one sample size.

    Attributes:
        sample_size: Rows drawn per replication
        reference_value: Population measure of the truth copulas
        mean_estimate: Mean of the plug-in estimates
        sd: Standard deviation of the estimates (population form)
        ab: Absolute bias |mean_estimate - reference_value|
        mse: Mean squared error against reference_value
        replications: Replications that produced an estimate
        excluded: Replications whose fit or evaluation failed
        mean_theta_x: Mean fitted truth-side parameter (None for the product copula)
        mean_theta_y: Mean fitted reference-side parameter (None for the product copula)
    """

    sample_size: int
    reference_value: float
    mean_estimate: float
    sd: float
    ab: float
    mse: float
    replications: int
    excluded: int
    mean_theta_x: float | None = None
    mean_theta_y: float | None = None

    def as_dict(self) -> dict[str, Any]:
        """Convert the cell to a dictionary.

        Returns:
            Dictionary representation of the cell
        """
        return {
            "n": self.sample_size,
            "reference_value": self.reference_value,
            "mean_estimate": self.mean_estimate,
            "sd": self.sd,
            "ab": self.ab,
            "mse": self.mse,
            "replications": self.replications,
            "excluded": self.excluded,
            "mean_theta_x": self.mean_theta_x,
            "mean_theta_y": self.mean_theta_y,
        }


@dataclass(frozen=True, slots=True)
class SimulationReport:
    """All cells of a study with the configuration that produced them."""

    config: SimulationConfig
    cells: tuple[SimulationCell, ...]

    def rows(self) -> list[dict[str, Any]]:
        """One flat record per cell.

        Returns:
            Records carrying the study parameters and the cell summary
        """
        header = {
            "truth_x": self.config.truth_x.label,
            "truth_y": self.config.truth_y.label,
            "gamma": self.config.gamma,
            "master_seed": self.config.master_seed,
        }
        return [header | cell.as_dict() for cell in self.cells]


def replicate(cfg: SimulationConfig, cell: int, replication: int) -> MeasureValue:
    """Run one replication: sample both vectors, fit and estimate.

    Returns:
        Plug-in estimate of the measure
    """
    n = cfg.sample_sizes[cell]
    data_x = sample(cfg.truth_x, n, derive_seed(cfg.master_seed, cell, replication, 0))
    data_y = sample(cfg.truth_y, n, derive_seed(cfg.master_seed, cell, replication, 1))
    return estimate_mccri(
        cfg.truth_x.family, cfg.truth_y.family, data_x, cfg.gamma, cfg.integration, data_y=data_y
    )


def _mean_parameter(models: list[CopulaModel]) -> float | None:
    parameters = [m.parameter for m in models if m.parameter is not None]
    return float(np.mean(parameters)) if parameters else None


def summarise(
    sample_size: int, reference_value: float, estimates: list[MeasureValue | None]
) -> SimulationCell:
    """Aggregate one cell's replications in replication order.

    Returns:
        Cell summary

    Raises:
        NumericalFailureError: If more than 5% of the replications were excluded.
    """
    kept = [e for e in estimates if e is not None]
    excluded = len(estimates) - len(kept)
    if excluded > MAX_EXCLUDED_FRACTION * len(estimates) or len(kept) < MIN_REPLICATIONS:
        msg = f"{excluded} of {len(estimates)} replications failed at n={sample_size}"
        raise NumericalFailureError(msg)
    values = np.array([e.value for e in kept])
    errors = values - reference_value
    mean = float(np.mean(values))
    return SimulationCell(
        sample_size=sample_size,
        reference_value=reference_value,
        mean_estimate=mean,
        sd=float(np.std(values)),
        ab=abs(mean - reference_value),
        mse=float(np.mean(errors * errors)),
        replications=len(kept),
        excluded=excluded,
        mean_theta_x=_mean_parameter([e.request.truth for e in kept]),
        mean_theta_y=_mean_parameter([e.request.reference for e in kept if e.request.reference is not None]),
    )


async def run_study(cfg: SimulationConfig, max_concurrency: int = DEFAULT_CONCURRENCY) -> SimulationReport:
    """Run every cell of a simulation study.

    Args:
        cfg: Study settings
        max_concurrency: Maximum replications in flight

    Returns:
        Report with one cell per sample size

    Raises:
        NumericalFailureError: If a cell exceeds the exclusion limit or the population value fails.
    """
    semaphore = Semaphore(max(1, max_concurrency))
    reference_value = evaluate(cfg.population_request()).value
    log.info(
        "Population value of %s against %s: %.10g", cfg.truth_x.label, cfg.truth_y.label, reference_value
    )
    total = len(cfg.sample_sizes) * cfg.replications

    with tracked_progress(
        f"Simulating {total} replications",
        total=total,
        done=f"Completed {total} replications",
        failed="Simulation failed",
    ) as task_id:

        async def replication_task(cell: int, replication: int) -> MeasureValue | None:
            async with semaphore:
                try:
                    result = await to_thread(replicate, cfg, cell, replication)
                except (ValueError, NumericalFailureError) as e:
                    log.warning("Replication %d at n=%d excluded: %s", replication, cfg.sample_sizes[cell], e)
                    result = None
                update_progress(task_id, advance=1)
                return result

        cells = []
        for cell, n in enumerate(cfg.sample_sizes):
            estimates = await asyncio_gather(*(replication_task(cell, r) for r in range(cfg.replications)))
            summary = summarise(n, reference_value, list(estimates))
            log.info(
                "n=%d: mean=%.8g sd=%.3g ab=%.3g mse=%.3g",
                n,
                summary.mean_estimate,
                summary.sd,
                summary.ab,
                summary.mse,
            )
            cells.append(summary)
    return SimulationReport(cfg, tuple(cells))
