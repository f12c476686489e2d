"""Copula model selection by inaccuracy against a baseline fit.

Every candidate family is fitted by maximum pseudo-likelihood on the same
pseudo-observations. The baseline is the best-fitting candidate (highest
pseudo log-likelihood, ties broken by name) unless one is pinned. Each other
candidate is scored by mccri with the candidate as truth and the baseline as
reference; the reverse order is reported beside it. Candidates are ranked by
ascending score, ties broken by name and then by position in the list.
"""

from __future__ import annotations

from asyncio import Semaphore, gather as asyncio_gather, to_thread
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from coprenyi.console import log, tracked_progress, update_progress
from coprenyi.constants import DEFAULT_CONCURRENCY
from coprenyi.copulas.types import CopulaFamily
from coprenyi.estimation import EstimationResult, fit_mpl, pseudo_observations
from coprenyi.measures import MeasureKind, MeasureRequest, evaluate
from coprenyi.quadrature import IntegrationConfig
from coprenyi.types import NumericalFailureError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from coprenyi.estimation import DataMatrix


@dataclass(frozen=True, slots=True)
class CandidateScore:
    """A ranked candidate.

    Attributes:
        fit: Fitted candidate
        mccri: Candidate as truth, baseline as reference
        mccri_reverse: Baseline as truth, candidate as reference
        rank: 1 for the smallest mccri
    """

    fit: EstimationResult
    mccri: float
    mccri_reverse: float
    rank: int


@dataclass(frozen=True, slots=True)
class SelectionReport:
    """Outcome of a model selection run.

    Attributes:
        baseline: Fitted baseline family
        baseline_entropy: mccri of the baseline against itself
        candidates: Ranked candidates
        dropped: Families whose fit failed
        gamma: Rényi order
        columns: Data columns used
    """

    baseline: EstimationResult
    baseline_entropy: float
    candidates: tuple[CandidateScore, ...]
    dropped: tuple[str, ...]
    gamma: float
    columns: tuple[str, ...]

    @property
    def ranking(self) -> list[str]:
        """Candidate families from best to worst."""
        return [str(c.fit.family) for c in self.candidates]

    def rows(self) -> list[dict[str, Any]]:
        """One record for the baseline and one per ranked candidate.

        Returns:
            Flat records
        """
        common = {
            "gamma": self.gamma,
            "columns": list(self.columns),
            "baseline": str(self.baseline.family),
            "baseline_theta": self.baseline.theta_hat,
            "dropped": list(self.dropped),
        }
        baseline_row = common | {
            "role": "baseline",
            "family": str(self.baseline.family),
            "theta_hat": self.baseline.theta_hat,
            "log_pseudo_likelihood": self.baseline.log_pseudo_likelihood,
            "aic": self.baseline.aic,
            "mccri": self.baseline_entropy,
            "mccri_reverse": self.baseline_entropy,
            "rank": None,
        }
        candidate_rows = [
            common
            | {
                "role": "candidate",
                "family": str(c.fit.family),
                "theta_hat": c.fit.theta_hat,
                "log_pseudo_likelihood": c.fit.log_pseudo_likelihood,
                "aic": c.fit.aic,
                "mccri": c.mccri,
                "mccri_reverse": c.mccri_reverse,
                "rank": c.rank,
            }
            for c in self.candidates
        ]
        return [baseline_row, *candidate_rows]


def choose_baseline(fits: Sequence[EstimationResult], pinned: CopulaFamily | str | None = None) -> int:
    """Index of the baseline fit.

    Returns:
        Position of the pinned family, or of the highest pseudo log-likelihood

    Raises:
        ValueError: If the pinned family was not fitted.
    """
    if pinned is not None:
        for i, fit in enumerate(fits):
            if fit.family == CopulaFamily(pinned):
                return i
        msg = f"Baseline family {pinned} is not among the fitted candidates"
        raise ValueError(msg)
    return min(range(len(fits)), key=lambda i: (-fits[i].log_pseudo_likelihood, str(fits[i].family), i))


async def select_models(
    data: DataMatrix,
    families: Sequence[CopulaFamily | str],
    gamma: float,
    baseline: CopulaFamily | str | None = None,
    integration: IntegrationConfig | None = None,
    max_concurrency: int = DEFAULT_CONCURRENCY,
) -> SelectionReport:
    """Fit every candidate, pick the baseline and rank the rest by mccri.

    Args:
        data: Dataset (columns already selected)
        families: Candidate families, duplicates allowed
        gamma: Rényi order
        baseline: Family to use as baseline instead of the best fit
        integration: Quadrature settings for the measures
        max_concurrency: Maximum fits or evaluations in flight

    Returns:
        Selection report

    Raises:
        ValueError: If no candidate could be fitted.
    """
    integration = integration or IntegrationConfig()
    semaphore = Semaphore(max(1, max_concurrency))
    pseudo = pseudo_observations(data)
    names = [CopulaFamily(f) for f in families]

    with tracked_progress(
        f"Fitting {len(names)} candidate copulas",
        total=len(names),
        done=f"Fitted {len(names)} candidates",
        failed="Candidate fitting failed",
    ) as task_id:

        async def fit_task(family: CopulaFamily) -> EstimationResult | None:
            async with semaphore:
                try:
                    fit = await to_thread(fit_mpl, family, pseudo)
                except (ValueError, NumericalFailureError) as e:
                    log.warning("Dropping %s: %s", family, e)
                    fit = None
                update_progress(task_id, advance=1, description=f"Fitting candidates: {family}")
                return fit

        results = await asyncio_gather(*(fit_task(f) for f in names))

    fits = [fit for fit in results if fit is not None]
    dropped = tuple(str(f) for f, fit in zip(names, results, strict=True) if fit is None)
    if not fits:
        msg = "No candidate copula could be fitted"
        raise ValueError(msg)
    base_index = choose_baseline(fits, baseline)
    base = fits[base_index]
    others = [(i, fit) for i, fit in enumerate(fits) if i != base_index]
    log.info("Baseline %s (theta=%s)", base.family, base.theta_hat)

    def score(truth: EstimationResult, reference: EstimationResult) -> float:
        request = MeasureRequest(
            MeasureKind.MCCRI,
            truth=truth.model,
            reference=reference.model,
            gamma=gamma,
            integration=integration,
        )
        return evaluate(request).value

    pairs = [(base, base)] + [p for _, fit in others for p in ((fit, base), (base, fit))]
    with tracked_progress(
        f"Scoring {len(others)} candidates against {base.family}",
        total=len(pairs),
        done=f"Scored {len(others)} candidates",
        failed="Candidate scoring failed",
    ) as task_id:

        async def score_task(truth: EstimationResult, reference: EstimationResult) -> float:
            async with semaphore:
                value = await to_thread(score, truth, reference)
                update_progress(task_id, advance=1)
                return value

        values = await asyncio_gather(*(score_task(t, r) for t, r in pairs))

    entropy, scored = values[0], values[1:]
    unranked = [(fit, scored[2 * k], scored[2 * k + 1], i) for k, (i, fit) in enumerate(others)]
    unranked.sort(key=lambda item: (item[1], str(item[0].family), item[3]))
    candidates = tuple(
        CandidateScore(fit=fit, mccri=value, mccri_reverse=reverse, rank=rank)
        for rank, (fit, value, reverse, _) in enumerate(unranked, start=1)
    )
    return SelectionReport(
        baseline=base,
        baseline_entropy=entropy,
        candidates=candidates,
        dropped=dropped,
        gamma=gamma,
        columns=data.columns,
    )
