"""Copula-based Rényi inaccuracy, entropy and log-inaccuracy measures.

Every measure is an integral over the unit hypercube of a truth surface A
against a reference surface B evaluated at distorted coordinates d(u):

- Rényi kinds: psi(gamma) * log of the integral of A(u) * B(d(u)) ** (gamma - 1),
  with psi(gamma) = 1 / (1 - gamma)
- entropy kinds: the Rényi form with B = A and no distortion
- log-inaccuracy kinds (cci, sci): minus the integral of A(u) * log B(d(u))

The surface is the copula (mccri, mccre, cci), the survival copula (mscri,
mscre, sci), the co-copula (mcocri) or the dual copula (mdcri). The first
copula of a request is the truth and enters linearly; the second is the
reference. Where A vanishes the integrand is taken as 0, its limit value.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from math import isfinite, log
from typing import TYPE_CHECKING, Any

import numpy as np

from coprenyi.console import log as logger, tracked_progress, update_progress
from coprenyi.constants import GAMMA_EXCLUSION
from coprenyi.copulas.families import cdf_points
from coprenyi.copulas.transforms import co_points, dual_points, survival_points
from coprenyi.marginals import DistortionProfile, DistortionScale, exponential_distortion
from coprenyi.quadrature import IntegralEstimate, IntegrationConfig, integrate
from coprenyi.types import NumericalFailureError

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from coprenyi.copulas.model import CopulaModel

type Surface = Callable[[CopulaModel, NDArray[np.float64]], NDArray[np.float64]]


class MeasureKind(StrEnum):
    """The eight measures."""

    MCCRI = "mccri"
    MSCRI = "mscri"
    MCOCRI = "mcocri"
    MDCRI = "mdcri"
    CCI = "cci"
    SCI = "sci"
    MCCRE = "mccre"
    MSCRE = "mscre"


LOG_KINDS = frozenset({MeasureKind.CCI, MeasureKind.SCI})
ENTROPY_KINDS = frozenset({MeasureKind.MCCRE, MeasureKind.MSCRE})
SURVIVAL_KINDS = frozenset({MeasureKind.MSCRI, MeasureKind.SCI, MeasureKind.MSCRE})

SURFACES: dict[MeasureKind, Surface] = {
    MeasureKind.MCCRI: cdf_points,
    MeasureKind.CCI: cdf_points,
    MeasureKind.MCCRE: cdf_points,
    MeasureKind.MSCRI: survival_points,
    MeasureKind.SCI: survival_points,
    MeasureKind.MSCRE: survival_points,
    MeasureKind.MCOCRI: co_points,
    MeasureKind.MDCRI: dual_points,
}


def scale_for(kind: MeasureKind) -> DistortionScale:
    """Distortion scale a measure kind expects."""
    return DistortionScale.SURVIVAL if kind in SURVIVAL_KINDS else DistortionScale.CDF


def renyi_factor(gamma: float) -> float:
    """psi(gamma) = 1 / (1 - gamma)."""
    return 1.0 / (1.0 - gamma)


@dataclass(frozen=True, slots=True)
class MeasureRequest:
    """A fully specified measure evaluation.

    Attributes:
        kind: Which measure
        truth: Truth copula (linear factor)
        reference: Reference copula (None for the entropy kinds)
        gamma: Rényi order (None for cci and sci)
        distortion: Coordinate maps for the reference; identity when omitted
        integration: Quadrature settings
    """

    kind: MeasureKind
    truth: CopulaModel
    reference: CopulaModel | None = None
    gamma: float | None = None
    distortion: DistortionProfile | None = None
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)

    def __post_init__(self) -> None:
        """Validate the order, copulas and distortion against the kind.

        Raises:
            ValueError: If the combination is not a valid measure.
        """
        kind = MeasureKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in LOG_KINDS:
            if self.gamma is not None:
                msg = f"gamma is not accepted for {kind}"
                raise ValueError(msg)
        elif self.gamma is None or not isfinite(self.gamma) or self.gamma <= 0:
            msg = f"{kind} needs gamma > 0, got {self.gamma}"
            raise ValueError(msg)
        elif abs(self.gamma - 1.0) <= GAMMA_EXCLUSION:
            msg = f"gamma must differ from 1 (use cci or sci for the limit), got {self.gamma}"
            raise ValueError(msg)
        if kind in ENTROPY_KINDS:
            if self.reference is not None:
                msg = f"{kind} takes a single copula"
                raise ValueError(msg)
        elif self.reference is None:
            msg = f"{kind} needs a reference copula"
            raise ValueError(msg)
        elif self.reference.dimension != self.truth.dimension:
            msg = f"Copula dimensions differ: {self.truth.dimension} and {self.reference.dimension}"
            raise ValueError(msg)
        scale = scale_for(kind)
        if self.distortion is None:
            object.__setattr__(self, "distortion", DistortionProfile.identity(self.truth.dimension, scale))
        elif self.distortion.scale is not scale:
            msg = f"{kind} needs a {scale}-scale distortion, got {self.distortion.scale}"
            raise ValueError(msg)
        elif self.distortion.dimension != self.truth.dimension:
            msg = f"Distortion has {self.distortion.dimension} maps for a {self.truth.dimension}-copula"
            raise ValueError(msg)

    @property
    def profile(self) -> DistortionProfile:
        """The distortion profile (always set after validation)."""
        if self.distortion is None:  # pragma: no cover
            return DistortionProfile.identity(self.truth.dimension, scale_for(self.kind))
        return self.distortion

    def as_dict(self) -> dict[str, Any]:
        """Convert the request to a dictionary.

        Returns:
            Dictionary representation of the request
        """
        return {
            "kind": str(self.kind),
            "gamma": self.gamma,
            "truth": self.truth.label,
            "reference": None if self.reference is None else self.reference.label,
            "distortion": self.profile.as_dict(),
            "integration": self.integration.as_dict(),
        }


@dataclass(frozen=True, slots=True)
class MeasureValue:
    """Result of a measure evaluation.

    Attributes:
        kind: Which measure
        value: The measure
        integral: Underlying integral estimate
        request: Request that produced the value
    """

    kind: MeasureKind
    value: float
    integral: IntegralEstimate
    request: MeasureRequest

    def as_dict(self) -> dict[str, Any]:
        """Convert the result to a flat record.

        Returns:
            Dictionary with the value, integral and request echo
        """
        return {
            "kind": str(self.kind),
            "gamma": self.request.gamma,
            "value": self.value,
            "integral": self.integral.as_dict(),
            "truth": self.request.truth.label,
            "reference": None if self.request.reference is None else self.request.reference.label,
            "distortion": self.request.profile.as_dict(),
            "config": self.request.integration.as_dict(),
        }


def _integrand(req: MeasureRequest) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    surface = SURFACES[req.kind]
    truth = req.truth
    reference = req.reference or req.truth
    profile = req.profile
    entropy = req.kind in ENTROPY_KINDS

    def log_integrand(points: NDArray[np.float64]) -> NDArray[np.float64]:
        a = surface(truth, points)
        b = surface(reference, profile.apply(points))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(a == 0.0, 0.0, -a * np.log(b))

    def renyi_integrand(points: NDArray[np.float64]) -> NDArray[np.float64]:
        a = surface(truth, points)
        b = a if entropy else surface(reference, profile.apply(points))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.where(a == 0.0, 0.0, a * b ** (req.gamma - 1.0))

    return log_integrand if req.kind in LOG_KINDS else renyi_integrand


def evaluate(req: MeasureRequest) -> MeasureValue:
    """Evaluate any measure request.

    Returns:
        The measure value with its integral

    Raises:
        NumericalFailureError: If the integrand is not finite or the Rényi integral is not positive.
    """
    estimate = integrate(_integrand(req), req.truth.dimension, req.integration)
    if req.kind in LOG_KINDS:
        value = estimate.value
    else:
        if not (isfinite(estimate.value) and estimate.value > 0):
            msg = f"{req.kind} integral must be positive, got {estimate.value!r}"
            raise NumericalFailureError(msg)
        value = renyi_factor(req.gamma) * log(estimate.value)
    if not isfinite(value):
        msg = f"{req.kind} evaluated to a non-finite value"
        raise NumericalFailureError(msg)
    reference = req.reference and req.reference.label
    logger.debug("%s(%s, %s) = %.10g", req.kind, req.truth.label, reference, value)
    return MeasureValue(kind=req.kind, value=value, integral=estimate, request=req)


def _evaluate_kind(req: MeasureRequest, *kinds: MeasureKind) -> MeasureValue:
    if req.kind not in kinds:
        msg = f"Expected a {'/'.join(kinds)} request, got {req.kind}"
        raise ValueError(msg)
    return evaluate(req)


def mccri(req: MeasureRequest) -> MeasureValue:
    """Multivariate copula Rényi inaccuracy."""
    return _evaluate_kind(req, MeasureKind.MCCRI)


def mccre(req: MeasureRequest) -> MeasureValue:
    """Multivariate copula Rényi entropy."""
    return _evaluate_kind(req, MeasureKind.MCCRE)


def mscri(req: MeasureRequest) -> MeasureValue:
    """Multivariate survival copula Rényi inaccuracy."""
    return _evaluate_kind(req, MeasureKind.MSCRI)


def mscre(req: MeasureRequest) -> MeasureValue:
    """Multivariate survival copula Rényi entropy."""
    return _evaluate_kind(req, MeasureKind.MSCRE)


def cci(req: MeasureRequest) -> MeasureValue:
    """Copula-based cumulative (log) inaccuracy."""
    return _evaluate_kind(req, MeasureKind.CCI)


def sci(req: MeasureRequest) -> MeasureValue:
    """Survival copula (log) inaccuracy."""
    return _evaluate_kind(req, MeasureKind.SCI)


def cocri(req: MeasureRequest) -> MeasureValue:
    """Multivariate co-copula Rényi inaccuracy."""
    return _evaluate_kind(req, MeasureKind.MCOCRI)


def dcri(req: MeasureRequest) -> MeasureValue:
    """Multivariate dual copula Rényi inaccuracy."""
    return _evaluate_kind(req, MeasureKind.MDCRI)


class SweepField(StrEnum):
    """Quantity varied by sweep()."""

    GAMMA = "gamma"
    TRUTH = "truth"
    REFERENCE = "reference"
    LAMBDA = "lambda"


def vary(req: MeasureRequest, sweep_field: SweepField, value: float) -> MeasureRequest:
    """Copy of a request with one quantity replaced.

    The lambda field sets an Exponential(lambda) reference against standard
    exponential truth marginals on every coordinate.

    Returns:
        New validated request

    Raises:
        ValueError: If the request has no such quantity.
    """
    match SweepField(sweep_field):
        case SweepField.GAMMA:
            return replace(req, gamma=value)
        case SweepField.TRUTH:
            return replace(req, truth=req.truth.with_parameter(value))
        case SweepField.REFERENCE:
            if req.reference is None:
                msg = f"{req.kind} has no reference copula to vary"
                raise ValueError(msg)
            return replace(req, reference=req.reference.with_parameter(value))
        case SweepField.LAMBDA:
            rates = [value] * req.truth.dimension
            return replace(req, distortion=exponential_distortion(rates, scale_for(req.kind)))


def sweep(req: MeasureRequest, sweep_field: SweepField, values: Sequence[float]) -> list[MeasureValue]:
    """Evaluate a measure over a grid of one varying quantity.

    Args:
        req: Base request
        sweep_field: Quantity to vary
        values: Grid of values, evaluated in order

    Returns:
        One measure value per grid value
    """
    requests = [vary(req, sweep_field, v) for v in values]
    results: list[MeasureValue] = []
    with tracked_progress(
        f"Sweeping {req.kind} over {sweep_field}",
        total=len(requests),
        done=f"Swept {len(requests)} values of {sweep_field}",
        failed=f"Sweep over {sweep_field} failed",
    ) as task_id:
        for request in requests:
            results.append(evaluate(request))
            update_progress(task_id, advance=1)
    return results
