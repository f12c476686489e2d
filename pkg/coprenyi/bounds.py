"""Fréchet-Hoeffding bounds on the bivariate copula and survival copula inaccuracies.

With an independent reference whose marginals are powers of the truth
marginals (G_1 = F_1 ** alpha, G_2 = F_2 ** beta, or the survival analogue),
the reference surface at the distorted point is u ** alpha * v ** beta. Replacing
the truth copula by the lower and upper Fréchet-Hoeffding bounds gives two
kernel integrals

    I_max = integral of max(u + v - 1, 0) * (u ** alpha * v ** beta) ** (gamma - 1)
    I_min = integral of min(u, v) * (u ** alpha * v ** beta) ** (gamma - 1)

and I_max <= I_min. Multiplying the logs by psi(gamma) = 1 / (1 - gamma) orients
them: for gamma > 1 the max-kernel value is the upper bound, for 0 < gamma < 1
it is the lower bound. The survival version has the same integrals because the
survival copula obeys the same envelope.

Both kernels are integrated after splitting the square along their kink line
(u + v = 1 for max, u = v for min) and mapping each smooth piece back onto
the unit square. The printed rational and beta-function closed forms are
evaluated beside the integrals and every disagreement is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from math import isfinite, log, nan
from typing import TYPE_CHECKING, Any

import numpy as np

from coprenyi.console import log as logger
from coprenyi.constants import (
    BOUNDS_AGREEMENT_TOLERANCE,
    BOUNDS_MAX_REFINEMENTS,
    BOUNDS_REL_TOL,
    GAMMA_EXCLUSION,
)
from coprenyi.measures import renyi_factor
from coprenyi.quadrature import IntegrationConfig, beta_function, integrate
from coprenyi.types import NumericalFailureError

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import NDArray


class BoundTarget(StrEnum):
    """Measure being bounded."""

    MCCRI = "mccri"
    MSCRI = "mscri"


def default_bounds_integration() -> IntegrationConfig:
    """Tensor rule settings for the kinked bound kernels."""
    return IntegrationConfig(rel_tol=BOUNDS_REL_TOL, max_refinements=BOUNDS_MAX_REFINEMENTS)


@dataclass(frozen=True, slots=True)
class BoundRequest:
    """Parameters of a Fréchet-Hoeffding bound.

    Attributes:
        gamma: Rényi order, positive and not 1
        alpha: Power linking the first reference marginal to the truth marginal
        beta: Power linking the second reference marginal to the truth marginal
        target: mccri or mscri
        integration: Quadrature settings for the kernel integrals
    """

    gamma: float
    alpha: float
    beta: float
    target: BoundTarget = BoundTarget.MCCRI
    integration: IntegrationConfig = field(default_factory=default_bounds_integration)

    def __post_init__(self) -> None:
        """Validate positivity of the parameters.

        Raises:
            ValueError: If gamma, alpha or beta is not admissible.
        """
        object.__setattr__(self, "target", BoundTarget(self.target))
        for name in ("gamma", "alpha", "beta"):
            value = getattr(self, name)
            if not isfinite(value) or value <= 0:
                msg = f"{name} must be positive, got {value}"
                raise ValueError(msg)
        if abs(self.gamma - 1.0) <= GAMMA_EXCLUSION:
            msg = f"gamma must differ from 1, got {self.gamma}"
            raise ValueError(msg)

    @property
    def exponent(self) -> float:
        """gamma - 1."""
        return self.gamma - 1.0

    def as_dict(self) -> dict[str, Any]:
        """Convert the request to a dictionary.

        Returns:
            Dictionary representation of the request
        """
        return {"target": str(self.target), "gamma": self.gamma, "alpha": self.alpha, "beta": self.beta}


def _max_kernel(alpha: float, beta: float, k: float) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    # upper triangle u + v > 1 with v = 1 - u + u * t, dv = u dt
    def integrand(points: NDArray[np.float64]) -> NDArray[np.float64]:
        u, t = points[:, 0], points[:, 1]
        v = 1.0 - u * (1.0 - t)
        return u * u * t * u ** (alpha * k) * v ** (beta * k)

    return integrand


def _min_kernel(alpha: float, beta: float, k: float) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    # v < u with v = s * t, plus u < v with u = s * t; both pieces carry jacobian s
    def integrand(points: NDArray[np.float64]) -> NDArray[np.float64]:
        s, t = points[:, 0], points[:, 1]
        st = s * t
        lower = s * st * s ** (alpha * k) * st ** (beta * k)
        upper = s * st * st ** (alpha * k) * s ** (beta * k)
        return lower + upper

    return integrand


def kernel_integrals(req: BoundRequest) -> tuple[float, float]:
    """Raw max-kernel and min-kernel integrals.

    Returns:
        (I_max, I_min)

    Raises:
        NumericalFailureError: If either integral is not positive.
    """
    k = req.exponent
    i_max = integrate(_max_kernel(req.alpha, req.beta, k), 2, req.integration).value
    i_min = integrate(_min_kernel(req.alpha, req.beta, k), 2, req.integration).value
    for name, value in (("max", i_max), ("min", i_min)):
        if not (isfinite(value) and value > 0):
            msg = f"{name}-kernel bound integral must be positive, got {value!r}"
            raise NumericalFailureError(msg)
    logger.debug("Bound kernels at %s: I_max=%.15g I_min=%.15g", req.as_dict(), i_max, i_min)
    return i_max, i_min


def orient(gamma: float, max_kernel_value: float, min_kernel_value: float) -> tuple[float, float]:
    """Turn the two kernel values into (lower, upper) measure-scale bounds.

    Returns:
        (lower, upper)
    """
    psi = renyi_factor(gamma)
    from_max, from_min = psi * log(max_kernel_value), psi * log(min_kernel_value)
    return (from_min, from_max) if gamma > 1 else (from_max, from_min)


def _check_target(req: BoundRequest, target: BoundTarget) -> None:
    if req.target is not target:
        msg = f"Expected a {target} bound request, got {req.target}"
        raise ValueError(msg)


def ccri_bound_integrals(req: BoundRequest) -> tuple[float, float]:
    """Oriented (lower, upper) bounds on the copula Rényi inaccuracy.

    Returns:
        Measure-scale (lower, upper) pair
    """
    _check_target(req, BoundTarget.MCCRI)
    return orient(req.gamma, *kernel_integrals(req))


def scri_bound_integrals(req: BoundRequest) -> tuple[float, float]:
    """Oriented (lower, upper) bounds on the survival copula Rényi inaccuracy.

    Returns:
        Measure-scale (lower, upper) pair
    """
    _check_target(req, BoundTarget.MSCRI)
    return orient(req.gamma, *kernel_integrals(req))


def _xi(k: float, a: float, b: float) -> float:
    return (k * (a + b) + 4) / ((k * (a + b) + 3) * (k * a + 2) * (k * b + 2))


def _psi_star(k: float, a: float, b: float) -> float:
    return (k * k * a * b + k * (a + b)) / ((k * a + 1) * (k * b + 1) * (k * a + 2) * (k * b + 2))


def _phi_hat(k: float, a: float, b: float) -> float:
    b12 = beta_function(k * a + 1, k * b + 2)
    b22 = beta_function(k * a + 2, k * b + 2)
    return _psi_star(k, a, b) - b12 / (k * b + 2) + (b12 - b22) / (k * b + 1)


def _printed(formula: Callable[[float, float, float], float], req: BoundRequest) -> float:
    try:
        return formula(req.exponent, req.alpha, req.beta)
    except (ZeroDivisionError, ValueError):
        name = formula.__name__.strip("_")
        logger.warning("Printed closed form %s is undefined at %s", name, req.as_dict())
        return nan


def ccri_closed_forms(req: BoundRequest) -> tuple[float, float]:
    """Printed closed forms paired with the max and min kernels of the copula bound.

    Returns:
        (xi, psi_star); NaN where a printed denominator vanishes
    """
    return _printed(_xi, req), _printed(_psi_star, req)


def scri_closed_forms(req: BoundRequest) -> tuple[float, float]:
    """Printed closed forms paired with the max and min kernels of the survival bound.

    The max-kernel form is the same rational function as xi; the min-kernel form
    adds complete beta function terms.

    Returns:
        (phi, phi_hat); NaN where a printed form is undefined
    """
    return _printed(_xi, req), _printed(_phi_hat, req)


def _measure_scale(gamma: float, value: float) -> float | None:
    if not (isfinite(value) and value > 0):
        return None
    return renyi_factor(gamma) * log(value)


def _finite_or_none(value: float) -> float | None:
    return value if isfinite(value) else None


@dataclass(frozen=True, slots=True)
class BoundReport:
    """Bound integrals next to the printed closed forms.

    Attributes:
        request: Bound parameters
        max_kernel_integral: I_max
        min_kernel_integral: I_min
        numeric_lower: Lower measure-scale bound from the integrals
        numeric_upper: Upper measure-scale bound from the integrals
        lower_kernel: Kernel ("max" or "min") supplying the lower bound
        closed_form_max: Printed form paired with I_max
        closed_form_min: Printed form paired with I_min
        closed_form_lower: Printed lower bound on the measure scale, None if undefined
        closed_form_upper: Printed upper bound on the measure scale, None if undefined
    """

    request: BoundRequest
    max_kernel_integral: float
    min_kernel_integral: float
    numeric_lower: float
    numeric_upper: float
    lower_kernel: str
    closed_form_max: float
    closed_form_min: float
    closed_form_lower: float | None
    closed_form_upper: float | None

    @property
    def max_discrepancy(self) -> float:
        """|I_max - printed max-kernel form|."""
        return abs(self.max_kernel_integral - self.closed_form_max)

    @property
    def min_discrepancy(self) -> float:
        """|I_min - printed min-kernel form|."""
        return abs(self.min_kernel_integral - self.closed_form_min)

    @property
    def max_agrees(self) -> bool:
        """Whether the printed max-kernel form matches I_max."""
        return self.max_discrepancy <= BOUNDS_AGREEMENT_TOLERANCE

    @property
    def min_agrees(self) -> bool:
        """Whether the printed min-kernel form matches I_min."""
        return self.min_discrepancy <= BOUNDS_AGREEMENT_TOLERANCE

    def as_dict(self) -> dict[str, Any]:
        """Convert the report to a flat record.

        Returns:
            Dictionary representation of the report
        """
        return {
            **self.request.as_dict(),
            "max_kernel_integral": self.max_kernel_integral,
            "min_kernel_integral": self.min_kernel_integral,
            "numeric_lower": self.numeric_lower,
            "numeric_upper": self.numeric_upper,
            "lower_kernel": self.lower_kernel,
            "upper_kernel": "min" if self.lower_kernel == "max" else "max",
            "closed_form_max": _finite_or_none(self.closed_form_max),
            "closed_form_min": _finite_or_none(self.closed_form_min),
            "closed_form_lower": self.closed_form_lower,
            "closed_form_upper": self.closed_form_upper,
            "max_discrepancy": _finite_or_none(self.max_discrepancy),
            "min_discrepancy": _finite_or_none(self.min_discrepancy),
            "max_agrees": self.max_agrees,
            "min_agrees": self.min_agrees,
        }


def bound_report(req: BoundRequest) -> BoundReport:
    """Evaluate the bound integrals and compare them with the printed closed forms.

    Returns:
        Report with both sets of values and the discrepancies
    """
    i_max, i_min = kernel_integrals(req)
    lower, upper = orient(req.gamma, i_max, i_min)
    match req.target:
        case BoundTarget.MCCRI:
            printed_max, printed_min = ccri_closed_forms(req)
        case BoundTarget.MSCRI:
            printed_max, printed_min = scri_closed_forms(req)
    printed_from_max = _measure_scale(req.gamma, printed_max)
    printed_from_min = _measure_scale(req.gamma, printed_min)
    if req.gamma > 1:
        printed_lower, printed_upper, lower_kernel = printed_from_min, printed_from_max, "min"
    else:
        printed_lower, printed_upper, lower_kernel = printed_from_max, printed_from_min, "max"
    report = BoundReport(
        request=req,
        max_kernel_integral=i_max,
        min_kernel_integral=i_min,
        numeric_lower=lower,
        numeric_upper=upper,
        lower_kernel=lower_kernel,
        closed_form_max=printed_max,
        closed_form_min=printed_min,
        closed_form_lower=printed_lower,
        closed_form_upper=printed_upper,
    )
    if not report.max_agrees:
        logger.warning(
            "Printed max-kernel closed form %.10g differs from the bound integral %.10g", printed_max, i_max
        )
    if not report.min_agrees:
        logger.warning(
            "Printed min-kernel closed form %.10g differs from the bound integral %.10g", printed_min, i_min
        )
    return report
