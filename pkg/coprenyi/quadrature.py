"""Numerical integration over the unit hypercube.

Two rules are available. The tensor Gauss-Legendre rule maps the Legendre
nodes to (0, 1), takes their tensor product and doubles the nodes per axis
until two successive estimates agree to a relative tolerance. The Monte Carlo
rule averages a seeded Philox stream of uniform points and reports a standard
error. Both evaluate the integrand in fixed-size chunks and reduce the partial
sums in chunk order, so identical inputs give bit-identical results.

Gauss nodes are strictly interior, so integrands may be singular on the cube
boundary as long as they stay integrable.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from functools import cache
from math import isfinite, sqrt
from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import betaln

from coprenyi.console import log
from coprenyi.constants import (
    DEFAULT_MAX_REFINEMENTS,
    DEFAULT_MC_SAMPLES,
    DEFAULT_NODES_PER_AXIS,
    DEFAULT_REL_TOL,
    EVALUATION_CHUNK,
    MAX_TENSOR_DIMENSION,
    MAX_TENSOR_POINTS,
)
from coprenyi.rng import make_rng
from coprenyi.types import NumericalFailureError

if TYPE_CHECKING:
    from numpy.typing import NDArray

type Integrand = Callable[[NDArray[np.float64]], NDArray[np.float64]]

MIN_MC_SAMPLES = 100


class IntegrationMethod(StrEnum):
    """Integration rule."""

    TENSOR_GAUSS = "tensor"
    MONTE_CARLO = "mc"


@dataclass(frozen=True, slots=True)
class IntegrationConfig:
    """Settings for integrate().

    Attributes:
        method: Tensor Gauss-Legendre or Monte Carlo
        nodes_per_axis: Starting Gauss nodes per coordinate
        mc_samples: Number of Monte Carlo points
        seed: Seed of the Monte Carlo stream
        rel_tol: Relative change between refinements that stops the doubling
        max_refinements: Maximum number of node doublings
    """

    method: IntegrationMethod = IntegrationMethod.TENSOR_GAUSS
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS
    mc_samples: int = DEFAULT_MC_SAMPLES
    seed: int = 0
    rel_tol: float = DEFAULT_REL_TOL
    max_refinements: int = DEFAULT_MAX_REFINEMENTS

    def __post_init__(self) -> None:
        """Validate the settings.

        Raises:
            ValueError: If any setting is out of range.
        """
        object.__setattr__(self, "method", IntegrationMethod(self.method))
        if self.nodes_per_axis < 2:
            msg = f"nodes_per_axis must be at least 2, got {self.nodes_per_axis}"
            raise ValueError(msg)
        if self.mc_samples < MIN_MC_SAMPLES:
            msg = f"mc_samples must be at least {MIN_MC_SAMPLES}, got {self.mc_samples}"
            raise ValueError(msg)
        if not self.rel_tol > 0:
            msg = f"rel_tol must be positive, got {self.rel_tol}"
            raise ValueError(msg)
        if self.max_refinements < 0:
            msg = f"max_refinements must be non-negative, got {self.max_refinements}"
            raise ValueError(msg)

    def as_dict(self) -> dict[str, Any]:
        """Convert the settings to a dictionary.

        Returns:
            Dictionary representation of the settings
        """
        return {
            "method": str(self.method),
            "nodes_per_axis": self.nodes_per_axis,
            "mc_samples": self.mc_samples,
            "seed": self.seed,
            "rel_tol": self.rel_tol,
            "max_refinements": self.max_refinements,
        }


@dataclass(frozen=True, slots=True)
class IntegralEstimate:
    """Value of an integral with its error indicator.

    Attributes:
        value: Estimate of the integral
        standard_error: Monte Carlo standard error (0 for the deterministic rule)
        refinements_used: Number of node doublings performed
        nodes_per_axis: Final nodes per coordinate (None for Monte Carlo)
        evaluations: Total integrand evaluations
    """

    value: float
    standard_error: float = 0.0
    refinements_used: int = 0
    nodes_per_axis: int | None = None
    evaluations: int = 0

    def __post_init__(self) -> None:
        """Check the error indicator.

        Raises:
            ValueError: If the standard error is negative.
        """
        if self.standard_error < 0:
            msg = f"standard_error must be non-negative, got {self.standard_error}"
            raise ValueError(msg)

    def as_dict(self) -> dict[str, Any]:
        """Convert the estimate to a dictionary.

        Returns:
            Dictionary representation of the estimate
        """
        return {
            "value": self.value,
            "standard_error": self.standard_error,
            "refinements_used": self.refinements_used,
            "nodes_per_axis": self.nodes_per_axis,
            "evaluations": self.evaluations,
        }


@cache
def unit_gauss_legendre(nodes: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Gauss-Legendre nodes and weights mapped from [-1, 1] to (0, 1).

    Returns:
        Nodes and weights, each of length nodes
    """
    x, w = leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def _checked(values: NDArray[np.float64], points: NDArray[np.float64]) -> NDArray[np.float64]:
    values = np.asarray(values, dtype=np.float64)
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = points[int(np.argmax(bad))]
        msg = f"Integrand is not finite at node {tuple(float(x) for x in node)}"
        raise NumericalFailureError(msg)
    return values


def tensor_rule(f: Integrand, d: int, nodes: int) -> float:
    """Apply the nodes^d tensor Gauss-Legendre rule to f.

    Returns:
        The rule's estimate of the integral over (0, 1)^d
    """
    x, w = unit_gauss_legendre(nodes)
    shape = (nodes,) * d
    total_points = nodes**d
    total = 0.0
    for start in range(0, total_points, EVALUATION_CHUNK):
        index = np.unravel_index(np.arange(start, min(start + EVALUATION_CHUNK, total_points)), shape)
        points = np.column_stack([x[i] for i in index])
        weights = np.prod(np.column_stack([w[i] for i in index]), axis=1)
        total += float(weights @ _checked(f(points), points))
    return total


def _tensor_gauss(f: Integrand, d: int, cfg: IntegrationConfig) -> IntegralEstimate:
    if d > MAX_TENSOR_DIMENSION:
        msg = f"Tensor Gauss rule is limited to dimension {MAX_TENSOR_DIMENSION}; use Monte Carlo for d = {d}"
        raise ValueError(msg)
    nodes = cfg.nodes_per_axis
    value = tensor_rule(f, d, nodes)
    evaluations = nodes**d
    refinements = 0
    converged = cfg.max_refinements == 0
    while refinements < cfg.max_refinements:
        if (2 * nodes) ** d > MAX_TENSOR_POINTS:
            log.warning("Stopping refinement at %d nodes per axis (point cap reached)", nodes)
            break
        nodes *= 2
        refined = tensor_rule(f, d, nodes)
        evaluations += nodes**d
        refinements += 1
        converged = abs(refined - value) <= cfg.rel_tol * abs(refined)
        log.debug("Refinement %d: %d nodes per axis, estimate %.15g", refinements, nodes, refined)
        value = refined
        if converged:
            break
    if not converged:
        log.debug("Tensor rule did not reach rel_tol %g after %d refinements", cfg.rel_tol, refinements)
    return IntegralEstimate(
        value=value, refinements_used=refinements, nodes_per_axis=nodes, evaluations=evaluations
    )


def _monte_carlo(f: Integrand, d: int, cfg: IntegrationConfig) -> IntegralEstimate:
    rng = make_rng(cfg.seed)
    total = 0.0
    total_squares = 0.0
    for start in range(0, cfg.mc_samples, EVALUATION_CHUNK):
        points = rng.random((min(EVALUATION_CHUNK, cfg.mc_samples - start), d))
        values = _checked(f(points), points)
        total += float(values.sum())
        total_squares += float(values @ values)
    n = cfg.mc_samples
    mean = total / n
    variance = max(total_squares - n * mean**2, 0.0) / (n - 1)
    return IntegralEstimate(value=mean, standard_error=sqrt(variance / n), evaluations=n)


def integrate(f: Integrand, d: int, cfg: IntegrationConfig | None = None) -> IntegralEstimate:
    """Integrate f over the unit hypercube (0, 1)^d.

    Args:
        f: Vectorised integrand taking an (m, d) array and returning m values
        d: Dimension
        cfg: Integration settings (defaults when omitted)

    Returns:
        Integral estimate

    Raises:
        ValueError: If d < 1, or d > 4 with the tensor rule.
        NumericalFailureError: If f is not finite at some evaluation point.
    """
    cfg = cfg or IntegrationConfig()
    if d < 1:
        msg = f"Dimension must be at least 1, got {d}"
        raise ValueError(msg)
    match cfg.method:
        case IntegrationMethod.TENSOR_GAUSS:
            return _tensor_gauss(f, d, cfg)
        case IntegrationMethod.MONTE_CARLO:
            return _monte_carlo(f, d, cfg)


def beta_function(a: float, b: float) -> float:
    """Complete beta function B(a, b) through log-gamma.

    Returns:
        B(a, b)

    Raises:
        ValueError: If either argument is not positive.
    """
    if not (isfinite(a) and isfinite(b)) or a <= 0 or b <= 0:
        msg = f"Beta function arguments must be positive, got ({a}, {b})"
        raise ValueError(msg)
    return float(np.exp(betaln(a, b)))
