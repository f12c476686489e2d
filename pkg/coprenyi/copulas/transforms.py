"""Survival, co- and dual copulas, and pointwise orthant-order checks."""

from __future__ import annotations

from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np

from coprenyi.console import log
from coprenyi.constants import DOMINANCE_TOLERANCE

from .families import as_points, cdf_points, unwrap
from .types import DominanceMode, DominanceReport, DominanceVerdict

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from .model import CopulaModel


def survival_points(model: CopulaModel, points: NDArray[np.float64]) -> NDArray[np.float64]:
    """Survival copula by inclusion-exclusion over the margins of C.

    Computes P(U_1 > 1 - u_1, ..., U_n > 1 - u_n) as the signed sum over
    subsets S of C evaluated at 1 - u on S and 1 elsewhere. In two dimensions
    this is u + v - 1 + C(1 - u, 1 - v).
    """
    dimension = model.dimension
    complement = 1.0 - points
    total = np.ones(points.shape[0])
    for size in range(1, dimension + 1):
        sign = -1.0 if size % 2 else 1.0
        for subset in combinations(range(dimension), size):
            margin = np.ones_like(points)
            columns = list(subset)
            margin[:, columns] = complement[:, columns]
            total += sign * cdf_points(model, margin)
    return np.clip(total, 0.0, 1.0)


def co_points(model: CopulaModel, points: NDArray[np.float64]) -> NDArray[np.float64]:
    """C*(u) = 1 - C(1 - u)."""
    return 1.0 - cdf_points(model, 1.0 - points)


def dual_points(model: CopulaModel, points: NDArray[np.float64]) -> NDArray[np.float64]:
    """C~(u) = 1 - C^(1 - u), which is u + v - C(u, v) in two dimensions."""
    return 1.0 - survival_points(model, 1.0 - points)


def survival_copula(model: CopulaModel, u: ArrayLike) -> NDArray[np.float64] | float:
    """Survival copula of the model at u.

    Returns:
        Values of the survival copula
    """
    points, single = as_points(u, model.dimension)
    return unwrap(survival_points(model, points), single)


def co_copula(model: CopulaModel, u: ArrayLike) -> NDArray[np.float64] | float:
    """Co-copula of the model at u.

    Returns:
        Values of 1 - C(1 - u)
    """
    points, single = as_points(u, model.dimension)
    return unwrap(co_points(model, points), single)


def dual_copula(model: CopulaModel, u: ArrayLike) -> NDArray[np.float64] | float:
    """Dual copula of the model at u.

    Returns:
        Values of 1 - C^(1 - u)
    """
    points, single = as_points(u, model.dimension)
    return unwrap(dual_points(model, points), single)


def grid(grid_per_axis: int, dimension: int) -> NDArray[np.float64]:
    """Uniform grid on [0, 1]^d including the faces, as an (m^d, d) array."""
    axis = np.linspace(0.0, 1.0, grid_per_axis)
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def check_pointwise_dominance(
    a: CopulaModel,
    b: CopulaModel,
    grid_per_axis: int = 101,
    mode: DominanceMode = DominanceMode.CDF,
) -> DominanceReport:
    """Compare two copula surfaces pointwise on a uniform grid.

    The cdf mode decides the lower orthant order and the survival mode the
    upper orthant order. Differences within 1e-12 count as ties.

    Args:
        a: First copula
        b: Second copula
        grid_per_axis: Grid points per coordinate (at least 2)
        mode: Surface to compare

    Returns:
        Verdict with the largest violation of the reported order

    Raises:
        ValueError: If the dimensions differ or the grid is too coarse.
    """
    if a.dimension != b.dimension:
        msg = f"Cannot compare copulas of dimension {a.dimension} and {b.dimension}"
        raise ValueError(msg)
    if grid_per_axis < 2:
        msg = f"grid_per_axis must be at least 2, got {grid_per_axis}"
        raise ValueError(msg)
    mode = DominanceMode(mode)
    points = grid(grid_per_axis, a.dimension)
    surface = cdf_points if mode is DominanceMode.CDF else survival_points
    difference = surface(a, points) - surface(b, points)
    a_shortfall = max(0.0, -float(difference.min()))
    b_shortfall = max(0.0, float(difference.max()))
    a_holds = a_shortfall <= DOMINANCE_TOLERANCE
    b_holds = b_shortfall <= DOMINANCE_TOLERANCE
    if a_holds and b_holds:
        verdict, violation = DominanceVerdict.EQUIVALENT, max(a_shortfall, b_shortfall)
    elif a_holds:
        verdict, violation = DominanceVerdict.A_DOMINATES, a_shortfall
    elif b_holds:
        verdict, violation = DominanceVerdict.B_DOMINATES, b_shortfall
    else:
        verdict, violation = DominanceVerdict.INCOMPARABLE, min(a_shortfall, b_shortfall)
    log.debug("Dominance %s vs %s (%s): %s", a.label, b.label, mode, verdict)
    return DominanceReport(
        verdict=verdict,
        max_violation=violation,
        max_gap=float(np.abs(difference).max()),
        grid_per_axis=grid_per_axis,
        mode=mode,
    )
