"""Parametric copulas: evaluation, densities, transforms, sampling and dependence.

The families are the independence (product) copula, the bivariate FGM and
Ali-Mikhail-Haq copulas and the Archimedean Clayton, Frank, Gumbel-Hougaard and
Joe copulas in any dimension.
"""

from __future__ import annotations

from .dependence import kendall_tau
from .families import as_points, cdf, density, generator_for
from .model import CopulaModel
from .sampling import sample
from .transforms import (
    check_pointwise_dominance,
    co_copula,
    dual_copula,
    grid,
    survival_copula,
)
from .types import (
    ARCHIMEDEAN_FAMILIES,
    BIVARIATE_ONLY_FAMILIES,
    CopulaFamily,
    DominanceMode,
    DominanceReport,
    DominanceVerdict,
)

__all__ = [
    "ARCHIMEDEAN_FAMILIES",
    "BIVARIATE_ONLY_FAMILIES",
    "CopulaFamily",
    "CopulaModel",
    "DominanceMode",
    "DominanceReport",
    "DominanceVerdict",
    "as_points",
    "cdf",
    "check_pointwise_dominance",
    "co_copula",
    "density",
    "dual_copula",
    "generator_for",
    "grid",
    "kendall_tau",
    "sample",
    "survival_copula",
]
