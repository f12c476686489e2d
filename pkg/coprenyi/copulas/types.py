"""Enumerations and small records for the copula core."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import Any


class CopulaFamily(StrEnum):
    """Supported one-parameter copula families."""

    AMH = "amh"
    CLAYTON = "clayton"
    FGM = "fgm"
    FRANK = "frank"
    GUMBEL = "gumbel"
    JOE = "joe"
    PRODUCT = "product"


ARCHIMEDEAN_FAMILIES = frozenset({
    CopulaFamily.CLAYTON,
    CopulaFamily.FRANK,
    CopulaFamily.GUMBEL,
    CopulaFamily.JOE,
})
BIVARIATE_ONLY_FAMILIES = frozenset({CopulaFamily.AMH, CopulaFamily.FGM})


class DominanceMode(StrEnum):
    """Which surface a pointwise order compares (lower or upper orthant)."""

    CDF = "cdf"
    SURVIVAL = "survival"


class DominanceVerdict(StrEnum):
    """Outcome of a pointwise comparison of two copula surfaces.

    EQUIVALENT is the tie in which both orders hold; DominanceReport.a_dominates
    and DominanceReport.b_dominates are then both true.
    """

    A_DOMINATES = "a_dominates"
    B_DOMINATES = "b_dominates"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, slots=True)
class DominanceReport:
    """Result of check_pointwise_dominance.

    Attributes:
        verdict: Which surface lies above the other on the whole grid
        max_violation: Largest amount by which the reported order fails (0 when it holds)
        max_gap: Largest absolute difference between the two surfaces
        grid_per_axis: Grid resolution used
        mode: Surface that was compared
    """

    verdict: DominanceVerdict
    max_violation: float
    max_gap: float
    grid_per_axis: int
    mode: DominanceMode

    @property
    def a_dominates(self) -> bool:
        """Whether a lies above b everywhere on the grid (ties included)."""
        return self.verdict in {DominanceVerdict.A_DOMINATES, DominanceVerdict.EQUIVALENT}

    @property
    def b_dominates(self) -> bool:
        """Whether b lies above a everywhere on the grid (ties included)."""
        return self.verdict in {DominanceVerdict.B_DOMINATES, DominanceVerdict.EQUIVALENT}

    def as_dict(self) -> dict[str, Any]:
        """Convert the report to a dictionary.

        Returns:
            Dictionary representation of the report
        """
        return {
            "verdict": str(self.verdict),
            "a_dominates": self.a_dominates,
            "b_dominates": self.b_dominates,
            "max_violation": self.max_violation,
            "max_gap": self.max_gap,
            "grid_per_axis": self.grid_per_axis,
            "mode": str(self.mode),
        }
