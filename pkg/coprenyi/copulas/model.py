"""The CopulaModel value type: a family, a dimension and a parameter."""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import isfinite
from typing import Any

from .types import BIVARIATE_ONLY_FAMILIES, CopulaFamily


@dataclass(frozen=True, slots=True)
class CopulaModel:
    """A parametric copula.

    Attributes:
        family: Copula family
        dimension: Number of coordinates (at least 2)
        parameter: Family parameter; None for the product copula
    """

    family: CopulaFamily
    dimension: int = 2
    parameter: float | None = None

    def __post_init__(self) -> None:
        """Validate the family, dimension and admissible parameter range.

        Raises:
            ValueError: If the dimension or parameter violates the family's constraints.
        """
        object.__setattr__(self, "family", CopulaFamily(self.family))
        if isinstance(self.dimension, bool) or int(self.dimension) != self.dimension or self.dimension < 2:
            msg = f"Copula dimension must be an integer >= 2, got {self.dimension}"
            raise ValueError(msg)
        object.__setattr__(self, "dimension", int(self.dimension))
        if self.family in BIVARIATE_ONLY_FAMILIES and self.dimension != 2:
            msg = f"{self.family} copula is only supported in dimension 2, got {self.dimension}"
            raise ValueError(msg)
        if self.family is CopulaFamily.PRODUCT:
            if self.parameter is not None:
                msg = f"product copula takes no parameter, got {self.parameter}"
                raise ValueError(msg)
            return
        if self.parameter is None or not isfinite(self.parameter):
            msg = f"{self.family} copula needs a finite parameter, got {self.parameter}"
            raise ValueError(msg)
        object.__setattr__(self, "parameter", float(self.parameter))
        _check_range(self.family, self.parameter, self.dimension)

    @property
    def theta(self) -> float:
        """Parameter as a float (product copula reports 0)."""
        return 0.0 if self.parameter is None else self.parameter

    @property
    def is_independent(self) -> bool:
        """Whether the model reduces to the product copula at its parameter."""
        match self.family:
            case CopulaFamily.PRODUCT:
                return True
            case CopulaFamily.FGM | CopulaFamily.AMH:
                return self.parameter == 0.0
            case CopulaFamily.GUMBEL | CopulaFamily.JOE:
                return self.parameter == 1.0
            case _:
                return False

    @property
    def label(self) -> str:
        """Compact family:theta:dim text, the same form parse() accepts."""
        theta = "" if self.parameter is None else f"{self.parameter:g}"
        return f"{self.family}:{theta}:{self.dimension}"

    def with_parameter(self, parameter: float | None) -> CopulaModel:
        """Copy of this model with a different parameter.

        Returns:
            New validated model
        """
        return replace(self, parameter=parameter)

    def as_dict(self) -> dict[str, Any]:
        """Convert the model to a dictionary.

        Returns:
            Dictionary representation of the model
        """
        return {"family": str(self.family), "dimension": self.dimension, "parameter": self.parameter}

    @classmethod
    def parse(cls, text: str, default_dimension: int = 2) -> CopulaModel:
        """Build a model from ``family:theta:dim`` text.

        The theta field may be empty or ``-`` for the product copula, and the
        dimension may be omitted.

        Args:
            text: Model description such as ``gumbel:2:3`` or ``product::2``
            default_dimension: Dimension used when the text has none

        Returns:
            Validated model

        Raises:
            ValueError: If the text is malformed or the model is invalid.
        """
        parts = text.strip().split(":")
        if not 1 <= len(parts) <= 3 or not parts[0]:
            msg = f"Copula must be written family:theta:dim, got {text!r}"
            raise ValueError(msg)
        family = parts[0].lower()
        if family not in CopulaFamily:
            msg = f"Unknown copula family {parts[0]!r}"
            raise ValueError(msg)
        theta_text = parts[1] if len(parts) > 1 else ""
        dim_text = parts[2] if len(parts) > 2 else ""
        try:
            parameter = None if theta_text in {"", "-"} else float(theta_text)
            dimension = int(dim_text) if dim_text else default_dimension
        except ValueError as e:
            msg = f"Copula must be written family:theta:dim, got {text!r}"
            raise ValueError(msg) from e
        return cls(CopulaFamily(family), dimension, parameter)


def _check_range(family: CopulaFamily, theta: float, dimension: int) -> None:
    """Raise ValueError naming the violated bound when theta is inadmissible."""
    bound: str | None = None
    match family:
        case CopulaFamily.FGM | CopulaFamily.AMH:
            if abs(theta) > 1:
                bound = "|theta| <= 1"
        case CopulaFamily.JOE | CopulaFamily.GUMBEL:
            if theta < 1:
                bound = "theta >= 1"
        case CopulaFamily.CLAYTON:
            if theta <= 0:
                bound = "theta > 0"
        case CopulaFamily.FRANK:
            if dimension >= 3 and theta <= 0:
                bound = "theta > 0 in dimension >= 3"
            elif theta == 0:
                bound = "theta != 0"
    if bound is not None:
        msg = f"{family} parameter must satisfy {bound}, got {theta:g}"
        raise ValueError(msg)
