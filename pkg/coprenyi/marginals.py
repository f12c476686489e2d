"""Marginal models and the coordinate distortion maps used by the measures.

A distortion map sends a copula coordinate of the truth marginal to the
matching coordinate of the reference marginal: u -> G(F^-1(u)) on the CDF
scale and u -> Gbar(Fbar^-1(u)) on the survival scale. Exponential and
power-of-CDF (PRHR) pairs have closed forms; every other pair is composed
numerically from the two marginals.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from math import isfinite
from typing import TYPE_CHECKING, Any

import numpy as np

from coprenyi.constants import DISTORTION_GRID_POINTS

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

MAP_TOLERANCE = 1e-12


class DistortionScale(StrEnum):
    """Whether a distortion acts on CDF or survival coordinates."""

    CDF = "cdf"
    SURVIVAL = "survival"


@dataclass(frozen=True, slots=True)
class Uniform01:
    """Uniform distribution on (0, 1)."""

    def cdf(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.clip(x, 0.0, 1.0)

    def quantile(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(p, dtype=np.float64)


@dataclass(frozen=True, slots=True)
class Exponential:
    """Exponential distribution with the given rate."""

    rate: float = 1.0

    def __post_init__(self) -> None:
        """Check the rate.

        Raises:
            ValueError: If the rate is not positive.
        """
        if not (isfinite(self.rate) and self.rate > 0):
            msg = f"Exponential rate must be positive, got {self.rate}"
            raise ValueError(msg)

    def cdf(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return -np.expm1(-self.rate * np.maximum(x, 0.0))

    def quantile(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        with np.errstate(divide="ignore"):
            return -np.log1p(-np.asarray(p, dtype=np.float64)) / self.rate


@dataclass(frozen=True, slots=True)
class PRHRPower:
    """Proportional reversed hazard model: CDF equal to base CDF ** exponent."""

    exponent: float
    base: MarginalModel = field(default_factory=Uniform01)

    def __post_init__(self) -> None:
        """Check the exponent.

        Raises:
            ValueError: If the exponent is not positive.
        """
        if not (isfinite(self.exponent) and self.exponent > 0):
            msg = f"PRHR exponent must be positive, got {self.exponent}"
            raise ValueError(msg)

    def cdf(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.base.cdf(x) ** self.exponent

    def quantile(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.base.quantile(np.asarray(p, dtype=np.float64) ** (1.0 / self.exponent))


@dataclass(frozen=True, slots=True)
class Empirical:
    """Step CDF of a finite sample; the quantile is the left-continuous inverse."""

    sample: tuple[float, ...]

    def __post_init__(self) -> None:
        """Sort and check the sample.

        Raises:
            ValueError: If the sample is empty or holds non-finite values.
        """
        values = tuple(sorted(float(x) for x in self.sample))
        if not values or not all(isfinite(x) for x in values):
            msg = "Empirical sample must be non-empty and finite"
            raise ValueError(msg)
        object.__setattr__(self, "sample", values)

    def cdf(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        data = np.asarray(self.sample)
        return np.searchsorted(data, x, side="right") / data.size

    def quantile(self, p: NDArray[np.float64]) -> NDArray[np.float64]:
        data = np.asarray(self.sample)
        index = np.clip(np.ceil(np.asarray(p, dtype=np.float64) * data.size) - 1, 0, data.size - 1)
        return data[index.astype(np.int64)]


type MarginalModel = Uniform01 | Exponential | PRHRPower | Empirical


def survival(marginal: MarginalModel, x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Survival function 1 - F(x)."""
    return 1.0 - marginal.cdf(x)


def survival_quantile(marginal: MarginalModel, p: NDArray[np.float64]) -> NDArray[np.float64]:
    """Inverse of the survival function, Fbar^-1(p) = F^-1(1 - p)."""
    return marginal.quantile(1.0 - np.asarray(p, dtype=np.float64))


@dataclass(frozen=True, slots=True)
class IdentityMap:
    """u -> u."""

    def __call__(self, u: NDArray[np.float64]) -> NDArray[np.float64]:
        return u


@dataclass(frozen=True, slots=True)
class PowerMap:
    """u -> u ** exponent."""

    exponent: float

    def __call__(self, u: NDArray[np.float64]) -> NDArray[np.float64]:
        return u**self.exponent


@dataclass(frozen=True, slots=True)
class ComplementPowerMap:
    """u -> 1 - (1 - u) ** exponent."""

    exponent: float

    def __call__(self, u: NDArray[np.float64]) -> NDArray[np.float64]:
        with np.errstate(divide="ignore"):
            return -np.expm1(self.exponent * np.log1p(-u))


@dataclass(frozen=True, slots=True)
class ComposedMap:
    """u -> G(F^-1(u)) or Gbar(Fbar^-1(u)) by direct composition.

    Pairs involving an empirical step CDF are pinned to 0 and 1 at the endpoints.
    """

    truth: MarginalModel
    reference: MarginalModel
    scale: DistortionScale

    def __call__(self, u: NDArray[np.float64]) -> NDArray[np.float64]:
        u = np.asarray(u, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.scale is DistortionScale.CDF:
                mapped = self.reference.cdf(self.truth.quantile(u))
            else:
                mapped = survival(self.reference, survival_quantile(self.truth, u))
        if not isinstance(self.truth, Empirical) and not isinstance(self.reference, Empirical):
            return mapped
        mapped = np.where(u <= 0.0, 0.0, mapped)
        return np.where(u >= 1.0, 1.0, mapped)


type DistortionMap = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True, slots=True)
class DistortionProfile:
    """One monotone map of [0, 1] onto itself per coordinate.

    Attributes:
        scale: CDF or survival scale
        maps: Per-coordinate maps
    """

    scale: DistortionScale
    maps: tuple[DistortionMap, ...]

    def __post_init__(self) -> None:
        """Check every map fixes 0 and 1 and is nondecreasing on a 1001-point grid.

        Raises:
            ValueError: If the profile is empty or a map fails the check.
        """
        object.__setattr__(self, "scale", DistortionScale(self.scale))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            msg = "A distortion profile needs at least one coordinate map"
            raise ValueError(msg)
        grid = np.linspace(0.0, 1.0, DISTORTION_GRID_POINTS)
        for i, distortion in enumerate(self.maps):
            values = np.asarray(distortion(grid), dtype=np.float64)
            if not np.all(np.isfinite(values)):
                msg = f"Distortion map {i} is not finite on [0, 1]"
                raise ValueError(msg)
            if abs(values[0]) > MAP_TOLERANCE or abs(values[-1] - 1.0) > MAP_TOLERANCE:
                ends = f"{values[0]:g}, {values[-1]:g}"
                msg = f"Distortion map {i} must fix 0 and 1 (got {ends}); incomposable pair"
                raise ValueError(msg)
            if np.any(np.diff(values) < -MAP_TOLERANCE):
                msg = f"Distortion map {i} is not nondecreasing"
                raise ValueError(msg)

    @property
    def dimension(self) -> int:
        """Number of coordinates."""
        return len(self.maps)

    @property
    def is_identity(self) -> bool:
        """Whether every map is the identity."""
        return all(isinstance(m, IdentityMap) for m in self.maps)

    def apply(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Apply the maps column by column to an (m, d) array.

        Returns:
            Distorted points, clipped to [0, 1]
        """
        if self.is_identity:
            return points
        columns = [distortion(points[:, i]) for i, distortion in enumerate(self.maps)]
        return np.clip(np.column_stack(columns), 0.0, 1.0)

    def as_dict(self) -> dict[str, Any]:
        """Convert the profile to a dictionary.

        Returns:
            Dictionary with the scale and a readable form of each map
        """
        return {"scale": str(self.scale), "maps": [repr(m) for m in self.maps]}

    @classmethod
    def identity(cls, dimension: int, scale: DistortionScale = DistortionScale.CDF) -> DistortionProfile:
        """Identity maps on every coordinate.

        Returns:
            Identity profile
        """
        return cls(scale, (IdentityMap(),) * dimension)

    @classmethod
    def power(
        cls, exponents: Sequence[float], scale: DistortionScale = DistortionScale.CDF
    ) -> DistortionProfile:
        """Maps u -> u ** exponent_i.

        Returns:
            Power profile

        Raises:
            ValueError: If an exponent is not positive.
        """
        if any(not (isfinite(a) and a > 0) for a in exponents):
            msg = f"Power exponents must be positive, got {list(exponents)}"
            raise ValueError(msg)
        return cls(scale, tuple(IdentityMap() if a == 1 else PowerMap(float(a)) for a in exponents))


def _closed_form(
    truth: MarginalModel, reference: MarginalModel, scale: DistortionScale
) -> DistortionMap | None:
    """Closed-form map for the exponential and PRHR pairs, None otherwise."""
    if truth == reference:
        return IdentityMap()
    cdf_scale = scale is DistortionScale.CDF
    match truth, reference:
        case Exponential(rate=r_truth), Exponential(rate=r_reference):
            exponent = r_reference / r_truth
            return ComplementPowerMap(exponent) if cdf_scale else PowerMap(exponent)
        case PRHRPower(exponent=a, base=base_t), PRHRPower(exponent=b, base=base_r) if base_t == base_r:
            exponent = b / a
        case _, PRHRPower(exponent=b, base=base) if base == truth:
            exponent = b
        case PRHRPower(exponent=a, base=base), _ if base == reference:
            exponent = 1.0 / a
        case _:
            return None
    return PowerMap(exponent) if cdf_scale else ComplementPowerMap(exponent)


def build_distortion(
    truth: Sequence[MarginalModel],
    reference: Sequence[MarginalModel],
    scale: DistortionScale = DistortionScale.CDF,
) -> DistortionProfile:
    """Distortion profile carrying the truth marginals onto the reference marginals.

    Args:
        truth: Marginals of the truth vector
        reference: Marginals of the reference vector
        scale: CDF scale (G(F^-1(u))) or survival scale (Gbar(Fbar^-1(u)))

    Returns:
        Validated distortion profile

    Raises:
        ValueError: If the lists differ in length or a pair does not compose to a map of [0, 1] onto itself.
    """
    if len(truth) != len(reference):
        msg = f"Need one reference marginal per truth marginal, got {len(truth)} and {len(reference)}"
        raise ValueError(msg)
    scale = DistortionScale(scale)
    maps = tuple(
        _closed_form(t, r, scale) or ComposedMap(t, r, scale) for t, r in zip(truth, reference, strict=True)
    )
    return DistortionProfile(scale, maps)


def empirical_cdf(sample: ArrayLike, x: ArrayLike) -> NDArray[np.float64] | float:
    """Rank-based empirical CDF rescaled by n / (n + 1).

    Returns #{s <= x} / (n + 1), clamped to [1 / (n + 1), n / (n + 1)] so the
    result always lies strictly inside (0, 1).

    Args:
        sample: Sorted sample (sorted here if it is not)
        x: Evaluation point or points

    Returns:
        Value or array of values

    Raises:
        ValueError: If the sample is empty.
    """
    data = np.sort(np.asarray(sample, dtype=np.float64).ravel())
    if data.size == 0:
        msg = "Empirical CDF needs a non-empty sample"
        raise ValueError(msg)
    n = data.size
    ranks = np.searchsorted(data, np.asarray(x, dtype=np.float64), side="right")
    values = np.clip(ranks, 1, n) / (n + 1)
    return float(values) if np.ndim(values) == 0 else values


def exponential_distortion(
    rates: Sequence[float], scale: DistortionScale = DistortionScale.CDF
) -> DistortionProfile:
    """Standard exponential truth against Exponential(rate_i) references.

    Returns:
        Profile with maps 1 - (1 - u)^rate (CDF) or u^rate (survival)
    """
    return build_distortion([Exponential(1.0)] * len(rates), [Exponential(r) for r in rates], scale)


def prhr_distortion(
    exponents: Sequence[float], scale: DistortionScale = DistortionScale.CDF
) -> DistortionProfile:
    """Base marginal truth against PRHR references G = F^exponent_i.

    Returns:
        Profile with maps u^a (CDF) or 1 - (1 - u)^a (survival)
    """
    return build_distortion([Uniform01()] * len(exponents), [PRHRPower(a) for a in exponents], scale)

