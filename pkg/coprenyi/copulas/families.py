"""Family formulas: Archimedean generators, copula CDFs and densities.

All evaluation functions take points as an array of shape (m, d) or a single
point of length d, and return an array of m values or a float respectively.
Archimedean copulas are evaluated through their generator phi and its inverse
psi, C(u) = psi(sum phi(u_i)); densities use analytic derivatives of psi,
c(u) = psi^(d)(sum phi(u_i)) * prod phi'(u_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import expm1, prod
from typing import TYPE_CHECKING

import numpy as np

from coprenyi.constants import CLAMP_EPSILON

from .types import CopulaFamily

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from .model import CopulaModel

MAX_GENERATOR_ORDER = 3


def as_points(u: ArrayLike, dimension: int) -> tuple[NDArray[np.float64], bool]:
    """Coerce a point or an array of points to shape (m, dimension).

    Args:
        u: One point of length dimension, or an (m, dimension) array
        dimension: Expected number of coordinates

    Returns:
        The (m, dimension) array and whether a single point was given

    Raises:
        ValueError: On a dimension mismatch or coordinates outside [0, 1].
    """
    points = np.asarray(u, dtype=np.float64)
    single = points.ndim == 1
    if single:
        points = points.reshape(1, -1)
    if points.ndim != 2 or points.shape[1] != dimension:
        msg = f"Expected points with {dimension} coordinates, got shape {np.shape(u)}"
        raise ValueError(msg)
    if np.any(np.isnan(points)) or np.any(points < 0.0) or np.any(points > 1.0):
        msg = "Copula arguments must lie in [0, 1]"
        raise ValueError(msg)
    return points, single


def unwrap(values: NDArray[np.float64], single: bool) -> NDArray[np.float64] | float:
    """Return a float for single-point calls and the array otherwise."""
    return float(values[0]) if single else values


@dataclass(frozen=True, slots=True)
class ArchimedeanGenerator:
    """Base for Archimedean generators; subclasses supply the formulas."""

    theta: float

    def phi(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        """Generator phi: [0, 1] -> [0, inf]."""
        raise NotImplementedError

    def phi_prime(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        """First derivative of phi."""
        raise NotImplementedError

    def psi(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        """Inverse generator psi = phi^-1."""
        raise NotImplementedError

    def psi_derivative(self, s: NDArray[np.float64], order: int) -> NDArray[np.float64]:
        """Derivative of psi of the given order (1 to 3; Clayton accepts any)."""
        raise NotImplementedError

    def _check_order(self, order: int) -> None:
        if not 1 <= order <= MAX_GENERATOR_ORDER:
            msg = f"Analytic generator derivatives are available up to order 3, got {order}"
            raise ValueError(msg)


@dataclass(frozen=True, slots=True)
class ClaytonGenerator(ArchimedeanGenerator):
    """phi(t) = (t^-theta - 1) / theta."""

    def phi(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return (t ** (-self.theta) - 1.0) / self.theta

    def phi_prime(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return -(t ** (-self.theta - 1.0))

    def psi(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        return (1.0 + self.theta * s) ** (-1.0 / self.theta)

    def psi_derivative(self, s: NDArray[np.float64], order: int) -> NDArray[np.float64]:
        if order < 1:
            msg = f"Derivative order must be positive, got {order}"
            raise ValueError(msg)
        factor = prod(1.0 + j * self.theta for j in range(order))
        return (-1.0) ** order * factor * (1.0 + self.theta * s) ** (-1.0 / self.theta - order)


@dataclass(frozen=True, slots=True)
class GumbelGenerator(ArchimedeanGenerator):
    """phi(t) = (-log t)^theta."""

    def phi(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return (-np.log(t)) ** self.theta

    def phi_prime(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return -self.theta * (-np.log(t)) ** (self.theta - 1.0) / t

    def psi(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.exp(-(s ** (1.0 / self.theta)))

    def psi_derivative(self, s: NDArray[np.float64], order: int) -> NDArray[np.float64]:
        self._check_order(order)
        a = 1.0 / self.theta
        e = np.exp(-(s**a))
        if order == 1:
            return -a * s ** (a - 1.0) * e
        if order == 2:
            return e * (a**2 * s ** (2.0 * a - 2.0) - a * (a - 1.0) * s ** (a - 2.0))
        return e * (
            -(a**3) * s ** (3.0 * a - 3.0)
            + 3.0 * a**2 * (a - 1.0) * s ** (2.0 * a - 3.0)
            - a * (a - 1.0) * (a - 2.0) * s ** (a - 3.0)
        )


@dataclass(frozen=True, slots=True)
class FrankGenerator(ArchimedeanGenerator):
    """phi(t) = -log((exp(-theta t) - 1) / (exp(-theta) - 1))."""

    def phi(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return -np.log(np.expm1(-self.theta * t) / expm1(-self.theta))

    def phi_prime(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return -self.theta / np.expm1(self.theta * t)

    def psi(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        return -np.log1p(np.exp(-s) * expm1(-self.theta)) / self.theta

    def psi_derivative(self, s: NDArray[np.float64], order: int) -> NDArray[np.float64]:
        self._check_order(order)
        x = -expm1(-self.theta) * np.exp(-s)
        if order == 1:
            return -x / (self.theta * (1.0 - x))
        if order == 2:
            return x / (self.theta * (1.0 - x) ** 2)
        return -x * (1.0 + x) / (self.theta * (1.0 - x) ** 3)


@dataclass(frozen=True, slots=True)
class JoeGenerator(ArchimedeanGenerator):
    """phi(t) = -log(1 - (1 - t)^theta)."""

    def phi(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return -np.log1p(-((1.0 - t) ** self.theta))

    def phi_prime(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        tail = (1.0 - t) ** self.theta
        return -self.theta * (1.0 - t) ** (self.theta - 1.0) / (1.0 - tail)

    def psi(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        return -np.expm1(np.log1p(-np.exp(-s)) / self.theta)

    def psi_derivative(self, s: NDArray[np.float64], order: int) -> NDArray[np.float64]:
        self._check_order(order)
        a = 1.0 / self.theta
        w = -np.expm1(-s)
        if order == 1:
            return -a * (w ** (a - 1.0) - w**a)
        if order == 2:
            return -a * ((a - 1.0) * w ** (a - 2.0) - (2.0 * a - 1.0) * w ** (a - 1.0) + a * w**a)
        h_prime = (
            (a - 1.0) * (a - 2.0) * w ** (a - 3.0)
            - (2.0 * a - 1.0) * (a - 1.0) * w ** (a - 2.0)
            + a**2 * w ** (a - 1.0)
        )
        return -a * (1.0 - w) * h_prime


_GENERATORS: dict[CopulaFamily, type[ArchimedeanGenerator]] = {
    CopulaFamily.CLAYTON: ClaytonGenerator,
    CopulaFamily.FRANK: FrankGenerator,
    CopulaFamily.GUMBEL: GumbelGenerator,
    CopulaFamily.JOE: JoeGenerator,
}


def generator_for(model: CopulaModel) -> ArchimedeanGenerator:
    """Generator of an Archimedean model.

    Returns:
        The family's generator at the model parameter

    Raises:
        ValueError: If the family has no generator representation here.
    """
    try:
        return _GENERATORS[model.family](model.theta)
    except KeyError:
        msg = f"{model.family} copula has no Archimedean generator"
        raise ValueError(msg) from None


def cdf_points(model: CopulaModel, points: NDArray[np.float64]) -> NDArray[np.float64]:
    """C(u) for an already validated (m, d) array of points."""
    if model.is_independent:
        return np.prod(points, axis=1)
    u, v = points[:, 0], points[:, -1]
    match model.family:
        case CopulaFamily.FGM:
            return u * v * (1.0 + model.theta * (1.0 - u) * (1.0 - v))
        case CopulaFamily.AMH:
            return u * v / (1.0 - model.theta * (1.0 - u) * (1.0 - v))
    generator = generator_for(model)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        values = generator.psi(np.sum(generator.phi(points), axis=1))
    values = np.where(np.any(points == 0.0, axis=1), 0.0, values)
    return np.clip(values, 0.0, 1.0)


def cdf(model: CopulaModel, u: ArrayLike) -> NDArray[np.float64] | float:
    """Copula distribution function C(u).

    Args:
        model: Copula model
        u: A point or (m, d) array of points in [0, 1]^d

    Returns:
        C at each point
    """
    points, single = as_points(u, model.dimension)
    return unwrap(cdf_points(model, points), single)


def density_points(model: CopulaModel, points: NDArray[np.float64]) -> NDArray[np.float64]:
    """c(u) for an (m, d) array, clamping coordinates into [eps, 1 - eps]."""
    if model.is_independent:
        return np.ones(points.shape[0])
    points = np.clip(points, CLAMP_EPSILON, 1.0 - CLAMP_EPSILON)
    u, v = points[:, 0], points[:, -1]
    match model.family:
        case CopulaFamily.FGM:
            return 1.0 + model.theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * v)
        case CopulaFamily.AMH:
            alpha = model.theta
            numerator = 1.0 + alpha * ((1.0 + u) * (1.0 + v) - 3.0) + alpha**2 * (1.0 - u) * (1.0 - v)
            return numerator / (1.0 - alpha * (1.0 - u) * (1.0 - v)) ** 3
    if model.dimension > MAX_GENERATOR_ORDER and model.family is not CopulaFamily.CLAYTON:
        msg = f"Analytic {model.family} density is available up to dimension 3, got {model.dimension}"
        raise ValueError(msg)
    generator = generator_for(model)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        s = np.sum(generator.phi(points), axis=1)
        return generator.psi_derivative(s, model.dimension) * np.prod(generator.phi_prime(points), axis=1)


def density(model: CopulaModel, u: ArrayLike) -> NDArray[np.float64] | float:
    """Copula density, the mixed partial derivative of C.

    Points on the boundary are clamped to [1e-12, 1 - 1e-12] because several
    densities are unbounded at the corners.

    Args:
        model: Copula model
        u: A point or (m, d) array of points in [0, 1]^d

    Returns:
        c at each point
    """
    points, single = as_points(u, model.dimension)
    return unwrap(density_points(model, points), single)
