"""Population Kendall's tau of the copula families."""

from __future__ import annotations

from math import expm1, log1p
from typing import TYPE_CHECKING

from scipy.integrate import quad

from .families import generator_for
from .types import CopulaFamily

if TYPE_CHECKING:
    from .model import CopulaModel

AMH_SMALL = 1e-6


def kendall_tau(model: CopulaModel) -> float:
    """Kendall's tau implied by a copula model.

    Closed forms are used for the product, FGM, AMH, Clayton and Gumbel
    families; Frank goes through the Debye integral and Joe through the
    Archimedean identity tau = 1 + 4 * integral of phi / phi' over (0, 1).

    Returns:
        Population Kendall's tau
    """
    if model.is_independent:
        return 0.0
    theta = model.theta
    match model.family:
        case CopulaFamily.FGM:
            return 2.0 * theta / 9.0
        case CopulaFamily.AMH:
            return _amh_tau(theta)
        case CopulaFamily.CLAYTON:
            return theta / (theta + 2.0)
        case CopulaFamily.GUMBEL:
            return 1.0 - 1.0 / theta
        case CopulaFamily.FRANK:
            debye, _ = quad(
                lambda t: t / expm1(t) if t != 0.0 else 1.0, 0.0, theta, epsabs=1e-13, epsrel=1e-12
            )
            return 1.0 - 4.0 / theta + 4.0 * debye / theta**2
    generator = generator_for(model)

    def ratio(t: float) -> float:
        if t in {0.0, 1.0}:
            return 0.0
        return float(generator.phi(t) / generator.phi_prime(t))

    integral, _ = quad(ratio, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 1.0 + 4.0 * integral


def _amh_tau(alpha: float) -> float:
    if abs(alpha) < AMH_SMALL:
        return 2.0 * alpha / 9.0
    if alpha == 1.0:
        return 1.0 / 3.0
    return (3.0 * alpha - 2.0) / (3.0 * alpha) - 2.0 * (1.0 - alpha) ** 2 * log1p(-alpha) / (3.0 * alpha**2)
