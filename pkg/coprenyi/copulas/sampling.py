"""Seeded sampling from copula models.

Bivariate FGM, AMH and negatively dependent Frank use conditional inversion.
Archimedean families use the Marshall-Olkin frailty construction
U_i = psi(E_i / V) with a family-specific frailty V:

- Clayton: Gamma(1/theta) with scale theta
- Gumbel: positive stable with index 1/theta, drawn by the Chambers-Mallows-Stuck
  (Kanter) formula
- Frank: logarithmic series with p = 1 - exp(-theta)
- Joe: Sibuya with index 1/theta, drawn by inverting its survival function

Every draw comes from a Philox counter-based generator seeded with the caller's
64-bit seed, so a (model, count, seed) triple always yields the same matrix.
"""

from __future__ import annotations

from math import expm1, gamma as gamma_function, lgamma
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import gammaln

from coprenyi.constants import CLAMP_EPSILON
from coprenyi.rng import make_rng

from .families import generator_for
from .types import CopulaFamily

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from .model import CopulaModel

SIBUYA_DIRECT_LIMIT = 1e6


def sample(model: CopulaModel, count: int, seed: int) -> NDArray[np.float64]:
    """Draw count i.i.d. points from the copula.

    Args:
        model: Copula model
        count: Number of rows
        seed: 64-bit seed

    Returns:
        (count, dimension) array with entries in (0, 1)

    Raises:
        ValueError: If count is not positive.
    """
    if count < 1:
        msg = f"Sample count must be positive, got {count}"
        raise ValueError(msg)
    rng = make_rng(seed)
    d = model.dimension
    if model.is_independent:
        draws = rng.random((count, d))
    else:
        match model.family:
            case CopulaFamily.FGM:
                draws = _fgm_conditional(model.theta, rng, count)
            case CopulaFamily.AMH:
                draws = _amh_conditional(model.theta, rng, count)
            case CopulaFamily.FRANK if model.theta < 0:
                draws = _frank_conditional(model.theta, rng, count)
            case _:
                draws = _marshall_olkin(model, rng, count)
    return np.clip(draws, CLAMP_EPSILON, 1.0 - CLAMP_EPSILON)


def _fgm_conditional(theta: float, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    u, w = rng.random(count), rng.random(count)
    a = theta * (1.0 - 2.0 * u)
    v = 2.0 * w / ((1.0 + a) + np.sqrt((1.0 + a) ** 2 - 4.0 * a * w))
    return np.column_stack([u, v])


def _amh_conditional(alpha: float, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    # Root of (w b^2 - alpha) v^2 + (2 w b (1 - b) - (1 - alpha)) v + w (1 - b)^2 = 0, b = alpha (1 - u)
    u, w = rng.random(count), rng.random(count)
    b = alpha * (1.0 - u)
    qa = w * b**2 - alpha
    qb = 2.0 * w * b * (1.0 - b) - (1.0 - alpha)
    qc = w * (1.0 - b) ** 2
    v = 2.0 * qc / (-qb + np.sqrt(np.maximum(qb**2 - 4.0 * qa * qc, 0.0)))
    return np.column_stack([u, np.clip(v, 0.0, 1.0)])


def _frank_conditional(theta: float, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    u, w = rng.random(count), rng.random(count)
    ratio = w * expm1(-theta) / (w + (1.0 - w) * np.exp(-theta * u))
    v = -np.log1p(ratio) / theta
    return np.column_stack([u, np.clip(v, 0.0, 1.0)])


def _marshall_olkin(model: CopulaModel, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    theta = model.theta
    match model.family:
        case CopulaFamily.CLAYTON:
            frailty = rng.gamma(shape=1.0 / theta, scale=theta, size=count)
        case CopulaFamily.GUMBEL:
            frailty = _positive_stable(1.0 / theta, rng, count)
        case CopulaFamily.FRANK:
            frailty = rng.logseries(-expm1(-theta), size=count).astype(np.float64)
        case CopulaFamily.JOE:
            frailty = _sibuya(1.0 / theta, rng, count)
        case _:
            msg = f"No sampler for {model.family} in dimension {model.dimension}"
            raise ValueError(msg)
    exponentials = rng.exponential(size=(count, model.dimension))
    generator = generator_for(model)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return generator.psi(exponentials / frailty[:, None])


def _positive_stable(index: float, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    """Positive stable variables with Laplace transform exp(-s^index)."""
    angle = rng.uniform(0.0, np.pi, size=count)
    exponential = rng.exponential(size=count)
    first = np.sin(index * angle) / np.sin(angle) ** (1.0 / index)
    second = (np.sin((1.0 - index) * angle) / exponential) ** ((1.0 - index) / index)
    return first * second


def _sibuya(index: float, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    """Sibuya variables with P(V > k) = Gamma(k + 1 - a) / (Gamma(k + 1) Gamma(1 - a)).

    V = 1 when U <= a. Otherwise V is the smallest k with P(V > k) <= 1 - U,
    found by integer bisection on [1, 4g + 16] where g = ((1 - U) Gamma(1 - a))^(-1/a)
    bounds the answer from above. Very large g are returned as floor(g).
    """
    uniforms = rng.random(count)
    frailty = np.ones(count)
    pending = uniforms > index
    if not np.any(pending):
        return frailty
    tail = 1.0 - uniforms[pending]
    log_tail = np.log(tail)
    g = (tail * gamma_function(1.0 - index)) ** (-1.0 / index)
    direct = g > SIBUYA_DIRECT_LIMIT
    lo = np.ones_like(g)
    hi = np.where(direct, 1.0, np.floor(4.0 * g + 16.0))
    log_norm = lgamma(1.0 - index)

    def log_survival(k: NDArray[np.float64]) -> NDArray[np.float64]:
        return gammaln(k + 1.0 - index) - gammaln(k + 1.0) - log_norm

    # Invariant: survival(lo) > tail and survival(hi) <= tail
    while np.any(hi - lo > 1.0):
        mid = np.floor((lo + hi) / 2.0)
        below = log_survival(mid) <= log_tail
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    frailty[pending] = np.where(direct, np.floor(g), hi)
    return frailty

