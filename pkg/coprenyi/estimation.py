"""Semiparametric copula fitting and the plug-in inaccuracy estimator.

Margins are handled nonparametrically: each column is replaced by its ranks
divided by n + 1, ties sharing their average rank. The copula parameter is
then chosen by maximising the pseudo log-likelihood over a family-specific
bracket with a bounded Brent search, or by inverting the average pairwise
sample Kendall's tau.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import combinations
from math import isfinite
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.stats import kendalltau, rankdata

from coprenyi.console import log
from coprenyi.constants import (
    MIN_DATA_ROWS,
    OPTIMIZER_MAXITER,
    OPTIMIZER_XATOL,
    SEARCH_INTERVALS,
    TAU_XTOL,
)
from coprenyi.copulas.dependence import kendall_tau
from coprenyi.copulas.families import density_points
from coprenyi.copulas.model import CopulaModel
from coprenyi.copulas.types import CopulaFamily
from coprenyi.measures import MeasureKind, MeasureRequest, MeasureValue, evaluate
from coprenyi.quadrature import IntegrationConfig
from coprenyi.types import NumericalFailureError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

PENALTY = 1e100
FLAT_CHECK_POINTS = 7
FLAT_TOLERANCE = 1e-10
FRANK_ZERO = 1e-10


@dataclass(frozen=True, slots=True)
class DataMatrix:
    """Observations in rows, variables in columns.

    Attributes:
        values: (rows, columns) array of finite reals
        columns: Column names
    """

    values: NDArray[np.float64]
    columns: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        """Validate shape and finiteness.

        Raises:
            ValueError: If there are fewer than 10 rows, fewer than 2 columns or missing values.
        """
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] < 2:
            msg = f"Data must be a 2-D table with at least 2 columns, got shape {values.shape}"
            raise ValueError(msg)
        if values.shape[0] < MIN_DATA_ROWS:
            msg = f"Data needs at least {MIN_DATA_ROWS} rows, got {values.shape[0]}"
            raise ValueError(msg)
        if not np.all(np.isfinite(values)):
            msg = "Data contains missing or non-finite values"
            raise ValueError(msg)
        columns = tuple(self.columns) or tuple(f"x{i + 1}" for i in range(values.shape[1]))
        if len(columns) != values.shape[1]:
            msg = f"Got {len(columns)} column names for {values.shape[1]} columns"
            raise ValueError(msg)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "columns", columns)

    @property
    def dimension(self) -> int:
        """Number of columns."""
        return int(self.values.shape[1])

    @property
    def rows(self) -> int:
        """Number of observations."""
        return int(self.values.shape[0])

    @classmethod
    def from_records(
        cls, records: Sequence[Mapping[str, Any]], columns: Sequence[str] | None = None
    ) -> DataMatrix:
        """Build a matrix from row dictionaries such as csv.DictReader produces.

        Args:
            records: Rows keyed by column name
            columns: Columns to keep, in order (default: every key of the first row)

        Returns:
            Validated data matrix

        Raises:
            ValueError: If a column is missing or a value is not numeric.
        """
        if not records:
            msg = "No data rows"
            raise ValueError(msg)
        names = list(columns) if columns else list(records[0])
        missing = [name for name in names if name not in records[0]]
        if missing:
            msg = f"Column(s) not found: {', '.join(missing)}"
            raise ValueError(msg)
        try:
            values = [[float(row[name]) for name in names] for row in records]
        except (TypeError, ValueError) as e:
            msg = f"Non-numeric value in data: {e}"
            raise ValueError(msg) from e
        return cls(np.array(values, dtype=np.float64), tuple(names))


def _as_array(data: DataMatrix | ArrayLike) -> NDArray[np.float64]:
    return data.values if isinstance(data, DataMatrix) else np.asarray(data, dtype=np.float64)


def pseudo_observations(data: DataMatrix | ArrayLike) -> NDArray[np.float64]:
    """Column-wise ranks divided by n + 1, ties averaged.

    Returns:
        Matrix of the same shape with entries in (0, 1)

    Raises:
        ValueError: If a column is constant.
    """
    values = _as_array(data)
    if values.ndim == 1:
        values = values[:, None]
    for j in range(values.shape[1]):
        if np.all(values[:, j] == values[0, j]):
            msg = f"Column {j} is constant; pseudo-observations are degenerate"
            raise ValueError(msg)
    return rankdata(values, method="average", axis=0) / (values.shape[0] + 1)


class EstimationMethod(StrEnum):
    """How a parameter was estimated."""

    MPL = "mpl"
    TAU = "tau"


@dataclass(frozen=True, slots=True)
class EstimationResult:
    """A fitted copula parameter.

    Attributes:
        family: Copula family
        theta_hat: Estimated parameter (None for the product copula)
        log_pseudo_likelihood: Pseudo log-likelihood at theta_hat
        method: Estimator used
        iterations: Objective or root-finder evaluations
        converged: Whether the search met its tolerance on a non-flat likelihood
        dimension: Copula dimension
        n_obs: Number of observations
    """

    family: CopulaFamily
    theta_hat: float | None
    log_pseudo_likelihood: float
    method: EstimationMethod
    iterations: int
    converged: bool
    dimension: int
    n_obs: int

    @property
    def model(self) -> CopulaModel:
        """The fitted copula."""
        return CopulaModel(self.family, self.dimension, self.theta_hat)

    @property
    def aic(self) -> float:
        """Akaike information criterion 2k - 2 * log-likelihood."""
        k = 0 if self.theta_hat is None else 1
        return 2.0 * k - 2.0 * self.log_pseudo_likelihood

    def as_dict(self) -> dict[str, Any]:
        """Convert the result to a dictionary.

        Returns:
            Dictionary representation of the result
        """
        return {
            "family": str(self.family),
            "theta_hat": self.theta_hat,
            "log_pseudo_likelihood": self.log_pseudo_likelihood,
            "aic": self.aic,
            "method": str(self.method),
            "iterations": self.iterations,
            "converged": self.converged,
            "dimension": self.dimension,
            "n_obs": self.n_obs,
        }


def _checked_pseudo(pseudo_obs: ArrayLike) -> NDArray[np.float64]:
    u = np.asarray(pseudo_obs, dtype=np.float64)
    if u.ndim != 2 or u.shape[1] < 2:
        msg = f"Pseudo-observations must be an (n, d) array with d >= 2, got shape {u.shape}"
        raise ValueError(msg)
    if not np.all((u > 0.0) & (u < 1.0)):
        msg = "Pseudo-observations must lie strictly inside (0, 1)"
        raise ValueError(msg)
    return u


def log_pseudo_likelihood(model: CopulaModel, pseudo_obs: ArrayLike) -> float:
    """Sum of log copula densities over the rows.

    Returns:
        The pseudo log-likelihood (-inf if a density is not positive)
    """
    u = _checked_pseudo(pseudo_obs)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = float(np.sum(np.log(density_points(model, u))))
    return value if isfinite(value) else -np.inf


def search_interval_for(family: CopulaFamily, dimension: int) -> tuple[float, float]:
    """Default maximum pseudo-likelihood bracket.

    Returns:
        (low, high) bracket

    Raises:
        ValueError: If the family cannot be fitted at this dimension.
    """
    key = (str(family), "bivariate" if dimension == 2 else "multivariate")
    try:
        return SEARCH_INTERVALS[key]
    except KeyError:
        msg = f"{family} copula cannot be fitted in dimension {dimension}"
        raise ValueError(msg) from None


def fit_mpl(
    family: CopulaFamily | str, pseudo_obs: ArrayLike, search_interval: tuple[float, float] | None = None
) -> EstimationResult:
    """Maximum pseudo-likelihood fit of a one-parameter family.

    Args:
        family: Copula family
        pseudo_obs: (n, d) pseudo-observations in (0, 1)
        search_interval: Bracket for theta (family default when omitted)

    Returns:
        Fitted parameter with its pseudo log-likelihood

    Raises:
        ValueError: If the family is not fittable at the data's dimension or the bracket is inadmissible.
        NumericalFailureError: If the density cannot be evaluated anywhere in the bracket.
    """
    family = CopulaFamily(family)
    u = _checked_pseudo(pseudo_obs)
    n, d = u.shape
    if family is CopulaFamily.PRODUCT:
        return EstimationResult(family, None, 0.0, EstimationMethod.MPL, 0, True, d, n)
    low, high = search_interval or search_interval_for(family, d)
    if not low < high:
        msg = f"Search interval must satisfy low < high, got ({low}, {high})"
        raise ValueError(msg)
    for endpoint in (low, high):
        if not (family is CopulaFamily.FRANK and abs(endpoint) < FRANK_ZERO):
            CopulaModel(family, d, endpoint)

    def objective(theta: float) -> float:
        if family is CopulaFamily.FRANK and abs(theta) < FRANK_ZERO:
            return 0.0
        value = log_pseudo_likelihood(CopulaModel(family, d, theta), u)
        return -value if isfinite(value) else PENALTY

    result = minimize_scalar(
        objective,
        bounds=(low, high),
        method="bounded",
        options={"xatol": OPTIMIZER_XATOL, "maxiter": OPTIMIZER_MAXITER},
    )
    theta_hat = float(result.x)
    if result.fun >= PENALTY:
        msg = f"{family} density could not be evaluated on the data anywhere in ({low}, {high})"
        raise NumericalFailureError(msg)
    levels = [objective(t) for t in np.linspace(low, high, FLAT_CHECK_POINTS)]
    flat = max(levels) - min(levels) <= FLAT_TOLERANCE * (1.0 + abs(result.fun))
    if flat:
        log.warning("Pseudo-likelihood of %s is flat on (%g, %g); theta is not identified", family, low, high)
    converged = bool(result.success) and not flat
    log.info("MPL %s: theta=%.8g loglik=%.8g (%d evaluations)", family, theta_hat, -result.fun, result.nfev)
    return EstimationResult(
        family=family,
        theta_hat=theta_hat,
        log_pseudo_likelihood=float(-result.fun),
        method=EstimationMethod.MPL,
        iterations=int(result.nfev),
        converged=converged,
        dimension=d,
        n_obs=n,
    )


def sample_kendall_tau(data: DataMatrix | ArrayLike) -> float:
    """Average of the pairwise sample Kendall's tau over all column pairs.

    Returns:
        Average tau-b
    """
    values = _as_array(data)
    pairs = combinations(range(values.shape[1]), 2)
    taus = [kendalltau(values[:, i], values[:, j]).statistic for i, j in pairs]
    return float(np.mean(taus))


def _out_of_range(family: CopulaFamily, tau: float, attainable: str) -> ValueError:
    return ValueError(f"{family} attains tau in {attainable}, got {tau:.6g}")


def _invert_numerically(
    family: CopulaFamily, dimension: int, tau: float, low: float, high: float
) -> tuple[float, int]:
    def gap(theta: float) -> float:
        return kendall_tau(CopulaModel(family, dimension, theta)) - tau

    at_low, at_high = gap(low), gap(high)
    if at_low * at_high > 0:
        raise _out_of_range(family, tau, f"[{at_low + tau:.6g}, {at_high + tau:.6g}]")
    theta, result = brentq(gap, low, high, xtol=TAU_XTOL, full_output=True)
    return float(theta), int(result.iterations)


def _invert_tau(family: CopulaFamily, dimension: int, tau: float) -> tuple[float | None, int]:
    match family:
        case CopulaFamily.PRODUCT:
            return None, 0
        case CopulaFamily.GUMBEL:
            if not 0.0 <= tau < 1.0:
                raise _out_of_range(family, tau, "[0, 1)")
            return 1.0 / (1.0 - tau), 0
        case CopulaFamily.CLAYTON:
            if not 0.0 < tau < 1.0:
                raise _out_of_range(family, tau, "(0, 1)")
            return 2.0 * tau / (1.0 - tau), 0
        case CopulaFamily.FGM:
            if abs(tau) > 2.0 / 9.0:
                raise _out_of_range(family, tau, "[-2/9, 2/9]")
            return 4.5 * tau, 0
        case CopulaFamily.AMH:
            return _invert_numerically(family, dimension, tau, -1.0, 1.0)
        case CopulaFamily.JOE:
            low, high = SEARCH_INTERVALS[("joe", "bivariate")]
            return _invert_numerically(family, dimension, tau, low, high)
    # Frank: the link is odd in theta and 0 is excluded from the parameter space
    _, high = SEARCH_INTERVALS[("frank", "bivariate")]
    if tau < 0 and dimension > 2:
        raise _out_of_range(family, tau, "(0, 1) above dimension 2")
    sign = 1.0 if tau >= 0 else -1.0
    smallest = SEARCH_INTERVALS[("frank", "multivariate")][0]
    if abs(tau) <= kendall_tau(CopulaModel(family, 2, smallest)):
        return sign * smallest, 0
    theta, iterations = _invert_numerically(family, 2, abs(tau), smallest, high)
    return sign * theta, iterations


def fit_tau_inversion(family: CopulaFamily | str, data: DataMatrix | ArrayLike) -> EstimationResult:
    """Fit a family by inverting its Kendall's tau link at the sample tau.

    Args:
        family: Copula family
        data: Raw data or pseudo-observations (tau is rank based)

    Returns:
        Fitted parameter with the pseudo log-likelihood at it

    Raises:
        ValueError: If the sample tau is outside the family's attainable range.
    """
    family = CopulaFamily(family)
    values = _as_array(data)
    n, d = values.shape
    tau = sample_kendall_tau(values)
    theta_hat, iterations = _invert_tau(family, d, tau)
    model = CopulaModel(family, d, theta_hat)
    loglik = 0.0 if theta_hat is None else log_pseudo_likelihood(model, pseudo_observations(values))
    log.info("Tau inversion %s: tau=%.6g theta=%s", family, tau, theta_hat)
    return EstimationResult(
        family=family,
        theta_hat=theta_hat,
        log_pseudo_likelihood=loglik,
        method=EstimationMethod.TAU,
        iterations=iterations,
        converged=True,
        dimension=d,
        n_obs=n,
    )


def estimate_mccri(
    family_x: CopulaFamily | str,
    family_y: CopulaFamily | str,
    data_x: DataMatrix | ArrayLike,
    gamma: float,
    integration: IntegrationConfig | None = None,
    data_y: DataMatrix | ArrayLike | None = None,
) -> MeasureValue:
    """Plug-in estimate of the copula Rényi inaccuracy.

    Both families are fitted by maximum pseudo-likelihood, family_x on data_x
    and family_y on data_y (data_x when omitted), and the fitted copulas are
    plugged into the measure with identity distortion.

    Returns:
        Estimated measure value
    """
    pseudo_x = pseudo_observations(data_x)
    pseudo_y = pseudo_x if data_y is None else pseudo_observations(data_y)
    fit_x = fit_mpl(family_x, pseudo_x)
    fit_y = fit_mpl(family_y, pseudo_y)
    request = MeasureRequest(
        kind=MeasureKind.MCCRI,
        truth=fit_x.model,
        reference=fit_y.model,
        gamma=gamma,
        integration=integration or IntegrationConfig(),
    )
    return evaluate(request)
