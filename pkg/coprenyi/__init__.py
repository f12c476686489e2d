"""Copula-based Rényi inaccuracy toolkit.

This package evaluates Rényi inaccuracy and entropy measures built on
copulas, survival copulas, co-copulas and dual copulas, bounds them with
Fréchet-Hoeffding envelopes, fits one-parameter copulas to data by maximum
pseudo-likelihood and studies the resulting plug-in estimator by Monte Carlo
simulation. Everything is available both as a library and through the
``coprenyi`` command line tool.
"""

from __future__ import annotations

from importlib.metadata import version

from .bounds import BoundReport, BoundRequest, BoundTarget, bound_report
from .console import console, log
from .copulas import CopulaFamily, CopulaModel, cdf, density, kendall_tau, sample
from .estimation import (
    DataMatrix,
    EstimationMethod,
    EstimationResult,
    estimate_mccri,
    fit_mpl,
    fit_tau_inversion,
    pseudo_observations,
)
from .marginals import DistortionProfile, DistortionScale, build_distortion
from .measures import MeasureKind, MeasureRequest, MeasureValue, evaluate, sweep
from .quadrature import IntegralEstimate, IntegrationConfig, IntegrationMethod, integrate
from .simulation import SimulationConfig, SimulationReport, run_study
from .types import NumericalFailureError

__all__ = [
    "BoundReport",
    "BoundRequest",
    "BoundTarget",
    "CopulaFamily",
    "CopulaModel",
    "DataMatrix",
    "DistortionProfile",
    "DistortionScale",
    "EstimationMethod",
    "EstimationResult",
    "IntegralEstimate",
    "IntegrationConfig",
    "IntegrationMethod",
    "MeasureKind",
    "MeasureRequest",
    "MeasureValue",
    "NumericalFailureError",
    "SimulationConfig",
    "SimulationReport",
    "bound_report",
    "build_distortion",
    "cdf",
    "console",
    "density",
    "estimate_mccri",
    "evaluate",
    "fit_mpl",
    "fit_tau_inversion",
    "integrate",
    "kendall_tau",
    "log",
    "pseudo_observations",
    "run_study",
    "sample",
    "sweep",
]
__version__ = version("coprenyi")
