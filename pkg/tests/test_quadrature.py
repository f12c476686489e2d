"""Tests for unit-hypercube integration and the beta function helper."""

from __future__ import annotations

import numpy as np
import pytest

from coprenyi.copulas import CopulaModel, cdf
from coprenyi.quadrature import (
    IntegrationConfig,
    IntegrationMethod,
    beta_function,
    integrate,
    tensor_rule,
    unit_gauss_legendre,
)
from coprenyi.types import NumericalFailureError


def test_unit_gauss_legendre_maps_to_unit_interval() -> None:
    """Test nodes are interior and weights sum to the interval length."""
    x, w = unit_gauss_legendre(16)

    if not (np.all(x > 0.0) and np.all(x < 1.0)):
        pytest.fail("Nodes must lie strictly inside (0, 1)")
    if abs(w.sum() - 1.0) > 1e-14:
        pytest.fail(f"Weights should sum to 1, got {w.sum()}")


def test_tensor_rule_exact_for_polynomials() -> None:
    """Test the tensor rule integrates a low-degree polynomial exactly."""
    value = tensor_rule(lambda p: p[:, 0] * p[:, 1] ** 2 * p[:, 2] ** 3, 3, 8)

    if abs(value - 1.0 / 24.0) > 1e-14:
        pytest.fail(f"Expected 1/24, got {value}")


def test_integrate_refines_until_stable() -> None:
    """Test doubling stops after one refinement when the rule is already exact."""
    estimate = integrate(lambda p: p[:, 0] * p[:, 1] ** 2, 2, IntegrationConfig(nodes_per_axis=8))

    if abs(estimate.value - 1.0 / 6.0) > 1e-14:
        pytest.fail(f"Expected 1/6, got {estimate.value}")
    if estimate.refinements_used != 1 or estimate.nodes_per_axis != 16:
        pytest.fail(f"Expected one refinement to 16 nodes, got {estimate.as_dict()}")
    if estimate.evaluations != 8**2 + 16**2:
        pytest.fail(f"Unexpected evaluation count {estimate.evaluations}")


def test_integrate_without_refinement() -> None:
    """Test max_refinements=0 evaluates the starting rule only."""
    estimate = integrate(lambda p: p[:, 0], 1, IntegrationConfig(nodes_per_axis=4, max_refinements=0))

    if estimate.refinements_used != 0 or estimate.nodes_per_axis != 4:
        pytest.fail(f"Expected no refinement, got {estimate.as_dict()}")


def test_integrate_handles_boundary_singularity() -> None:
    """Test an integrable singularity on the boundary is handled by interior nodes."""
    estimate = integrate(lambda p: -np.log(p[:, 0]), 1, IntegrationConfig(nodes_per_axis=64, rel_tol=1e-3))

    if abs(estimate.value - 1.0) > 1e-3:
        pytest.fail(f"Expected about 1, got {estimate.value}")


def test_monte_carlo_is_seeded() -> None:
    """Test the Monte Carlo rule repeats exactly for a seed and reports an error bar."""
    cfg = IntegrationConfig(method=IntegrationMethod.MONTE_CARLO, mc_samples=50_000, seed=7)

    first = integrate(lambda p: p[:, 0] * p[:, 1], 2, cfg)
    second = integrate(lambda p: p[:, 0] * p[:, 1], 2, cfg)

    if first != second:
        pytest.fail(f"Same seed gave different estimates: {first} and {second}")
    if not 0.0 < first.standard_error < 0.01:
        pytest.fail(f"Unexpected standard error {first.standard_error}")
    if abs(first.value - 0.25) > 5 * first.standard_error:
        pytest.fail(f"Estimate {first.value} too far from 0.25")


def test_monte_carlo_seed_changes_estimate() -> None:
    """Test different seeds give different streams."""
    a = integrate(lambda p: p[:, 0], 1, IntegrationConfig(method="mc", mc_samples=1000, seed=1))
    b = integrate(lambda p: p[:, 0], 1, IntegrationConfig(method="mc", mc_samples=1000, seed=2))

    if a.value == b.value:
        pytest.fail("Different seeds should give different estimates")


def test_non_finite_integrand_raises() -> None:
    """Test a non-finite integrand value is a numerical failure."""
    with pytest.raises(NumericalFailureError, match="not finite"):
        integrate(lambda p: np.full(p.shape[0], np.inf), 2, IntegrationConfig(nodes_per_axis=4))


@pytest.mark.parametrize(
    ("d", "cfg", "message"),
    [
        (0, IntegrationConfig(), "at least 1"),
        (5, IntegrationConfig(), "limited to dimension 4"),
    ],
)
def test_integrate_rejects_dimensions(d: int, cfg: IntegrationConfig, message: str) -> None:
    """Test the dimension limits of the rules."""
    with pytest.raises(ValueError, match=message):
        integrate(lambda p: p[:, 0], d, cfg)


@pytest.mark.parametrize(
    ("kwargs", "message"),
    [
        ({"nodes_per_axis": 1}, "nodes_per_axis"),
        ({"mc_samples": 10}, "mc_samples"),
        ({"rel_tol": 0.0}, "rel_tol"),
        ({"max_refinements": -1}, "max_refinements"),
        ({"method": "simpson"}, "simpson"),
    ],
)
def test_integration_config_validation(kwargs: dict, message: str) -> None:
    """Test out-of-range settings are rejected."""
    with pytest.raises(ValueError, match=message):
        IntegrationConfig(**kwargs)


def test_beta_function() -> None:
    """Test B(3, 4) = 1/60 and B(1, 1) = 1."""
    if abs(beta_function(3, 4) - 1.0 / 60.0) > 1e-15:
        pytest.fail(f"Expected 1/60, got {beta_function(3, 4)}")
    if abs(beta_function(1, 1) - 1.0) > 1e-15:
        pytest.fail(f"Expected 1, got {beta_function(1, 1)}")
    with pytest.raises(ValueError, match="positive"):
        beta_function(0, 2)


@pytest.mark.slow
def test_monte_carlo_agrees_with_tensor_rule() -> None:
    """Test seeded Monte Carlo runs land within four standard errors of the tensor value."""
    truth, reference = CopulaModel("clayton", 2, 2.0), CopulaModel("gumbel", 2, 2.0)

    def integrand(p: np.ndarray) -> np.ndarray:
        return cdf(truth, p) * cdf(reference, p) ** 2

    exact = integrate(integrand, 2, IntegrationConfig(nodes_per_axis=64, rel_tol=1e-12)).value
    within = 0
    for seed in range(100):
        cfg = IntegrationConfig(method=IntegrationMethod.MONTE_CARLO, mc_samples=20_000, seed=seed)
        estimate = integrate(integrand, 2, cfg)
        if abs(estimate.value - exact) <= 4.0 * estimate.standard_error:
            within += 1

    if within < 99:
        pytest.fail(f"Only {within} of 100 Monte Carlo runs within 4 standard errors of {exact}")
