"""Shared fixtures for the coprenyi test suite."""

from __future__ import annotations

import pytest

from coprenyi.copulas import CopulaModel
from coprenyi.quadrature import IntegrationConfig


@pytest.fixture
def fast_integration() -> IntegrationConfig:
    """Tensor rule settings cheap enough for loops over many requests."""
    return IntegrationConfig(nodes_per_axis=32, rel_tol=1e-7, max_refinements=2)


@pytest.fixture
def product2() -> CopulaModel:
    """Bivariate independence copula."""
    return CopulaModel("product", 2)


@pytest.fixture
def product3() -> CopulaModel:
    """Trivariate independence copula."""
    return CopulaModel("product", 3)
