"""Unit tests for the Fréchet-Hoeffding bound module."""

from __future__ import annotations

from math import log

import pytest

from coprenyi.bounds import (
    BoundRequest,
    BoundTarget,
    bound_report,
    ccri_bound_integrals,
    ccri_closed_forms,
    kernel_integrals,
    orient,
    scri_bound_integrals,
    scri_closed_forms,
)
from coprenyi.copulas import CopulaModel
from coprenyi.marginals import DistortionProfile, DistortionScale
from coprenyi.measures import MeasureRequest, evaluate
from coprenyi.quadrature import IntegrationConfig, beta_function

CHEAP = IntegrationConfig(nodes_per_axis=64, rel_tol=1e-8, max_refinements=3)

SANDWICH_CASES = [
    (gamma, alpha, beta) for gamma in (0.5, 3.0) for alpha, beta in ((1.0, 1.0), (0.5, 2.0), (2.0, 3.0))
]


def test_kernel_integrals_match_hand_integration() -> None:
    """Test the two kernel integrals at gamma=3, alpha=beta=1."""
    i_max, i_min = kernel_integrals(BoundRequest(gamma=3.0, alpha=1.0, beta=1.0))

    if abs(i_max - 71 / 1260) > 1e-10:
        pytest.fail(f"Expected I_max = 71/1260, got {i_max}")
    if abs(i_min - 1 / 14) > 1e-10:
        pytest.fail(f"Expected I_min = 1/14, got {i_min}")


def test_printed_copula_forms_are_flagged() -> None:
    """Test the printed rational forms are reported next to the integrals and flagged."""
    req = BoundRequest(gamma=3.0, alpha=1.0, beta=1.0)

    xi, psi_star = ccri_closed_forms(req)
    report = bound_report(req)

    if abs(xi - 1 / 14) > 1e-15 or abs(psi_star - 1 / 18) > 1e-15:
        pytest.fail(f"Expected printed forms 1/14 and 1/18, got {xi} and {psi_star}")
    if report.min_agrees or report.max_agrees:
        pytest.fail(f"Both printed forms should disagree with the integrals: {report.as_dict()}")
    if abs(report.min_discrepancy - (1 / 14 - 1 / 18)) > 1e-10:
        pytest.fail(f"Unexpected min-kernel discrepancy {report.min_discrepancy}")


def test_printed_survival_forms() -> None:
    """Test the survival forms add the beta function terms to the rational part."""
    req = BoundRequest(gamma=3.0, alpha=1.0, beta=1.0, target=BoundTarget.MSCRI)

    phi, phi_hat = scri_closed_forms(req)

    if abs(phi - 1 / 14) > 1e-15:
        pytest.fail(f"Expected phi = 1/14, got {phi}")
    expected = 1 / 18 - 1 / 240 + 1 / 315
    if abs(phi_hat - expected) > 1e-14:
        pytest.fail(f"Expected phi_hat = {expected}, got {phi_hat}")


def test_beta_terms() -> None:
    """Test the beta function values used by the survival form."""
    if abs(beta_function(3, 4) - 1 / 60) > 1e-15 or abs(beta_function(4, 4) - 1 / 140) > 1e-15:
        pytest.fail("Beta function mismatch")


@pytest.mark.parametrize(("gamma", "alpha", "beta"), SANDWICH_CASES)
def test_copula_bound_sandwich(gamma: float, alpha: float, beta: float) -> None:
    """Test mccri against a power-distorted independent reference lies between the bounds."""
    lower, upper = ccri_bound_integrals(BoundRequest(gamma, alpha, beta, integration=CHEAP))
    for truth in (CopulaModel("product", 2), CopulaModel("clayton", 2, 2.0), CopulaModel("fgm", 2, -0.5)):
        value = evaluate(
            MeasureRequest(
                "mccri",
                truth,
                CopulaModel("product", 2),
                gamma=gamma,
                distortion=DistortionProfile.power([alpha, beta]),
                integration=CHEAP,
            )
        ).value
        slack = 1e-5 * (1.0 + abs(value))
        if not lower - slack <= value <= upper + slack:
            pytest.fail(f"{truth.label} at {(gamma, alpha, beta)}: {value} outside [{lower}, {upper}]")


@pytest.mark.parametrize(("gamma", "alpha", "beta"), SANDWICH_CASES)
def test_survival_bound_sandwich(gamma: float, alpha: float, beta: float) -> None:
    """Test mscri against a power-distorted independent reference lies between the bounds."""
    req = BoundRequest(gamma, alpha, beta, target=BoundTarget.MSCRI, integration=CHEAP)
    lower, upper = scri_bound_integrals(req)
    for truth in (CopulaModel("product", 2), CopulaModel("gumbel", 2, 2.0)):
        value = evaluate(
            MeasureRequest(
                "mscri",
                truth,
                CopulaModel("product", 2),
                gamma=gamma,
                distortion=DistortionProfile.power([alpha, beta], DistortionScale.SURVIVAL),
                integration=CHEAP,
            )
        ).value
        slack = 1e-5 * (1.0 + abs(value))
        if not lower - slack <= value <= upper + slack:
            pytest.fail(f"{truth.label} at {(gamma, alpha, beta)}: {value} outside [{lower}, {upper}]")


def test_orientation_follows_regime() -> None:
    """Test the kernel supplying each bound swaps between the regimes."""
    above = bound_report(BoundRequest(3.0, 1.0, 1.0))
    below = bound_report(BoundRequest(0.5, 1.0, 1.0, integration=CHEAP))

    if above.lower_kernel != "min" or below.lower_kernel != "max":
        pytest.fail(f"Unexpected kernels {above.lower_kernel} and {below.lower_kernel}")
    if below.max_kernel_integral > below.min_kernel_integral:
        pytest.fail("The max kernel never exceeds the min kernel")
    for report in (above, below):
        if not report.numeric_lower <= report.numeric_upper:
            pytest.fail(f"Bounds out of order: {report.as_dict()}")
    if orient(3.0, 71 / 1260, 1 / 14) != (-0.5 * log(1 / 14), -0.5 * log(71 / 1260)):
        pytest.fail("Unexpected orientation at gamma=3")


def test_undefined_printed_form_reports_none() -> None:
    """Test a vanishing printed denominator turns into None in the record."""
    record = bound_report(BoundRequest(0.5, 2.0, 1.0, integration=CHEAP)).as_dict()

    if record["closed_form_min"] is not None or record["closed_form_upper"] is not None:
        pytest.fail(f"Expected None for the undefined form, got {record}")
    if record["closed_form_max"] is None or record["closed_form_lower"] is None:
        pytest.fail(f"The max-kernel form is defined here: {record}")
    if record["upper_kernel"] != "min":
        pytest.fail(f"Unexpected upper kernel {record['upper_kernel']}")


@pytest.mark.parametrize(
    ("kwargs", "match"),
    [
        ({"gamma": 3.0, "alpha": 0.0, "beta": 1.0}, "alpha must be positive"),
        ({"gamma": 3.0, "alpha": 1.0, "beta": -2.0}, "beta must be positive"),
        ({"gamma": 1.0, "alpha": 1.0, "beta": 1.0}, "gamma must differ from 1"),
        ({"gamma": 3.0, "alpha": 1.0, "beta": 1.0, "target": "mcocri"}, "not a valid BoundTarget"),
    ],
)
def test_request_validation(kwargs: dict, match: str) -> None:
    """Test inadmissible bound parameters are rejected."""
    with pytest.raises(ValueError, match=match):
        BoundRequest(**kwargs)


def test_target_mismatch() -> None:
    """Test each bound function accepts only its own target."""
    with pytest.raises(ValueError, match="Expected a mccri bound request"):
        ccri_bound_integrals(BoundRequest(3.0, 1.0, 1.0, target="mscri"))
    with pytest.raises(ValueError, match="Expected a mscri bound request"):
        scri_bound_integrals(BoundRequest(3.0, 1.0, 1.0))
