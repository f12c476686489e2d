"""Tests for the inaccuracy, entropy and log-inaccuracy measures."""

from __future__ import annotations

from math import log
from unittest.mock import patch

import pytest

from coprenyi.copulas import CopulaModel
from coprenyi.marginals import DistortionProfile, DistortionScale, exponential_distortion
from coprenyi.measures import (
    MeasureKind,
    MeasureRequest,
    SweepField,
    cci,
    cocri,
    dcri,
    evaluate,
    mccre,
    mccri,
    mscre,
    mscri,
    sci,
    sweep,
)
from coprenyi.quadrature import IntegralEstimate, IntegrationConfig, IntegrationMethod, integrate
from coprenyi.types import NumericalFailureError

FGM = CopulaModel("fgm", 2, 0.5)
AMH = CopulaModel("amh", 2, 0.5)
TIGHT = IntegrationConfig(rel_tol=1e-9, max_refinements=4)


@pytest.mark.parametrize(("gamma", "tolerance"), [(0.5, 1e-6), (2.0, 1e-8), (3.0, 1e-8), (5.0, 1e-8)])
def test_mccre_product_closed_form(product2: CopulaModel, gamma: float, tolerance: float) -> None:
    """Test MCCRE of the product copula equals 2 log(gamma + 1) / (gamma - 1)."""
    value = mccre(MeasureRequest(MeasureKind.MCCRE, product2, gamma=gamma, integration=TIGHT)).value

    expected = 2.0 * log(gamma + 1.0) / (gamma - 1.0)
    if abs(value - expected) > tolerance:
        pytest.fail(f"gamma={gamma}: expected {expected}, got {value}")


def test_mccre_product_is_log_four(product2: CopulaModel) -> None:
    """Test the headline value log 4 at gamma 3."""
    value = evaluate(MeasureRequest("mccre", product2, gamma=3.0)).value
    if abs(value - 1.3862944) > 1e-7:
        pytest.fail(f"Expected log 4, got {value}")


def test_mccre_product_trivariate_monte_carlo(product3: CopulaModel) -> None:
    """Test the Monte Carlo rule reaches 3 log 2 in three dimensions."""
    cfg = IntegrationConfig(method=IntegrationMethod.MONTE_CARLO, seed=3)
    value = mccre(MeasureRequest(MeasureKind.MCCRE, product3, gamma=3.0, integration=cfg))

    if abs(value.value - 3.0 * log(2.0)) > 0.05:
        pytest.fail(f"Expected about {3 * log(2)}, got {value.value}")
    if value.integral.standard_error <= 0.0:
        pytest.fail("Monte Carlo estimate should carry a standard error")


def test_degenerate_families_collapse_to_product() -> None:
    """Test FGM(0) against AMH(0) at gamma 2 equals log 9."""
    req = MeasureRequest(MeasureKind.MCCRI, CopulaModel("fgm", 2, 0.0), CopulaModel("amh", 2, 0.0), gamma=2.0)
    if abs(mccri(req).value - log(9.0)) > 1e-10:
        pytest.fail(f"Expected log 9, got {mccri(req).value}")


@pytest.mark.parametrize("gamma", [0.6, 2.5])
def test_equal_copulas_reduce_to_entropy(gamma: float) -> None:
    """Test MCCRI and MSCRI of a copula against itself equal its entropies."""
    model = CopulaModel("gumbel", 2, 2.0)
    pairs = [
        (MeasureKind.MCCRI, MeasureKind.MCCRE),
        (MeasureKind.MSCRI, MeasureKind.MSCRE),
    ]
    for inaccuracy, entropy in pairs:
        a = evaluate(MeasureRequest(inaccuracy, model, model, gamma=gamma)).value
        b = evaluate(MeasureRequest(entropy, model, gamma=gamma)).value
        if abs(a - b) > 1e-10:
            pytest.fail(f"{inaccuracy} {a} differs from {entropy} {b}")


def test_cci_product(product2: CopulaModel) -> None:
    """Test -integral of uv log(uv) is 1/4."""
    value = cci(MeasureRequest(MeasureKind.CCI, product2, product2)).value
    if abs(value - 0.25) > 1e-6:
        pytest.fail(f"Expected 0.25, got {value}")


def test_sci_matches_cci_for_product(product2: CopulaModel) -> None:
    """Test the survival log-inaccuracy of the product copula equals its copula version."""
    a = cci(MeasureRequest(MeasureKind.CCI, product2, product2)).value
    b = sci(MeasureRequest(MeasureKind.SCI, product2, product2)).value
    if abs(a - b) > 1e-10:
        pytest.fail(f"cci {a} differs from sci {b}")


@pytest.mark.parametrize("rate", [0.5, 1.0, 2.0, 3.5])
def test_exponential_reference_closed_form(product2: CopulaModel, rate: float) -> None:
    """Test MCCRI at gamma 2 with Exponential(rate) reference margins.

    The integral factorises into (1/2 - B(2, rate + 1))^2.
    """
    req = MeasureRequest(
        MeasureKind.MCCRI, product2, product2, gamma=2.0,
        distortion=exponential_distortion([rate, rate]),
        integration=TIGHT,
    )
    expected = -2.0 * log(0.5 - 1.0 / ((rate + 1.0) * (rate + 2.0)))
    if abs(mccri(req).value - expected) > 1e-6:
        pytest.fail(f"rate={rate}: expected {expected}, got {mccri(req).value}")


@pytest.mark.parametrize("rate", [0.5, 2.0])
def test_survival_exponential_reference_closed_form(product2: CopulaModel, rate: float) -> None:
    """Test MSCRI at gamma 2 with survival-scale maps u ** rate gives 2 log(rate + 2)."""
    distortion = exponential_distortion([rate, rate], DistortionScale.SURVIVAL)
    req = MeasureRequest(MeasureKind.MSCRI, product2, product2, gamma=2.0, distortion=distortion)

    if abs(mscri(req).value - 2.0 * log(rate + 2.0)) > 1e-8:
        pytest.fail(f"Expected {2 * log(rate + 2)}, got {mscri(req).value}")


def test_co_and_dual_product(product2: CopulaModel) -> None:
    """Test co- and dual copula measures of the product copula against the exact integral 25/48."""
    expected = -0.5 * log(25.0 / 48.0)
    for function, kind in ((cocri, MeasureKind.MCOCRI), (dcri, MeasureKind.MDCRI)):
        value = function(MeasureRequest(kind, product2, product2, gamma=3.0)).value
        if abs(value - expected) > 1e-10:
            pytest.fail(f"{kind}: expected {expected}, got {value}")


def test_fgm_survival_entropy_equals_copula_entropy() -> None:
    """Test the FGM copula is radially symmetric, so MSCRE equals MCCRE."""
    model = CopulaModel("fgm", 2, 0.7)
    a = mccre(MeasureRequest(MeasureKind.MCCRE, model, gamma=2.0)).value
    b = mscre(MeasureRequest(MeasureKind.MSCRE, model, gamma=2.0)).value
    if abs(a - b) > 1e-10:
        pytest.fail(f"mccre {a} differs from mscre {b}")


def test_positive_dependence_raises_entropy(product2: CopulaModel) -> None:
    """Test FGM(1) has a larger MCCRE than the product copula at gamma 2."""
    fgm = mccre(MeasureRequest(MeasureKind.MCCRE, CopulaModel("fgm", 2, 1.0), gamma=2.0)).value
    product = mccre(MeasureRequest(MeasureKind.MCCRE, product2, gamma=2.0)).value
    if not fgm < product:
        pytest.fail(f"Expected a smaller value for the more concordant copula, got {fgm} and {product}")


def test_fgm_amh_survival_matches_hand_coded_integrand() -> None:
    """Test MSCRI of FGM against AMH with survival maps u ** lambda against the integrand coded by hand."""
    lam1, lam2, gamma = 2.0, 0.9, 4.0
    distortion = DistortionProfile.power([lam1, lam2], DistortionScale.SURVIVAL)
    req = MeasureRequest(MeasureKind.MSCRI, FGM, AMH, gamma=gamma, distortion=distortion, integration=TIGHT)

    def integrand(points):
        u, v = points[:, 0], points[:, 1]
        truth = u * v * (1.0 + 0.5 * (1.0 - u) * (1.0 - v))
        p, q = u**lam1, v**lam2
        reference = p + q - 1.0 + (1.0 - p) * (1.0 - q) / (1.0 - 0.5 * p * q)
        return truth * reference ** (gamma - 1.0)

    expected = log(integrate(integrand, 2, TIGHT).value) / (1.0 - gamma)
    if abs(mscri(req).value - expected) > 1e-8:
        pytest.fail(f"Expected {expected}, got {mscri(req).value}")


@pytest.mark.parametrize(
    ("kwargs", "message"),
    [
        ({"kind": "cci", "reference": FGM, "gamma": 2.0}, "not accepted"),
        ({"kind": "mccri", "reference": FGM, "gamma": 1.0}, "differ from 1"),
        ({"kind": "mccri", "reference": FGM, "gamma": 0.0}, "gamma > 0"),
        ({"kind": "mccri", "reference": FGM}, "gamma > 0"),
        ({"kind": "mccre", "reference": FGM, "gamma": 2.0}, "single copula"),
        ({"kind": "mscri", "gamma": 2.0}, "needs a reference"),
        ({"kind": "mccri", "reference": CopulaModel("product", 3), "gamma": 2.0}, "dimensions differ"),
        (
            {"kind": "mscri", "reference": FGM, "gamma": 2, "distortion": exponential_distortion([2.0] * 2)},
            "survival-scale",
        ),
        (
            {"kind": "mccri", "reference": FGM, "gamma": 2, "distortion": exponential_distortion([2.0] * 3)},
            "3 maps",
        ),
        ({"kind": "entropy", "gamma": 2.0}, "entropy"),
    ],
)
def test_request_validation(kwargs: dict, message: str) -> None:
    """Test invalid measure requests are rejected."""
    with pytest.raises(ValueError, match=message):
        MeasureRequest(truth=AMH, **kwargs)


def test_kind_specific_entry_points_check_kind(product2: CopulaModel) -> None:
    """Test a per-kind function refuses another kind's request."""
    req = MeasureRequest(MeasureKind.MCCRE, product2, gamma=3.0)
    with pytest.raises(ValueError, match="Expected a mccri request"):
        mccri(req)


def test_nonpositive_integral_is_numerical_failure(product2: CopulaModel) -> None:
    """Test a nonpositive Rényi integral raises NumericalFailureError."""
    req = MeasureRequest(MeasureKind.MCCRE, product2, gamma=3.0)
    with (
        patch("coprenyi.measures.integrate", return_value=IntegralEstimate(value=0.0)),
        pytest.raises(NumericalFailureError, match="must be positive"),
    ):
        evaluate(req)


def test_measure_value_record(product2: CopulaModel) -> None:
    """Test the flat record echoes the request."""
    record = evaluate(MeasureRequest(MeasureKind.MCCRI, product2, FGM, gamma=3.0)).as_dict()

    if record["kind"] != "mccri" or record["truth"] != "product::2" or record["reference"] != "fgm:0.5:2":
        pytest.fail(f"Unexpected record {record}")
    if record["distortion"]["scale"] != "cdf" or record["config"]["method"] != "tensor":
        pytest.fail(f"Unexpected provenance {record}")
    if record["integral"]["value"] <= 0.0:
        pytest.fail("Integral should be positive")


def test_sweep_gamma_matches_single_evaluations(product2: CopulaModel) -> None:
    """Test a gamma sweep gives the same values as separate evaluations."""
    base = MeasureRequest(MeasureKind.MCCRE, product2, gamma=2.0)
    values = sweep(base, SweepField.GAMMA, [2.0, 3.0, 4.0])

    for gamma, value in zip([2.0, 3.0, 4.0], values, strict=True):
        expected = 2.0 * log(gamma + 1.0) / (gamma - 1.0)
        if abs(value.value - expected) > 1e-8 or value.request.gamma != gamma:
            pytest.fail(f"gamma={gamma}: expected {expected}, got {value.value}")


def test_sweep_lambda_uses_exponential_reference(product2: CopulaModel) -> None:
    """Test a lambda sweep applies Exponential(lambda) reference margins on every coordinate."""
    base = MeasureRequest(MeasureKind.MCCRI, product2, product2, gamma=2.0, integration=TIGHT)
    values = sweep(base, "lambda", [1.0, 2.0])

    for rate, value in zip([1.0, 2.0], values, strict=True):
        expected = -2.0 * log(0.5 - 1.0 / ((rate + 1.0) * (rate + 2.0)))
        if abs(value.value - expected) > 1e-6:
            pytest.fail(f"lambda={rate}: expected {expected}, got {value.value}")


def test_sweep_copula_parameters() -> None:
    """Test truth and reference sweeps replace the right parameter."""
    base = MeasureRequest(MeasureKind.MCCRI, CopulaModel("clayton", 2, 1.0), FGM, gamma=3.0)

    truth = sweep(base, SweepField.TRUTH, [2.0])[0].request
    reference = sweep(base, SweepField.REFERENCE, [-0.5])[0].request
    if truth.truth.parameter != 2.0 or truth.reference != FGM:
        pytest.fail(f"Unexpected truth sweep request {truth.as_dict()}")
    if reference.reference.parameter != -0.5 or reference.truth != base.truth:
        pytest.fail(f"Unexpected reference sweep request {reference.as_dict()}")


def test_sweep_reference_of_entropy_fails(product2: CopulaModel) -> None:
    """Test entropies have no reference parameter to sweep."""
    with pytest.raises(ValueError, match="no reference copula"):
        sweep(MeasureRequest(MeasureKind.MCCRE, product2, gamma=3.0), SweepField.REFERENCE, [1.0])


def test_sweep_rejects_inadmissible_values() -> None:
    """Test a grid value outside the family's range is rejected before evaluation."""
    base = MeasureRequest(MeasureKind.MCCRI, CopulaModel("gumbel", 2, 2.0), FGM, gamma=3.0)
    with pytest.raises(ValueError, match="theta >= 1"):
        sweep(base, SweepField.TRUTH, [2.0, 0.5])
