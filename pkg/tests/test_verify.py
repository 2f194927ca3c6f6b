import numpy as np
import pytest

from ortholadder.oracle import IntegratorConfig
from ortholadder.systems import (
    FAMILIES,
    build_system,
    custom_system,
    jacobi_antisymmetric_system,
    jacobi_system,
    krawtchouk_system,
)
from ortholadder.verify import DEFAULT_THRESHOLDS, available_methods, run_verification


def test_available_methods():
    assert available_methods(krawtchouk_system(3)) == ("analytic", "spectral", "oracle")
    assert available_methods(jacobi_system(1, 1, 5)) == ("analytic", "oracle")
    assert set(available_methods(jacobi_system(1, 1, 5).truncated())) == {"spectral", "oracle"}
    assert available_methods(custom_system([1.0, 2.0])) == ("spectral", "oracle")


def test_krawtchouk_report():
    report = run_verification(krawtchouk_system(5, 0.3), np.linspace(0, 10, 51))
    assert report.passed, report.failures
    assert report.checks["analytic_vs_oracle"]["max_pop_residual"] < 1e-6
    assert report.checks["mean_excitation_law"]["value"] < 1e-12
    doc = report.to_dict()
    assert doc["passed"] and doc["failures"] == []


def test_bessel_check_is_present_for_half_antisymmetric():
    report = run_verification(jacobi_antisymmetric_system(0.5, 30), np.linspace(0, 3, 13))
    assert report.checks["bessel_formula"]["value"] < 1e-8
    assert report.passed


def test_coarse_oracle_fails_the_report():
    report = run_verification(
        krawtchouk_system(5, 0.3), np.linspace(0, 10, 21), IntegratorConfig(tolerance=1e-2)
    )
    assert not report.passed
    assert "oracle.resolution" in report.failures


def test_thresholds_can_be_tightened():
    report = run_verification(
        custom_system([1.0, 1.3]), np.linspace(0, 5, 11), thresholds={"max_pop_residual": 1e-30}
    )
    # the oracle tolerance can no longer certify such a threshold either
    assert set(report.failures) == {"spectral_vs_oracle", "oracle.resolution"}
    assert report.thresholds["norm_drift"] == DEFAULT_THRESHOLDS["norm_drift"]


@pytest.mark.parametrize("name", list(FAMILIES))
def test_every_family_example_verifies(name):
    spec = build_system(name, **FAMILIES[name].example)
    report = run_verification(spec, np.linspace(0, 2, 9))
    assert report.passed, report.failures
