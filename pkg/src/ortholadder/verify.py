"""Cross-method verification reports.

A report runs every solver a family supports (closed form, spectral,
direct integration) on one grid and records pairwise residuals, norm drift,
truncation tails and family-specific identities against thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import analytic_trajectory, bessel_populations, krawtchouk_excitation
from .oracle import TOP_POPULATION_LIMIT, IntegratorConfig, integrate_degenerate, integrate_ladder
from .spectral import spectral_solve
from .systems import FAMILIES, DegenerateSystemSpec, SystemSpec
from .trajectory import as_time_grid

__all__ = ["DEFAULT_THRESHOLDS", "VerificationReport", "available_methods", "run_verification"]

DEFAULT_THRESHOLDS = {
    "max_pop_residual": 1e-6,
    "max_amp_residual": 1e-5,
    "norm_drift": 1e-9,
    "initial_condition": 1e-12,
    "bessel_formula": 1e-8,
    "mean_excitation_law": 1e-12,
    "top_population": TOP_POPULATION_LIMIT,
}


@dataclass
class VerificationReport:
    system: dict
    thresholds: dict
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check["passed"] for check in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, check in self.checks.items() if not check["passed"]]

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "thresholds": dict(self.thresholds),
            "checks": self.checks,
            "passed": self.passed,
            "failures": self.failures,
        }


def available_methods(system) -> tuple[str, ...]:
    """Methods that can actually run on this particular spec."""
    methods = FAMILIES[system.family].methods
    if isinstance(system, SystemSpec):
        if system.closed and system.family not in ("krawtchouk", "legendre-function", "custom"):
            methods = tuple(m for m in methods if m != "analytic") + ("spectral",)
        if not system.closed:
            methods = tuple(m for m in methods if m != "spectral")
    return methods


def _solve(system, method, times, config):
    if method == "analytic":
        return analytic_trajectory(system, times)
    if method == "spectral":
        return spectral_solve(system, times)[1]
    if isinstance(system, DegenerateSystemSpec):
        return integrate_degenerate(system, times, config)
    return integrate_ladder(system, times, config)


def run_verification(
    system,
    times,
    oracle_config: IntegratorConfig | None = None,
    thresholds: dict | None = None,
) -> VerificationReport:
    limits = dict(DEFAULT_THRESHOLDS)
    limits.update(thresholds or {})
    grid = as_time_grid(times)
    report = VerificationReport(system.to_dict(), limits)

    trajectories = {m: _solve(system, m, grid, oracle_config) for m in available_methods(system)}
    closed = isinstance(system, DegenerateSystemSpec) or system.closed

    for method, traj in trajectories.items():
        norm = traj.norm
        if closed:
            drift = float(np.max(np.abs(norm - 1)))
        else:
            drift = float(max(np.max(norm - 1), 0.0))
        report.checks[f"{method}.norm_drift"] = {
            "value": drift,
            "passed": drift < limits["norm_drift"],
        }
        if not closed:
            report.checks[f"{method}.truncation_tail"] = {
                "value": float(np.max(traj.tail)),
                "passed": True,
            }
        if grid.points[0] == 0:
            start = traj.amplitudes[0].copy()
            start.flat[0] -= 1
            err = float(np.max(np.abs(start)))
            report.checks[f"{method}.initial_condition"] = {
                "value": err,
                "passed": err < limits["initial_condition"],
            }
        if method == "oracle":
            # The refinement only certifies agreement to its own tolerance, so a
            # comparison finer than that proves nothing.
            bound = (oracle_config or IntegratorConfig()).tolerance
            report.checks["oracle.resolution"] = {
                "value": bound,
                "passed": bound <= min(limits["max_pop_residual"], limits["max_amp_residual"]),
            }
        if method == "oracle" and "top_population" in traj.metadata:
            top = traj.metadata["top_population"]
            report.checks["oracle.top_population"] = {
                "value": top,
                "passed": top < limits["top_population"],
            }

    for a, b in (("analytic", "oracle"), ("spectral", "oracle"), ("analytic", "spectral")):
        if a in trajectories and b in trajectories:
            ta, tb = trajectories[a], trajectories[b]
            pop = float(np.max(np.abs(ta.populations - tb.populations)))
            amp = float(np.max(np.abs(ta.amplitudes - tb.amplitudes)))
            report.checks[f"{a}_vs_{b}"] = {
                "max_pop_residual": pop,
                "max_amp_residual": amp,
                "passed": pop < limits["max_pop_residual"] and amp < limits["max_amp_residual"],
            }

    family = system.family
    if (
        family == "jacobi-antisymmetric"
        and not closed
        and math.isclose(abs(system.params["alpha"]), 0.5)
    ):
        ref_traj = trajectories["analytic"] if "analytic" in trajectories else trajectories["oracle"]
        upto = min(10, ref_traj.level_count - 1)
        expected = bessel_populations(upto, grid)
        err = float(np.max(np.abs(ref_traj.populations[:, : upto + 1] - expected)))
        report.checks["bessel_formula"] = {"value": err, "passed": err < limits["bessel_formula"]}
    if family == "krawtchouk" and "analytic" in trajectories:
        N, eps = system.params["N"], system.params["epsilon"]
        law = N * krawtchouk_excitation(N, eps, grid)
        err = float(np.max(np.abs(trajectories["analytic"].mean_excitation - law)))
        report.checks["mean_excitation_law"] = {
            "value": err,
            "passed": err < limits["mean_excitation_law"],
        }
    return report
