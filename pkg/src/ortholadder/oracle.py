"""Direct numerical integration of the ladder equations.

This is the independent check on every closed form and on the spectral
solver.  It integrates the master equation in its explicit-phase form,

    da_n/dt = i [f_{n+1} e^{-i eps_{n+1} t} a_{n+1} + f_n e^{i eps_n t} a_{n-1}],

with classical fixed-step RK4, halving the step until two successive
solutions agree on the whole grid.  Nothing here shares algebra with the
rotating-frame matrix used by :mod:`ortholadder.spectral`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, TruncationWarning
from .systems import DegenerateSystemSpec, SystemSpec
from .trajectory import AmplitudeTrajectory, DegenerateTrajectory, as_time_grid

__all__ = [
    "IntegratorConfig",
    "integrate_ladder",
    "integrate_degenerate",
    "rk4_fixed",
    "convergence_ratios",
    "EXTRA_LEVELS",
    "TOP_POPULATION_LIMIT",
]

EXTRA_LEVELS = 8
TOP_POPULATION_LIMIT = 1e-10


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 0.05
    tolerance: float = 1e-10
    max_steps: int = 4_000_000

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step}")
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be positive, got {self.max_steps}")


def _ladder_rhs(couplings, detunings):
    f = np.asarray(couplings, dtype=float)
    eps = np.asarray(detunings, dtype=float)
    resonant = not np.any(eps)

    def rhs(t, a):
        out = np.zeros_like(a)
        if resonant:
            up = f * a[1:]
            down = f * a[:-1]
        else:
            phase = np.exp(-1j * eps * t)
            up = f * phase * a[1:]
            down = f * np.conj(phase) * a[:-1]
        out[:-1] += up
        out[1:] += down
        return 1j * out

    return rhs


def _rk4_segment(rhs, y, t0, t1, steps):
    h = (t1 - t0) / steps
    t = t0
    for k in range(steps):
        t = t0 + k * h
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def rk4_fixed(rhs, y0, t0, points, base_steps, level=0):
    """RK4 through ``points`` starting from ``y0`` at ``t0``.

    Interval i gets ``base_steps[i] * 2**level`` equal steps, so raising
    ``level`` by one halves every step exactly.
    """
    y = np.array(y0, dtype=complex)
    out = np.empty((len(points),) + y.shape, dtype=complex)
    t = t0
    for i, target in enumerate(points):
        if target > t:
            y = _rk4_segment(rhs, y, t, target, int(base_steps[i]) << level)
        out[i] = y
        t = target
    return out


def _refine(rhs, y0, t0, points, config):
    """Halve the step until successive grid solutions agree to ``config.tolerance``."""
    edges = np.concatenate([[t0], points])
    spans = np.diff(edges)
    base = np.maximum(np.ceil(spans / config.step), 1).astype(int)
    base[spans == 0] = 0

    level = 0
    previous = rk4_fixed(rhs, y0, t0, points, base, level)
    residuals = []
    while True:
        level += 1
        if int(base.sum()) << level > config.max_steps:
            raise ConvergenceError(
                f"step refinement exceeded max_steps={config.max_steps}",
                residuals=residuals[-2:],
            )
        current = rk4_fixed(rhs, y0, t0, points, base, level)
        residual = float(np.max(np.abs(current - previous)))
        residuals.append(residual)
        if residual < config.tolerance:
            step = float(np.max(spans / np.maximum(base << level, 1)))
            return current, {"residual": residual, "step": step, "halvings": level}
        previous = current


def integrate_ladder(
    spec: SystemSpec,
    times,
    config: IntegratorConfig | None = None,
    *,
    initial=None,
    extra_levels: int = EXTRA_LEVELS,
) -> AmplitudeTrajectory:
    """RK4 solution of the ladder equations sampled on ``times``.

    Without ``initial`` the state starts as ``delta_{n,0}`` at t = 0;
    otherwise ``initial`` is the state at ``times[0]``.  Open ladders are
    integrated with ``extra_levels`` additional levels, and a
    :class:`TruncationWarning` is issued if the topmost of those ever holds
    more than ``TOP_POPULATION_LIMIT``.
    """
    config = config or IntegratorConfig()
    grid = as_time_grid(times)
    work = spec if spec.closed else spec.resized(spec.n_max + extra_levels)
    levels = work.level_count
    rhs = _ladder_rhs(work.couplings, work.detunings)

    if initial is None:
        y0 = np.zeros(levels, dtype=complex)
        y0[0] = 1.0
        t0 = 0.0
    else:
        init = np.asarray(initial, dtype=complex)
        if init.shape[0] > levels:
            raise DomainError("initial state has more levels than the ladder")
        y0 = np.zeros(levels, dtype=complex)
        y0[: init.shape[0]] = init
        t0 = float(grid.points[0])

    states, info = _refine(rhs, y0, t0, grid.points, config)
    meta = dict(info)
    meta["params"] = dict(spec.params)
    if not spec.closed:
        top = float(np.max(np.abs(states[:, -1]) ** 2))
        meta["top_population"] = top
        meta["truncation_warning"] = top > TOP_POPULATION_LIMIT
        if meta["truncation_warning"]:
            warnings.warn(
                f"{spec.family}: population {top:.3g} reached level {levels - 1}",
                TruncationWarning,
                stacklevel=2,
            )
    traj = AmplitudeTrajectory(
        grid.points, states[:, : spec.level_count].copy(), "oracle", spec.family, meta
    )
    traj.metadata["tail"] = traj.tail
    traj.metadata["max_tail"] = float(np.max(np.abs(traj.metadata["tail"])))
    return traj


def _tridiagonal(couplings):
    return np.diag(couplings, 1) + np.diag(couplings, -1)


def integrate_degenerate(
    spec: DegenerateSystemSpec, times, config: IntegratorConfig | None = None
) -> DegenerateTrajectory:
    """RK4 solution of the degenerate-level equations on an ``(N+1) x (M+1)`` grid.

    Each interlevel step ``n -> n +- 1`` carries ``omega f`` with the
    sublevel unchanged, or ``omega' f g`` with the sublevel changed by one.
    """
    config = config or IntegratorConfig()
    grid = as_time_grid(times)
    level = _tridiagonal(spec.level_couplings)
    sub = spec.omega * np.eye(spec.M + 1) + spec.omega_prime * _tridiagonal(
        spec.sublevel_couplings
    )

    def rhs(t, a):
        return 1j * (level @ a @ sub)

    y0 = np.zeros((spec.N + 1, spec.M + 1), dtype=complex)
    y0[0, 0] = 1.0
    states, info = _refine(rhs, y0, 0.0, grid.points, config)
    return DegenerateTrajectory(grid.points, states, "oracle", metadata=dict(info))


def convergence_ratios(spec: SystemSpec, t_end: float, step: float, halvings: int = 3):
    """Successive-difference ratios of fixed-step RK4 at ``t_end``.

    Runs step sizes ``step, step/2, ..., step/2**halvings`` and returns
    ``d_k / d_{k+1}`` where ``d_k`` is the max-norm change between the
    k-th and (k+1)-th run; fourth order means ratios near 16.
    """
    if not spec.closed:
        raise DomainError("convergence_ratios needs a closed ladder")
    rhs = _ladder_rhs(spec.couplings, spec.detunings)
    y0 = np.zeros(spec.level_count, dtype=complex)
    y0[0] = 1.0
    base = np.array([max(1, math.ceil(t_end / step))])
    finals = [
        rk4_fixed(rhs, y0, 0.0, np.array([t_end]), base, level)[-1]
        for level in range(halvings + 1)
    ]
    diffs = [float(np.max(np.abs(b - a))) for a, b in zip(finals, finals[1:])]
    return [d0 / d1 for d0, d1 in zip(diffs, diffs[1:])]
