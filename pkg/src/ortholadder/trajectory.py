"""Time grids and amplitude trajectories shared by all solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError

__all__ = ["TimeGrid", "as_time_grid", "AmplitudeTrajectory", "DegenerateTrajectory"]


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing, non-negative sample times."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1)
        if pts.size == 0:
            raise DomainError("a time grid needs at least one point")
        if not np.all(np.isfinite(pts)) or pts[0] < 0:
            raise DomainError("time points must be finite and >= 0")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("time points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, start: float, stop: float, num: int) -> "TimeGrid":
        return cls(np.linspace(start, stop, num))

    def __len__(self):
        return len(self.points)


def as_time_grid(times) -> TimeGrid:
    if isinstance(times, TimeGrid):
        return times
    return TimeGrid(np.atleast_1d(np.asarray(times, dtype=float)))


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    """Complex amplitudes ``a_n(t)``; rows are times, columns are levels."""

    times: np.ndarray
    amplitudes: np.ndarray
    method: str
    family: str = "custom"
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def level_count(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def mean_excitation(self) -> np.ndarray:
        """``<n>(t) = sum_n n rho_n(t)``."""
        return self.populations @ np.arange(self.level_count)

    @property
    def norm(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    @property
    def tail(self) -> np.ndarray:
        """Probability mass outside the stored levels, ``1 - sum rho_n``."""
        return np.array([1.0 - math.fsum(row) for row in self.populations])


@dataclass(frozen=True, eq=False)
class DegenerateTrajectory:
    """Amplitudes ``a_{n,m}(t)`` with shape ``(times, N+1, M+1)``."""

    times: np.ndarray
    amplitudes: np.ndarray
    method: str
    family: str = "degenerate-krawtchouk"
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def level_populations(self) -> np.ndarray:
        """Populations summed over sublevels, one column per level n."""
        return self.populations.sum(axis=2)

    @property
    def sublevel_populations(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    @property
    def level_count(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def mean_excitation(self) -> np.ndarray:
        return self.level_populations @ np.arange(self.level_count)

    @property
    def norm(self) -> np.ndarray:
        return self.populations.sum(axis=(1, 2))
