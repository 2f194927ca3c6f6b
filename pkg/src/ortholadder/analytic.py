"""Closed-form amplitudes for the solvable ladder families.

All evaluators return amplitudes in the frame of the master equation

    -i da_n/dt = f_{n+1} e^{-i eps_{n+1} t} a_{n+1} + f_n e^{i eps_n t} a_{n-1}

with ``a_n(0) = delta_{n,0}``, so they can be compared with the direct
integrator in :mod:`ortholadder.oracle` on full complex amplitudes.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError, UnsupportedFamilyError
from .specfun import (
    bessel_j,
    binomial,
    krawtchouk_poly,
    kummer_1f1,
    log_pochhammer,
    spherical_jn,
)
from .systems import DegenerateSystemSpec, SystemSpec, christoffel_legendre_norms
from .trajectory import AmplitudeTrajectory, DegenerateTrajectory, as_time_grid

__all__ = [
    "jacobi_amplitudes",
    "krawtchouk_amplitudes",
    "krawtchouk_excitation",
    "krawtchouk_populations",
    "degenerate_krawtchouk_amplitudes",
    "christoffel_legendre_amplitudes",
    "bessel_populations",
    "analytic_trajectory",
]


def _open_trajectory(times, amplitudes, family, spec):
    traj = AmplitudeTrajectory(times, amplitudes, "analytic", family, {})
    tail = traj.tail
    traj.metadata.update(
        {"params": dict(spec.params), "tail": tail, "max_tail": float(np.max(np.abs(tail)))}
    )
    return traj


def _with_levels(spec: SystemSpec, n_max):
    if spec.closed:
        raise UnsupportedFamilyError(
            f"the closed form describes the infinite {spec.family} ladder, not a truncation"
        )
    if n_max is None or n_max == spec.n_max:
        return spec
    return spec.resized(n_max)


def jacobi_amplitudes(spec: SystemSpec, times, n_max: int | None = None) -> AmplitudeTrajectory:
    """Kummer-function amplitudes of a Jacobi ladder.

    ``a_n(t) = (2irt)^n C_n e^{it(r + s_n)} 1F1(n+a+1; 2n+a+b+2; -2irt)`` with
    ``C_n^2 = (a+1)_n (b+1)_n / ((a+b+2)_{2n} (n+a+b+1)_n n!)``.  The
    prefactor is assembled in log space so large ``n`` does not overflow.
    """
    if spec.family == "jacobi":
        alpha, beta = spec.params["alpha"], spec.params["beta"]
    elif spec.family == "jacobi-antisymmetric":
        alpha = spec.params["alpha"]
        beta = -alpha
    else:
        raise UnsupportedFamilyError(f"jacobi_amplitudes cannot evaluate {spec.family}")
    spec = _with_levels(spec, n_max)
    grid = as_time_grid(times)
    r = spec.scale
    levels = spec.level_count

    log_coef = np.zeros(levels)
    for n in range(1, levels):
        log_coef[n] = 0.5 * (
            log_pochhammer(alpha + 1, n)
            + log_pochhammer(beta + 1, n)
            - log_pochhammer(alpha + beta + 2, 2 * n)
            - log_pochhammer(n + alpha + beta + 1, n)
            - math.lgamma(n + 1)
        )

    amps = np.zeros((len(grid), levels), dtype=complex)
    for i, t in enumerate(grid.points):
        if t == 0:
            amps[i, 0] = 1.0
            continue
        x = 2 * r * t
        for n in range(levels):
            magnitude = math.exp(n * math.log(x) + log_coef[n])
            if magnitude == 0.0:
                break
            hyp = kummer_1f1(n + alpha + 1, 2 * n + alpha + beta + 2, -1j * x)
            phase = 1j**n * cmath.exp(1j * t * (r + spec.phases[n]))
            amps[i, n] = magnitude * phase * hyp
    return _open_trajectory(grid.points, amps, spec.family, spec)


def krawtchouk_excitation(N: int, epsilon: float, times) -> np.ndarray:
    """``y(t) = sin^2(t sqrt((1+sigma)/N)) / (1+sigma)`` with ``sigma = N eps^2 / 4``."""
    t = as_time_grid(times).points
    sigma = N * epsilon**2 / 4
    return np.sin(t * math.sqrt((1 + sigma) / N)) ** 2 / (1 + sigma)


def krawtchouk_populations(N: int, epsilon: float, times) -> np.ndarray:
    """Binomial populations ``C(N,n) y^n (1-y)^(N-n)``."""
    y = krawtchouk_excitation(N, epsilon, times)[:, None]
    n = np.arange(N + 1)
    coeffs = np.array([binomial(N, k) for k in n])
    return coeffs * y**n * (1 - y) ** (N - n)


def krawtchouk_amplitudes(N: int, epsilon: float, times) -> AmplitudeTrajectory:
    """Elementary-function amplitudes of the Krawtchouk ladder.

    The square roots ``y^(1/2)``, ``(1-(1+sigma)y)^(1/2)`` and
    ``(sigma y)^(1/2)`` are taken on the branch that is analytic in t, i.e.
    ``sin(wt)/sqrt(1+sigma)``, ``cos(wt)`` and ``(eps sqrt(N)/2) sin(wt)/sqrt(1+sigma)``,
    and level n carries the factor ``i^n``.  With principal roots and no
    ``i^n`` only the populations would be right.
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    grid = as_time_grid(times)
    t = grid.points[:, None]
    sigma = N * epsilon**2 / 4
    w = math.sqrt((1 + sigma) / N)
    root_y = np.sin(w * t) / math.sqrt(1 + sigma)
    stay = np.cos(w * t) + 1j * (epsilon * math.sqrt(N) / 2) * root_y
    n = np.arange(N + 1)
    coeffs = np.sqrt([binomial(N, k) for k in n])
    amps = coeffs * (1j * root_y) ** n * stay ** (N - n) * np.exp(1j * t * epsilon * (n - N / 2))
    return AmplitudeTrajectory(
        grid.points,
        amps,
        "analytic",
        "krawtchouk",
        {"params": {"N": N, "epsilon": epsilon}, "tail": np.zeros(len(grid)), "max_tail": 0.0},
    )


def degenerate_krawtchouk_amplitudes(spec: DegenerateSystemSpec, times) -> DegenerateTrajectory:
    """Krawtchouk-sum amplitudes of the degenerate-level ladder.

    ``a_{n,m} = i^n 2^{m-M} sqrt(C(N,n)/C(M,m)) sum_j k_m(j, M) C(M,j) sin^n(tau_j) cos^(N-n)(tau_j)``
    with ``tau_j = (t/sqrt(N)) (omega + omega' (2j - M)/sqrt(M))`` and ``k_m`` the
    p = 1/2 polynomial of :func:`~ortholadder.specfun.krawtchouk_poly`.
    """
    grid = as_time_grid(times)
    N, M = spec.N, spec.M
    j = np.arange(M + 1)
    n = np.arange(N + 1)
    m = np.arange(M + 1)
    kpoly = np.array([[krawtchouk_poly(mm, jj, M, 0.5) for jj in j] for mm in m])
    weights = kpoly * np.array([binomial(M, jj) for jj in j])  # (m, j)

    tau = grid.points[:, None] / math.sqrt(N) * (
        spec.omega + spec.omega_prime * (2 * j - M) / math.sqrt(M)
    )  # (t, j)
    trig = np.sin(tau)[:, :, None] ** n * np.cos(tau)[:, :, None] ** (N - n)  # (t, j, n)
    sums = np.einsum("mj,tjn->tnm", weights, trig)

    prefactor = (
        (1j**n)[:, None]
        * (2.0 ** (m - M))[None, :]
        * np.sqrt(
            np.array([binomial(N, k) for k in n])[:, None]
            / np.array([binomial(M, k) for k in m])[None, :]
        )
    )
    amps = prefactor[None, :, :] * sums
    return DegenerateTrajectory(grid.points, amps, "analytic", metadata={"params": spec.params})


def christoffel_legendre_amplitudes(
    spec: SystemSpec, times, n_max: int | None = None
) -> AmplitudeTrajectory:
    """Half-integer Bessel amplitudes of the Christoffel-Legendre ladder.

    ``a_n = i^n sqrt(pi/2) (d_0/d_n) e^{i s_n t} (rt)^(-1/2) [J_{n+1/2}(rt) - i J_{n+3/2}(rt)/kappa_n]``,
    evaluated as ``i^n (d_0/d_n) e^{i s_n t} [j_n(rt) - i j_{n+1}(rt)/kappa_n]`` with spherical
    Bessel functions, which carries the ``t -> 0`` limit without a 0/0.
    """
    if spec.family != "christoffel-legendre":
        raise UnsupportedFamilyError(
            f"christoffel_legendre_amplitudes cannot evaluate {spec.family}"
        )
    spec = _with_levels(spec, n_max)
    grid = as_time_grid(times)
    levels = spec.level_count
    kappa, d = christoffel_legendre_norms(spec.params["b"], spec.n_max)
    r = spec.scale

    amps = np.zeros((len(grid), levels), dtype=complex)
    for i, t in enumerate(grid.points):
        x = r * t
        bessel = [spherical_jn(n, x) for n in range(levels + 1)]
        for n in range(levels):
            amps[i, n] = (
                1j**n
                * (d[0] / d[n])
                * cmath.exp(1j * spec.phases[n] * t)
                * (bessel[n] - 1j * bessel[n + 1] / kappa[n])
            )
    return _open_trajectory(grid.points, amps, spec.family, spec)


def bessel_populations(n_max: int, times) -> np.ndarray:
    """``J_n(2t)^2 + J_{n+1}(2t)^2``: populations of the ``alpha = -beta = 1/2`` ladder."""
    t = as_time_grid(times).points
    out = np.empty((len(t), n_max + 1))
    for i, ti in enumerate(t):
        values = [bessel_j(k, 2 * ti) for k in range(n_max + 2)]
        for n in range(n_max + 1):
            out[i, n] = values[n] ** 2 + values[n + 1] ** 2
    return out


def analytic_trajectory(system, times, n_max: int | None = None):
    """Dispatch to the closed form that matches ``system``'s family."""
    if isinstance(system, DegenerateSystemSpec):
        return degenerate_krawtchouk_amplitudes(system, times)
    family = system.family
    if family == "krawtchouk":
        return krawtchouk_amplitudes(system.params["N"], system.params["epsilon"], times)
    if family in ("jacobi", "jacobi-antisymmetric"):
        return jacobi_amplitudes(system, times, n_max)
    if family == "christoffel-legendre":
        return christoffel_legendre_amplitudes(system, times, n_max)
    raise UnsupportedFamilyError(f"no closed-form solution for family {family!r}")
