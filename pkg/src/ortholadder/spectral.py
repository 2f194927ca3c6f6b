"""Exact solution of finite ladders by truncated orthogonal polynomials.

A closed ladder with couplings ``f_n`` and phases ``s_n`` evolves, in the
frame rotated by ``e^{-i s_n t}``, under the symmetric tridiagonal matrix

    H = diag(-s_0, ..., -s_N) + offdiag(f_1, ..., f_N),

so that ``a_n(t) = e^{i s_n t} sum_k sigma_k p_n(L_k) e^{i L_k t}``.  The
frequencies ``L_k`` are the eigenvalues of H (the zeros of ``p_{N+1}``),
``sigma_k`` is the squared first component of the k-th eigenvector and
``p_n(L_k) = v_{n,k} / v_{0,k}``.  The polynomials obey
``f_{n+1} p_{n+1} + f_n p_{n-1} - s_n p_n = L p_n`` with ``p_0 = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, UnsupportedFamilyError
from .systems import SystemSpec
from .trajectory import AmplitudeTrajectory, as_time_grid

__all__ = [
    "tridiagonal_eigh",
    "SpectralDecomposition",
    "build_jacobi_matrix",
    "decompose",
    "spectral_amplitudes",
    "spectral_solve",
    "CommonPolynomialReport",
    "common_polynomial_roots",
    "check_common_polynomial_map",
]


def tridiagonal_eigh(diag, off, max_iter: int = 60):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    Implicit QL with Wilkinson shifts, accumulating the rotations into the
    eigenvector matrix.  Returns ascending eigenvalues and the matching
    orthonormal eigenvectors as columns, each with a non-negative first
    component.
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = off
    z = np.eye(n)

    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > max_iter:
                raise ConvergenceError(
                    f"QL iteration stalled on eigenvalue {l}", index=l, iterations=iterations
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    d = d[order]
    z = z[:, order]
    z *= np.where(z[0] < 0, -1.0, 1.0)
    return d, z


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Frequencies, weights and polynomial table of a closed ladder.

    ``poly_table[n, k]`` is ``p_n(eigenvalues[k])``.  ``phases`` are the
    ``s_n`` that undo the rotating frame (``-diag`` of the matrix).
    """

    eigenvalues: np.ndarray
    weights: np.ndarray
    poly_table: np.ndarray
    phases: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def level_count(self) -> int:
        return len(self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "weights": [float(x) for x in self.weights],
            "poly_table": [[float(x) for x in row] for row in self.poly_table],
            "phases": [float(x) for x in self.phases],
        }


def build_jacobi_matrix(spec: SystemSpec) -> np.ndarray:
    """Dense symmetric tridiagonal generator of a closed ladder."""
    if not spec.closed:
        raise DomainError(
            f"{spec.family} spec is open; truncate it explicitly with spec.truncated()"
        )
    return (
        np.diag(-np.asarray(spec.phases, dtype=float))
        + np.diag(spec.couplings, 1)
        + np.diag(spec.couplings, -1)
    )


def decompose(matrix) -> SpectralDecomposition:
    """Golub-Welsch decomposition of a symmetric tridiagonal matrix."""
    h = np.asarray(matrix, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError("decompose needs a square matrix")
    size = h.shape[0]
    if size < 2:
        raise DomainError("decompose needs at least two levels")
    if np.any(np.triu(h, 2)) or np.any(np.tril(h, -2)):
        raise DomainError("matrix is not tridiagonal")
    off = np.diag(h, 1)
    if not np.array_equal(off, np.diag(h, -1)):
        raise DomainError("matrix is not symmetric")
    if np.any(off == 0):
        idx = int(np.flatnonzero(off == 0)[0]) + 1
        raise DomainError(f"zero coupling f_{idx}: the ladder decouples, split it first")
    diag = np.diag(h).copy()

    values, vectors = tridiagonal_eigh(diag, off)
    first = vectors[0]
    weights = first**2
    table = vectors / first
    return SpectralDecomposition(values, weights, table, -diag)


def spectral_amplitudes(
    decomp: SpectralDecomposition, times, frame: str = "ladder"
) -> AmplitudeTrajectory:
    """``a_n(t) = e^{i s_n t} sum_k sigma_k p_n(L_k) e^{i L_k t}``.

    ``frame="rotating"`` drops the ``e^{i s_n t}`` factor; the two frames
    coincide for resonant ladders.
    """
    if frame not in ("ladder", "rotating"):
        raise DomainError(f"frame must be 'ladder' or 'rotating', got {frame!r}")
    grid = as_time_grid(times)
    t = grid.points
    oscillation = np.exp(1j * np.outer(t, decomp.eigenvalues))  # (t, k)
    amps = oscillation @ (decomp.poly_table * decomp.weights).T  # (t, n)
    if frame == "ladder":
        amps = amps * np.exp(1j * np.outer(t, decomp.phases))
    return AmplitudeTrajectory(
        t, amps, "spectral", decomp.metadata.get("family", "custom"), {"frame": frame}
    )


def spectral_solve(spec: SystemSpec, times) -> tuple[SpectralDecomposition, AmplitudeTrajectory]:
    decomp = decompose(build_jacobi_matrix(spec))
    decomp.metadata["family"] = spec.family
    traj = spectral_amplitudes(decomp, times)
    traj.metadata["params"] = dict(spec.params)
    return decomp, traj


@dataclass(frozen=True)
class CommonPolynomialReport:
    scale: float
    eigenvalues: np.ndarray
    common_roots: np.ndarray
    max_residual: float

    def to_dict(self) -> dict:
        return {
            "scale": self.scale,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "common_roots": [float(x) for x in self.common_roots],
            "max_residual": self.max_residual,
        }


def _monic_values(x, off2, diag):
    """Monic ``P_{N+1}(x)`` and its derivative from the recurrence."""
    prev, cur = 0.0, 1.0
    dprev, dcur = 0.0, 0.0
    for n in range(len(diag)):
        c2 = off2[n - 1] if n > 0 else 0.0
        nxt = (x - diag[n]) * cur - c2 * prev
        dnxt = cur + (x - diag[n]) * dcur - c2 * dprev
        prev, cur = cur, nxt
        dprev, dcur = dcur, dnxt
    return cur, dcur


def common_polynomial_roots(spec: SystemSpec) -> np.ndarray:
    """Zeros of the degree-``level_count`` common polynomial of ``spec``'s family.

    The common orthonormal polynomials satisfy
    ``x p_n = (f_{n+1}/r) p_{n+1} - (s_n/r) p_n + (f_n/r) p_{n-1}``.  Their
    monic form is expanded in the power basis, its roots taken from
    ``numpy.roots`` and polished by Newton steps on the recurrence; no
    tridiagonal eigen-solve is involved.
    """
    r = spec.scale
    if r is None or not np.isreal(r):
        raise UnsupportedFamilyError(
            f"family {spec.family!r} has no real scale constant for the common-polynomial map"
        )
    off2 = (np.asarray(spec.couplings) / r) ** 2
    diag = -np.asarray(spec.phases) / r
    poly_prev = np.polynomial.Polynomial([0.0])
    poly = np.polynomial.Polynomial([1.0])
    x = np.polynomial.Polynomial([0.0, 1.0])
    for n in range(len(diag)):
        c2 = off2[n - 1] if n > 0 else 0.0
        poly_prev, poly = poly, (x - diag[n]) * poly - c2 * poly_prev
    roots = np.sort(np.real(np.roots(poly.coef[::-1])))
    for _ in range(4):
        for k, root in enumerate(roots):
            value, slope = _monic_values(root, off2, diag)
            if slope != 0:
                roots[k] = root - value / slope
    return np.sort(roots)


def check_common_polynomial_map(
    decomp: SpectralDecomposition, spec: SystemSpec
) -> CommonPolynomialReport:
    """Compare ``L_k`` with ``r R_k``, ``R_k`` the zeros of the common polynomial."""
    roots = common_polynomial_roots(spec)
    if len(roots) != decomp.level_count:
        raise DomainError("decomposition and spec have different sizes")
    r = float(spec.scale)
    residual = float(np.max(np.abs(decomp.eigenvalues - r * roots)))
    return CommonPolynomialReport(r, decomp.eigenvalues.copy(), roots, residual)
