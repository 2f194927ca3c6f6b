"""Multilevel ladder families.

Every constructor maps family parameters to a :class:`SystemSpec` holding
the coupling ladder ``f_1 ... f_top``, the phase sequence ``s_0 ... s_top``
(detunings are ``eps_n = s_n - s_{n-1}``) and, where the family has one,
the scale constant ``r`` that relates the ladder to its classical
orthogonal-polynomial family.

Time is dimensionless throughout, in units of the inverse 0<->1 Rabi
frequency, so ``f_1 == 1`` for every named family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, UnsupportedFamilyError

__all__ = [
    "SystemSpec",
    "DegenerateSystemSpec",
    "Family",
    "FAMILIES",
    "jacobi_system",
    "gegenbauer_system",
    "jacobi_antisymmetric_system",
    "krawtchouk_system",
    "christoffel_legendre_system",
    "christoffel_legendre_norms",
    "legendre_function_system",
    "custom_system",
    "degenerate_system",
    "build_system",
    "system_from_dict",
]


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """An immutable ladder ``0 <-> 1 <-> ... <-> top``.

    ``couplings[k]`` is ``f_{k+1}``; ``phases[n]`` is ``s_n``.  A closed
    ladder has ``f`` identically zero above its top level; an open one is a
    truncation of an infinite family at ``n_max = level_count - 1``.
    """

    family: str
    params: Mapping[str, Any]
    couplings: np.ndarray
    phases: np.ndarray
    scale: float | None
    closed: bool

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        object.__setattr__(self, "couplings", _frozen(self.couplings))
        object.__setattr__(self, "phases", _frozen(self.phases))
        if self.couplings.ndim != 1 or len(self.couplings) < 1:
            raise DomainError("a ladder needs at least one coupling")
        if len(self.phases) != len(self.couplings) + 1:
            raise DomainError(
                f"{len(self.couplings)} couplings need {len(self.couplings) + 1} "
                f"phases, got {len(self.phases)}"
            )
        if not np.all(np.isfinite(self.couplings)) or np.any(self.couplings <= 0):
            raise DomainError("couplings must be finite and positive")
        if not np.all(np.isfinite(self.phases)):
            raise DomainError("phases must be finite")

    @property
    def level_count(self) -> int:
        return len(self.phases)

    @property
    def n_max(self) -> int:
        return len(self.phases) - 1

    @property
    def detunings(self) -> np.ndarray:
        """``eps_1 ... eps_top`` with ``eps_n = s_n - s_{n-1}``."""
        return np.diff(self.phases)

    @property
    def resonant(self) -> bool:
        return bool(np.all(self.phases == 0.0))

    def coupling(self, n: int) -> float:
        """``f_n``; zero at ``n == level_count`` for a closed ladder."""
        if 1 <= n < self.level_count:
            return float(self.couplings[n - 1])
        if n == self.level_count and self.closed:
            return 0.0
        raise DomainError(f"f_{n} is not stored in this {self.family} spec")

    def resized(self, n_max: int) -> "SystemSpec":
        """Rebuild an open family with a different truncation level."""
        if self.closed:
            raise DomainError(f"closed {self.family} ladders cannot be resized")
        family = FAMILIES.get(self.family)
        if family is None or "n_max" not in family.parameters:
            raise UnsupportedFamilyError(f"{self.family} spec cannot be resized")
        params = dict(self.params)
        params["n_max"] = int(n_max)
        return family.build(**params)

    def truncated(self) -> "SystemSpec":
        """The same ladder with ``f`` forced to zero above the top level."""
        return replace(self, closed=True)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "closed": self.closed,
            "level_count": self.level_count,
            "scale": self.scale,
            "couplings": [float(x) for x in self.couplings],
            "phases": [float(x) for x in self.phases],
        }


def _plain(value):
    if isinstance(value, (list, tuple, np.ndarray)):
        return [float(x) for x in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


@dataclass(frozen=True)
class DegenerateSystemSpec:
    """Ladder of ``N+1`` levels, each split into ``M+1`` coupled sublevels.

    ``omega`` drives the pure interlevel transitions, ``omega_prime`` the
    transitions that also change the sublevel by one.  Both coupling
    functions are of the Krawtchouk form ``sqrt(k (K-k+1) / K)``.
    """

    N: int
    M: int
    omega: float = 1.0
    omega_prime: float = 0.0
    family: str = field(default="degenerate-krawtchouk", init=False)

    def __post_init__(self):
        for name in ("N", "M"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"{name} must be an integer")
            if value < 1:
                raise DomainError(f"{name} must be >= 1, got {value}")
        if not (self.omega >= 0 and self.omega_prime >= 0):
            raise DomainError("Rabi frequencies must be non-negative")

    @property
    def level_couplings(self) -> np.ndarray:
        n = np.arange(1, self.N + 1)
        return np.sqrt(n * (self.N - n + 1) / self.N)

    @property
    def sublevel_couplings(self) -> np.ndarray:
        m = np.arange(1, self.M + 1)
        return np.sqrt(m * (self.M - m + 1) / self.M)

    @property
    def params(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "omega": self.omega,
            "omega_prime": self.omega_prime,
        }

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params}


# ---------------------------------------------------------------------------
# Family constructors


def _check_n_max(n_max):
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    return int(n_max)


def _jacobi_recurrence(alpha, beta, n_max):
    """Orthonormal Jacobi recurrence ``x p_n = a_{n+1} p_{n+1} + A_n p_n + a_n p_{n-1}``.

    Returns ``(a_1..a_nmax, A_0..A_nmax)``.
    """
    ab = alpha + beta
    off = np.empty(n_max)
    for n in range(1, n_max + 1):
        c = 2 * n + ab
        if n == 1:
            # the (n+a+b)/(2n+a+b-1) factor cancels; keeps a+b = -1 finite
            sq = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        else:
            sq = 4 * n * (n + alpha) * (n + beta) * (n + ab) / (c * c * (c - 1) * (c + 1))
        off[n - 1] = math.sqrt(sq)
    diag = np.empty(n_max + 1)
    diag[0] = (beta - alpha) / (ab + 2)
    for n in range(1, n_max + 1):
        c = 2 * n + ab
        diag[n] = (beta * beta - alpha * alpha) / (c * (c + 2))
    return off, diag


def _jacobi_scale(alpha, beta):
    ab = alpha + beta
    return (ab + 2) / 2 * math.sqrt((ab + 3) / ((alpha + 1) * (beta + 1)))


def jacobi_system(alpha: float, beta: float, n_max: int) -> SystemSpec:
    """Jacobi ladder: ``f_n = r a_n``, ``s_n = -r A_n`` from the orthonormal
    Jacobi recurrence, with ``r`` chosen so that ``f_1 = 1``.

    Accepts any ``alpha, beta > -1``.
    """
    n_max = _check_n_max(n_max)
    alpha, beta = float(alpha), float(beta)
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"need alpha > -1 and beta > -1, got ({alpha}, {beta})")
    r = _jacobi_scale(alpha, beta)
    off, diag = _jacobi_recurrence(alpha, beta, n_max)
    return SystemSpec(
        family="jacobi",
        params={"alpha": alpha, "beta": beta, "n_max": n_max},
        couplings=r * off,
        phases=-r * diag,
        scale=r,
        closed=False,
    )


def gegenbauer_system(lam: float, n_max: int) -> SystemSpec:
    """Jacobi ladder with ``alpha = beta = lam - 1/2``.

    ``lam = 1`` is the equal-Rabi ladder (``f_n = 1``); ``lam = 0`` gives
    ``f_1 = 1, f_n = 1/sqrt(2)`` for ``n >= 2``.
    """
    return jacobi_system(lam - 0.5, lam - 0.5, n_max)


def jacobi_antisymmetric_system(alpha: float, n_max: int) -> SystemSpec:
    """The ``beta = -alpha`` Jacobi ladder, where only ``0 <-> 1`` is detuned."""
    n_max = _check_n_max(n_max)
    alpha = float(alpha)
    if not abs(alpha) < 1:
        raise DomainError(f"need |alpha| < 1, got {alpha}")
    one_minus = 1 - alpha * alpha
    n = np.arange(1, n_max + 1, dtype=float)
    couplings = np.sqrt(3 * (n * n - alpha * alpha) / (one_minus * (4 * n * n - 1)))
    r = math.sqrt(3 / one_minus)
    phases = np.zeros(n_max + 1)
    phases[0] = alpha * r
    return SystemSpec(
        family="jacobi-antisymmetric",
        params={"alpha": alpha, "n_max": n_max},
        couplings=couplings,
        phases=phases,
        scale=r,
        closed=False,
    )


def krawtchouk_system(N: int, epsilon: float = 0.0) -> SystemSpec:
    """Closed ``N+1``-level ladder ``f_n = sqrt(n (N-n+1) / N)``, uniform detuning.

    The scale ``2/sqrt(N)`` maps the ladder onto the symmetric (p = 1/2)
    Krawtchouk recurrence, whose nodes are ``k - N/2``.
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    epsilon = float(epsilon)
    n = np.arange(1, N + 1, dtype=float)
    return SystemSpec(
        family="krawtchouk",
        params={"N": N, "epsilon": epsilon},
        couplings=np.sqrt(n * (N - n + 1) / N),
        phases=epsilon * np.arange(N + 1, dtype=float),
        scale=2 / math.sqrt(N),
        closed=True,
    )


def christoffel_legendre_norms(b: float, n_max: int):
    """``(kappa_0..kappa_{n_max+1}, d_0..d_{n_max+1})`` for the Christoffel-Legendre family.

    ``kappa_n = P_{n+1}(b) / P_n(b)`` and ``d_n = sqrt(2 b / ((n+1) kappa_n))``.
    """
    b = float(b)
    if not b >= 1:
        raise DomainError(f"need b >= 1, got {b}")
    kappa = np.empty(n_max + 2)
    kappa[0] = b
    for k in range(1, n_max + 2):
        kappa[k] = ((2 * k + 1) * b - k / kappa[k - 1]) / (k + 1)
    norms = np.sqrt(2 * b / ((np.arange(n_max + 2) + 1) * kappa))
    return kappa, norms


def christoffel_legendre_system(b: float, n_max: int) -> SystemSpec:
    """Ladder generated by Legendre polynomials reweighted with ``(b - x) / b``."""
    n_max = _check_n_max(n_max)
    kappa, d = christoffel_legendre_norms(b, n_max)
    r = 3 * d[1] / d[0]
    n = np.arange(1, n_max + 1)
    couplings = r * n / (2 * n + 1) * d[:-2] / d[1:-1]
    m = np.arange(n_max + 1)
    phases = r * ((m + 1) / (2 * m + 1) * kappa[:-1] - (m + 2) / (2 * m + 3) * kappa[1:])
    return SystemSpec(
        family="christoffel-legendre",
        params={"b": float(b), "n_max": n_max},
        couplings=couplings,
        phases=phases,
        scale=float(r),
        closed=False,
    )


def legendre_function_system(lam: float, N: int) -> SystemSpec:
    """Closed resonant ladder from the Legendre-function coupling law.

    ``f_n = |n (2 lam + n - 1)(lam + 1) / (2 (lam + n - 1)(lam + n))|^(1/2)``
    for ``1 <= n <= N`` and ``f_{N+1} = 0``.  Needs ``lam < -1`` and
    ``N <= floor(|lam|)``; for integer ``lam`` the coupling at
    ``n = -lam`` is singular, so there ``N < |lam|``.
    """
    lam = float(lam)
    if not lam < -1:
        raise DomainError(f"need lambda < -1, got {lam}")
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    if N > math.floor(abs(lam)):
        raise DomainError(f"need N <= floor(|lambda|) = {math.floor(abs(lam))}, got {N}")
    n = np.arange(1, N + 1, dtype=float)
    denom = 2 * (lam + n - 1) * (lam + n)
    if np.any(denom == 0):
        raise DomainError(f"coupling is singular at n = {-lam:g}; use N < {abs(lam):g}")
    couplings = np.sqrt(np.abs(n * (2 * lam + n - 1) * (lam + 1) / denom))
    return SystemSpec(
        family="legendre-function",
        params={"lambda": lam, "N": N},
        couplings=couplings,
        phases=np.zeros(N + 1),
        scale=None,
        closed=True,
    )


def custom_system(
    couplings: Sequence[float],
    detunings: Sequence[float] | None = None,
    closed: bool = True,
    scale: float | None = None,
) -> SystemSpec:
    """Arbitrary ladder; phases are rebuilt as ``s_0 = 0, s_n = sum eps_k``."""
    couplings = np.asarray(couplings, dtype=float)
    if couplings.ndim != 1 or len(couplings) == 0:
        raise DomainError("couplings must be a nonempty sequence")
    if detunings is None:
        detunings = np.zeros(len(couplings))
    detunings = np.asarray(detunings, dtype=float)
    if detunings.shape != couplings.shape:
        raise DomainError(
            f"{len(couplings)} couplings need {len(couplings)} detunings, "
            f"got {len(detunings)}"
        )
    if np.any(couplings <= 0):
        raise DomainError("couplings must be positive")
    phases = np.concatenate([[0.0], np.cumsum(detunings)])
    return SystemSpec(
        family="custom",
        params={
            "couplings": couplings.tolist(),
            "detunings": detunings.tolist(),
            "closed": bool(closed),
            "scale": scale,
        },
        couplings=couplings,
        phases=phases,
        scale=None if scale is None else float(scale),
        closed=bool(closed),
    )


def degenerate_system(N: int, M: int, omega: float = 1.0, omega_prime: float = 0.0):
    return DegenerateSystemSpec(N=N, M=M, omega=float(omega), omega_prime=float(omega_prime))


# ---------------------------------------------------------------------------
# Registry


def _legendre_function_from_params(N, **kwargs):
    # "lambda" is a keyword, so it cannot be a named parameter
    if "lambda" not in kwargs:
        raise DomainError("legendre-function needs a 'lambda' parameter")
    return legendre_function_system(kwargs["lambda"], N)


@dataclass(frozen=True)
class Family:
    name: str
    builder: Callable[..., Any]
    parameters: Mapping[str, str]
    methods: tuple[str, ...]
    realizes: str
    example: Mapping[str, Any]

    def build(self, **params):
        unknown = set(params) - set(self.parameters)
        if unknown:
            raise DomainError(
                f"unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}"
            )
        return self.builder(**params)


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in [
        Family(
            "krawtchouk",
            krawtchouk_system,
            {"N": "integer >= 1", "epsilon": "real detuning (0 = resonant)"},
            ("analytic", "spectral", "oracle"),
            "Krawtchouk polynomials of a discrete variable (finite equidistant ladder)",
            {"N": 4, "epsilon": 0.0},
        ),
        Family(
            "jacobi",
            lambda alpha, beta, n_max=40: jacobi_system(alpha, beta, n_max),
            {"alpha": "real > -1", "beta": "real > -1", "n_max": "truncation, integer >= 1"},
            ("analytic", "oracle"),
            "Jacobi polynomials P^(alpha,beta); Kummer-function amplitudes",
            {"alpha": 1.0, "beta": 2.0, "n_max": 30},
        ),
        Family(
            "gegenbauer",
            lambda lam, n_max=40: gegenbauer_system(lam, n_max),
            {"lam": "real > -1/2 (alpha = beta = lam - 1/2)", "n_max": "truncation, integer >= 1"},
            ("analytic", "oracle"),
            "Gegenbauer polynomials C^(lam) as the symmetric Jacobi case",
            {"lam": 1.0, "n_max": 30},
        ),
        Family(
            "jacobi-antisymmetric",
            lambda alpha, n_max=40: jacobi_antisymmetric_system(alpha, n_max),
            {"alpha": "real, |alpha| < 1 (beta = -alpha)", "n_max": "truncation, integer >= 1"},
            ("analytic", "oracle"),
            "Jacobi polynomials with beta = -alpha; only 0<->1 is detuned",
            {"alpha": 0.5, "n_max": 30},
        ),
        Family(
            "christoffel-legendre",
            lambda b, n_max=40: christoffel_legendre_system(b, n_max),
            {"b": "real >= 1", "n_max": "truncation, integer >= 1"},
            ("analytic", "oracle"),
            "Christoffel-Legendre polynomials, weight (b - x)/b; spherical Bessel amplitudes",
            {"b": 1.5, "n_max": 40},
        ),
        Family(
            "legendre-function",
            _legendre_function_from_params,
            {"lambda": "real < -1", "N": "integer, 1 <= N <= floor(|lambda|)"},
            ("spectral", "oracle"),
            "Legendre functions of the first kind (finite resonant ladder)",
            {"lambda": -6.0, "N": 5},
        ),
        Family(
            "custom",
            custom_system,
            {
                "couplings": "list of positive reals f_1..f_N",
                "detunings": "list of reals eps_1..eps_N (default zeros)",
                "closed": "bool (default true)",
                "scale": "optional real r for the common-polynomial check",
            },
            ("spectral", "oracle"),
            "arbitrary finite ladder solved by truncated orthogonal polynomials",
            {"couplings": [1.0, 1.0, 1.0], "detunings": [0.0, 0.0, 0.0]},
        ),
        Family(
            "degenerate-krawtchouk",
            degenerate_system,
            {
                "N": "integer >= 1 (levels 0..N)",
                "M": "integer >= 1 (sublevels 0..M)",
                "omega": "real >= 0",
                "omega_prime": "real >= 0",
            },
            ("analytic", "oracle"),
            "Krawtchouk ladder of degenerate levels with sublevel-changing transitions",
            {"N": 2, "M": 1, "omega": 1.0, "omega_prime": 0.5},
        ),
    ]
}


def build_system(family: str, **params):
    """Construct a spec by registry name."""
    try:
        entry = FAMILIES[family]
    except KeyError:
        raise UnsupportedFamilyError(
            f"unknown family {family!r}; supported: {', '.join(FAMILIES)}"
        ) from None
    try:
        return entry.build(**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {family}: {exc}") from None


def system_from_dict(doc: Mapping[str, Any]):
    """Inverse of ``SystemSpec.to_dict`` / ``DegenerateSystemSpec.to_dict``."""
    if "family" not in doc:
        raise DomainError("system description needs a 'family' entry")
    params = dict(doc.get("params", {}))
    spec = build_system(doc["family"], **params)
    if isinstance(spec, SystemSpec) and doc.get("closed") and not spec.closed:
        spec = spec.truncated()
    return spec
