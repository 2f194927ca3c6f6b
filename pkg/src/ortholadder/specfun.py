"""Special-function kernels used by the closed-form amplitude formulas.

Everything here is scalar, pure and free of module state.  Functions raise
:class:`~ortholadder.errors.DomainError` outside their declared domain and
never hand back NaN or infinity silently.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, EvaluationError, OutOfRangeError

__all__ = [
    "pochhammer",
    "log_pochhammer",
    "kummer_1f1",
    "bessel_j",
    "spherical_jn",
    "legendre_p",
    "legendre_ratio",
    "krawtchouk_poly",
    "binomial",
    "KUMMER_MAX_ABS_Z",
    "KUMMER_RTOL",
    "KUMMER_TERM_CAP",
    "KUMMER_GIVE_UP",
]

KUMMER_MAX_ABS_Z = 200.0
KUMMER_RTOL = 1e-13
KUMMER_TERM_CAP = 10_000
KUMMER_GIVE_UP = 1e-10

BINOMIAL_EXACT_MAX_N = 1000

_EPS = np.finfo(float).eps
# Downward recurrences are rescaled when values leave this band.
_BIG = 1e250


def _is_integer(x: float) -> bool:
    return float(x).is_integer()


def _require_int(name, value, minimum=0):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``a (a+1) ... (a+n-1)``; 1 for ``n == 0``."""
    n = _require_int("n", n)
    result = 1.0
    for k in range(n):
        result *= a + k
    if not math.isfinite(result):
        raise OutOfRangeError(f"pochhammer({a}, {n}) overflows a double")
    return result


def log_pochhammer(a: float, n: int) -> float:
    """``log((a)_n)`` for ``a > 0``, via log-gamma."""
    n = _require_int("n", n)
    if a <= 0:
        raise DomainError(f"log_pochhammer needs a > 0, got {a}")
    return math.lgamma(a + n) - math.lgamma(a)


# ---------------------------------------------------------------------------
# Confluent hypergeometric function


def _neumaier_add(total, comp, x):
    t = total + x
    if abs(total) >= abs(x):
        comp += (total - t) + x
    else:
        comp += (x - t) + total
    return t, comp


def _kummer_series(a, b, z, rtol, max_terms):
    """Ascending series with compensated summation.

    Returns ``(value, rounding_bound)``.  The bound accounts for the
    relative error accumulated while forming each term by repeated
    multiplication, which is what dominates under cancellation.
    """
    re, re_c = 1.0, 0.0
    im, im_c = 0.0, 0.0
    term = 1.0 + 0.0j
    weighted_abs = 1.0
    small_run = 0
    for k in range(max_terms):
        term *= (a + k) / ((b + k) * (k + 1)) * z
        if term == 0:
            break
        re, re_c = _neumaier_add(re, re_c, term.real)
        im, im_c = _neumaier_add(im, im_c, term.imag)
        mag = abs(term)
        weighted_abs += (k + 2) * mag
        current = abs(complex(re + re_c, im + im_c))
        # only trust smallness once the ratio of successive terms is < 1/2
        ratio = abs((a + k + 1) / ((b + k + 1) * (k + 2)) * z)
        if ratio < 0.5 and mag <= _EPS * max(current, 1e-300):
            small_run += 1
            if small_run >= 2:
                break
        else:
            small_run = 0
    else:
        raise EvaluationError(
            f"1F1({a}; {b}; {z}) series did not converge in {max_terms} terms",
            partial_sum=complex(re + re_c, im + im_c),
            terms=max_terms,
            last_term=term,
        )
    value = complex(re + re_c, im + im_c)
    return value, 2 * _EPS * weighted_abs


@lru_cache(maxsize=512)
def _euler_nodes(n, alpha, beta):
    """Gauss-Jacobi nodes on [0, 1] with weights summing to one.

    Golub-Welsch on the symmetric Jacobi matrix of the weight.  ``roots_jacobi`` loses
    several digits in the weights when alpha or beta is close to -1.
    """
    ab = alpha + beta
    k = np.arange(n, dtype=float)
    diag = np.empty(n)
    diag[0] = (beta - alpha) / (ab + 2)
    diag[1:] = (beta**2 - alpha**2) / ((2 * k[1:] + ab) * (2 * k[1:] + ab + 2))
    k = k[1:]
    off2 = (
        4 * k * (k + alpha) * (k + beta) * (k + ab)
        / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1))
    )
    if n > 1:
        # the k = 1 entry has a removable 0/0 at alpha + beta = -1
        off2[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
    x, vectors = eigh_tridiagonal(diag, np.sqrt(off2))
    w = vectors[0] ** 2
    return 0.5 * (1.0 + x), w / w.sum()


def _kummer_euler(a, b, z, rtol):
    """Euler integral ``∫ e^{zu} u^{a-1} (1-u)^{b-a-1} du / B(a, b-a)``.

    Evaluated by Gauss-Jacobi quadrature; requires ``b > a > 0``.  The
    integrand has no large intermediate terms, so it stays accurate where
    the series suffers cancellation.  For imaginary z the integrand has
    modulus at most 1, so the error is small against 1 rather than
    against the value: a result of size 1e-5 may carry ~1e-15 absolute
    error, i.e. ~1e-10 relative.

    Returns ``(value, error_estimate)``, the estimate being the change
    between successive node counts.  With a singular weight the library
    nodes lose accuracy as n grows, so the best pair seen is kept.
    """
    n = int(abs(z) / 2) + 24
    previous = None
    best = (None, math.inf)
    while n <= 1024:
        u, w = _euler_nodes(n, float(b - a - 1), float(a - 1))
        samples = w * np.exp(z * u)
        value = complex(samples.sum())
        if previous is not None:
            change = abs(value - previous)
            if change < best[1]:
                best = (value, change)
            # node error du turns into a phase error |z| du
            floor = 64 * _EPS * (1 + abs(z)) * float(np.abs(samples).sum())
            if change <= max(rtol * abs(value), floor):
                return value, change
        previous = value
        n += 16 if n < 256 else n
    return best


def kummer_1f1(
    a: float,
    b: float,
    z: complex,
    *,
    rtol: float = KUMMER_RTOL,
    max_terms: int = KUMMER_TERM_CAP,
) -> complex:
    """Confluent hypergeometric function ``1F1(a; b; z)`` for real a, b.

    The ascending series is summed with compensation, and for ``Re z < 0``
    also after Kummer's transformation.  When the rounding
    bound exceeds ``rtol`` and ``b > a > 0``, the value is recomputed from
    the Euler integral by Gauss-Jacobi quadrature and the estimate with the
    smaller error is kept.  If neither is within ``KUMMER_GIVE_UP`` (on the
    scale ``max(|value|, 1)``) an :class:`EvaluationError` is raised.  Arguments with
    ``|z| > KUMMER_MAX_ABS_Z`` are rejected.  On the quadrature branch the
    accuracy is absolute on the scale of the integrand (see
    ``_kummer_euler``), which is what the amplitude formulas need.
    """
    a = float(a)
    b = float(b)
    z = complex(z)
    if not (math.isfinite(a) and math.isfinite(b)) or not cmath.isfinite(z):
        raise DomainError("kummer_1f1 needs finite arguments")
    if b <= 0 and _is_integer(b):
        raise DomainError(f"1F1 undefined for b = {b} (non-positive integer)")
    if abs(z) > KUMMER_MAX_ABS_Z:
        raise DomainError(
            f"|z| = {abs(z):.6g} exceeds the supported bound {KUMMER_MAX_ABS_Z}"
        )
    if z == 0:
        return 1.0 + 0.0j
    if a == b:
        return cmath.exp(z)
    value, bound = _kummer_series(a, b, z, rtol, max_terms)
    if bound <= rtol * abs(value):
        return value
    if z.real < 0:
        # Kummer's transformation flips the sign pattern of the terms
        scale = cmath.exp(z)
        other, other_bound = _kummer_series(b - a, b, -z, rtol, max_terms)
        if abs(scale) * other_bound < bound:
            value, bound = scale * other, abs(scale) * other_bound
            if bound <= rtol * abs(value):
                return value
    if b > a > 0:
        quad, error = _kummer_euler(a, b, z, rtol)
        if error < bound:
            value, bound = quad, error
    if bound <= KUMMER_GIVE_UP * max(abs(value), 1.0):
        return value
    raise EvaluationError(
        f"1F1({a}; {b}; {z}) lost precision to cancellation",
        partial_sum=value,
        error_estimate=bound,
    )


# ---------------------------------------------------------------------------
# Bessel functions


def _bessel_series(nu, x):
    half = 0.5 * x
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1))
    total = term
    q = half * half
    for k in range(1, 500):
        term *= -q / (k * (k + nu))
        total += term
        if abs(term) <= _EPS * abs(total) * 0.25:
            break
    return total


def _miller_start(order, x):
    top = max(order, x)
    return int(top + math.sqrt(40.0 * (top + 1)) + 20)


def spherical_jn(n: int, x: float) -> float:
    """Spherical Bessel function ``j_n(x) = sqrt(pi/(2x)) J_{n+1/2}(x)``.

    Ascending series for ``x <= 1``; otherwise Miller's downward recurrence
    normalised against whichever of ``j_0``, ``j_1`` is larger in size.
    """
    n = _require_int("n", n)
    x = float(x)
    if x < 0 or not math.isfinite(x):
        raise DomainError(f"spherical_jn needs finite x >= 0, got {x}")
    if x == 0:
        return 1.0 if n == 0 else 0.0
    if x <= 1.0:
        # x^n / (2n+1)!! * sum (-x^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
        log_lead = n * math.log(x) - (
            math.lgamma(2 * n + 2) - n * math.log(2) - math.lgamma(n + 1)
        )
        term = 1.0
        total = 1.0
        q = -0.5 * x * x
        for k in range(1, 200):
            term *= q / (k * (2 * n + 2 * k + 1))
            total += term
            if abs(term) <= 0.25 * _EPS * abs(total):
                break
        return math.exp(log_lead) * total

    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if n == 0:
        return j0
    if n == 1:
        return j1

    start = _miller_start(n, x)
    keep = n
    stored = np.zeros(keep + 1)
    upper, current = 0.0, 1e-30
    for ell in range(start, -1, -1):
        # current holds j_ell, upper holds j_{ell+1}
        if ell <= keep:
            stored[ell] = current
        lower = (2 * ell + 1) / x * current - upper
        upper, current = current, lower
        if abs(current) > _BIG:
            upper /= _BIG
            current /= _BIG
            stored /= _BIG
    if abs(j0) >= abs(j1):
        scale = j0 / stored[0]
    else:
        scale = j1 / stored[1]
    return float(stored[n] * scale)


def _bessel_integer_miller(n, x):
    start = _miller_start(n, x)
    start += start % 2
    upper, current = 0.0, 1e-30
    value_n = 0.0
    norm = 0.0
    for k in range(start, -1, -1):
        if k == n:
            value_n = current
        if k % 2 == 0:
            norm += current if k == 0 else 2.0 * current
        if k == 0:
            break
        lower = (2 * k) / x * current - upper
        upper, current = current, lower
        if abs(current) > _BIG:
            upper /= _BIG
            current /= _BIG
            value_n /= _BIG
            norm /= _BIG
    return value_n / norm


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind for integer or half-integer order.

    >>> round(bessel_j(1, 1.0), 7)
    0.4400506
    """
    nu = float(nu)
    x = float(x)
    if nu < 0 or not _is_integer(2 * nu):
        raise DomainError(f"bessel_j supports nu in {{0, 1/2, 1, ...}}, got {nu}")
    if x < 0 or not math.isfinite(x):
        raise DomainError(f"bessel_j needs finite x >= 0, got {x}")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    if not _is_integer(nu):
        return math.sqrt(2 * x / math.pi) * spherical_jn(int(nu - 0.5), x)
    if x <= 1.0:
        return _bessel_series(nu, x)
    return _bessel_integer_miller(int(nu), x)


# ---------------------------------------------------------------------------
# Polynomials


def legendre_p(n: int, x: float) -> float:
    """Legendre polynomial by ``(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}``."""
    n = _require_int("n", n)
    x = float(x)
    prev, cur = 0.0, 1.0
    for k in range(n):
        prev, cur = cur, ((2 * k + 1) * x * cur - k * prev) / (k + 1)
    if not math.isfinite(cur):
        raise OutOfRangeError(f"P_{n}({x}) overflows a double")
    return cur


def legendre_ratio(n: int, x: float) -> float:
    """``P_{n+1}(x) / P_n(x)`` for ``x >= 1`` without forming either value.

    Uses ``kappa_k = ((2k+1) x - k / kappa_{k-1}) / (k+1)``, which stays
    finite where the polynomials themselves overflow.
    """
    n = _require_int("n", n)
    x = float(x)
    if x < 1:
        raise DomainError(f"legendre_ratio is defined here for x >= 1, got {x}")
    kappa = x
    for k in range(1, n + 1):
        kappa = ((2 * k + 1) * x - k / kappa) / (k + 1)
    return kappa


def krawtchouk_poly(m: int, j: int, M: int, p: float) -> float:
    """Krawtchouk polynomial ``k_m^{(p)}(j, M)`` of the discrete variable j.

    Normalisation::

        k_m(j) = (-p)^m C(M, m) 2F1(-m, -j; -M; 1/p)

    which is orthogonal under the binomial weight
    ``C(M, j) p^j (1-p)^(M-j)`` and has ``k_0 = 1``.  This is the choice
    under which the degenerate-ladder sum formula reproduces direct
    integration (see ``analytic.degenerate_krawtchouk_amplitudes``).
    """
    M = _require_int("M", M, minimum=1)
    m = _require_int("m", m)
    j = _require_int("j", j)
    if m > M or j > M:
        raise DomainError(f"need 0 <= m, j <= M; got m={m}, j={j}, M={M}")
    if not 0 < p < 1:
        raise DomainError(f"need 0 < p < 1, got {p}")
    term = 1.0
    total = 1.0
    for k in range(min(m, j)):
        term *= (-m + k) * (-j + k) / ((-M + k) * (k + 1) * p)
        total += term
    return (-p) ** m * binomial(M, m) * total


def binomial(n: int, k: int) -> float:
    """Binomial coefficient as a float; exact for ``n <= 1000``."""
    n = _require_int("n", n)
    k = _require_int("k", k)
    if k > n:
        raise DomainError(f"binomial needs k <= n, got n={n}, k={k}")
    if n <= BINOMIAL_EXACT_MAX_N:
        return float(math.comb(n, k))
    log_value = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    if log_value > 709.0:
        raise OutOfRangeError(f"C({n}, {k}) overflows a double")
    return math.exp(log_value)
