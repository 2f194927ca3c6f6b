"""Exact dynamics of laser-driven multilevel ladders.

Closed-form amplitudes for ladders whose couplings come from classical
orthogonal polynomials, a spectral solver for any finite ladder, and a
direct RK4 integrator used to check both.
"""

from .analytic import (
    analytic_trajectory,
    bessel_populations,
    christoffel_legendre_amplitudes,
    degenerate_krawtchouk_amplitudes,
    jacobi_amplitudes,
    krawtchouk_amplitudes,
    krawtchouk_excitation,
    krawtchouk_populations,
)
from .errors import (
    ConvergenceError,
    DomainError,
    EvaluationError,
    OrthoLadderError,
    OutOfRangeError,
    TruncationWarning,
    UnsupportedFamilyError,
)
from .oracle import IntegratorConfig, integrate_degenerate, integrate_ladder
from .spectral import (
    SpectralDecomposition,
    check_common_polynomial_map,
    common_polynomial_roots,
    decompose,
    spectral_amplitudes,
    spectral_solve,
    tridiagonal_eigh,
)
from .systems import (
    FAMILIES,
    DegenerateSystemSpec,
    SystemSpec,
    build_system,
    christoffel_legendre_system,
    custom_system,
    degenerate_system,
    gegenbauer_system,
    jacobi_antisymmetric_system,
    jacobi_system,
    krawtchouk_system,
    legendre_function_system,
    system_from_dict,
)
from .trajectory import AmplitudeTrajectory, DegenerateTrajectory, TimeGrid
from .verify import VerificationReport, available_methods, run_verification

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrajectory",
    "analytic_trajectory",
    "available_methods",
    "bessel_populations",
    "build_system",
    "check_common_polynomial_map",
    "christoffel_legendre_amplitudes",
    "christoffel_legendre_system",
    "common_polynomial_roots",
    "ConvergenceError",
    "custom_system",
    "decompose",
    "degenerate_krawtchouk_amplitudes",
    "degenerate_system",
    "DegenerateSystemSpec",
    "DegenerateTrajectory",
    "DomainError",
    "EvaluationError",
    "FAMILIES",
    "gegenbauer_system",
    "integrate_degenerate",
    "integrate_ladder",
    "IntegratorConfig",
    "jacobi_amplitudes",
    "jacobi_antisymmetric_system",
    "jacobi_system",
    "krawtchouk_amplitudes",
    "krawtchouk_excitation",
    "krawtchouk_populations",
    "krawtchouk_system",
    "legendre_function_system",
    "OrthoLadderError",
    "OutOfRangeError",
    "run_verification",
    "spectral_amplitudes",
    "spectral_solve",
    "SpectralDecomposition",
    "system_from_dict",
    "SystemSpec",
    "TimeGrid",
    "tridiagonal_eigh",
    "TruncationWarning",
    "UnsupportedFamilyError",
    "VerificationReport",
    "__version__",
]
