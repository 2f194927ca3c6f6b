import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ortholadder.errors import DomainError, UnsupportedFamilyError
from ortholadder.specfun import legendre_p
from ortholadder.systems import (
    FAMILIES,
    DegenerateSystemSpec,
    build_system,
    christoffel_legendre_norms,
    christoffel_legendre_system,
    custom_system,
    gegenbauer_system,
    jacobi_antisymmetric_system,
    jacobi_system,
    krawtchouk_system,
    legendre_function_system,
    system_from_dict,
)


def test_equal_rabi_is_the_half_half_jacobi_ladder():
    spec = jacobi_system(0.5, 0.5, 12)
    assert spec.scale == pytest.approx(2.0, rel=1e-15)
    np.testing.assert_allclose(spec.couplings, 1.0, rtol=1e-14)
    np.testing.assert_allclose(spec.phases, 0.0, atol=1e-15)


def test_legendre_jacobi_ladder():
    spec = jacobi_system(0, 0, 5)
    assert spec.scale == pytest.approx(math.sqrt(3), rel=1e-15)
    assert spec.coupling(1) == pytest.approx(1.0, rel=1e-15)
    assert spec.coupling(2) == pytest.approx(2 / math.sqrt(5), rel=1e-15)


def test_jacobi_one_two_first_coupling():
    spec = jacobi_system(1, 2, 3)
    assert spec.scale == pytest.approx(2.5, rel=1e-15)
    assert spec.coupling(1) == pytest.approx(1.0, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(alpha=st.floats(-0.95, 5), beta=st.floats(-0.95, 5))
def test_jacobi_first_coupling_is_unity(alpha, beta):
    assert jacobi_system(alpha, beta, 2).coupling(1) == pytest.approx(1.0, rel=1e-12)


def test_jacobi_ladder_matches_orthonormal_recurrence_numerically():
    # f_n / r and -s_n / r are the Jacobi-matrix entries of the weight
    # (1-x)^alpha (1+x)^beta; the eigenvalues of the n x n block are the
    # zeros of P_n^(alpha, beta).
    from scipy.special import roots_jacobi

    alpha, beta = 1.3, -0.4
    spec = jacobi_system(alpha, beta, 7)
    r = spec.scale
    mat = np.diag(-spec.phases / r) + np.diag(spec.couplings / r, 1) + np.diag(spec.couplings / r, -1)
    zeros = np.sort(roots_jacobi(8, alpha, beta)[0])
    np.testing.assert_allclose(np.linalg.eigvalsh(mat), zeros, atol=1e-12)


def test_gegenbauer_zero_is_chebyshev_first_kind_ladder():
    spec = gegenbauer_system(0.0, 6)
    assert spec.coupling(1) == pytest.approx(1.0)
    np.testing.assert_allclose(spec.couplings[1:], 1 / math.sqrt(2), rtol=1e-14)
    np.testing.assert_allclose(spec.phases, 0.0, atol=1e-15)


def test_antisymmetric_half():
    spec = jacobi_antisymmetric_system(0.5, 10)
    np.testing.assert_allclose(spec.couplings, 1.0, rtol=1e-14)
    np.testing.assert_allclose(spec.detunings, [-1.0] + [0.0] * 9, atol=1e-15)
    assert spec.coupling(2) == pytest.approx(1.0, rel=1e-15)


def test_antisymmetric_zero_is_resonant_legendre():
    spec = jacobi_antisymmetric_system(0.0, 6)
    n = np.arange(1, 7)
    np.testing.assert_allclose(spec.couplings, np.sqrt(3 * n**2 / (4 * n**2 - 1)), rtol=1e-15)
    assert spec.resonant


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(-0.9, 0.9))
def test_antisymmetric_agrees_with_general_jacobi(alpha):
    a = jacobi_antisymmetric_system(alpha, 8)
    b = jacobi_system(alpha, -alpha, 8)
    np.testing.assert_allclose(a.couplings, b.couplings, rtol=1e-12)
    np.testing.assert_allclose(a.detunings, b.detunings, atol=1e-12)


def test_krawtchouk_couplings():
    assert krawtchouk_system(1).couplings.tolist() == [1.0]
    assert krawtchouk_system(4).coupling(2) == pytest.approx(math.sqrt(1.5), rel=1e-15)
    assert krawtchouk_system(4).coupling(5) == 0.0
    big = krawtchouk_system(10_000)
    np.testing.assert_allclose(big.couplings[:5], np.sqrt(np.arange(1, 6)), rtol=1e-3)


def test_krawtchouk_detuning_is_uniform():
    spec = krawtchouk_system(5, 0.3)
    np.testing.assert_allclose(spec.detunings, 0.3)


def test_christoffel_legendre_norm_chain():
    b = 1.5
    kappa, d = christoffel_legendre_norms(b, 6)
    for n in range(7):
        assert kappa[n] == pytest.approx(legendre_p(n + 1, b) / legendre_p(n, b), rel=1e-14)
        assert d[n] == pytest.approx(math.sqrt(2 * b / ((n + 1) * kappa[n])), rel=1e-15)
    spec = christoffel_legendre_system(b, 6)
    assert spec.coupling(1) == pytest.approx(spec.scale / 3 * d[0] / d[1], rel=1e-14)
    assert spec.coupling(1) == pytest.approx(1.0, rel=1e-14)


def test_christoffel_legendre_large_b_stays_finite():
    kappa, d = christoffel_legendre_norms(1e8, 10)
    n = np.arange(12)
    np.testing.assert_allclose(kappa / 1e8, (2 * n + 1) / (n + 1), rtol=1e-6)
    spec = christoffel_legendre_system(1e8, 10)
    assert np.all(np.isfinite(spec.couplings)) and np.all(np.isfinite(spec.phases))


def test_christoffel_legendre_ladder_is_the_reweighted_legendre_recurrence():
    # Eigenvalues of the truncated ladder divided by r are Gauss nodes for
    # the weight (b - x)/b on [-1, 1]; check the quadrature on polynomials.
    b, n_max = 1.5, 6
    spec = christoffel_legendre_system(b, n_max)
    r = spec.scale
    mat = np.diag(-spec.phases / r) + np.diag(spec.couplings / r, 1) + np.diag(spec.couplings / r, -1)
    nodes, vecs = np.linalg.eigh(mat)
    weights = vecs[0] ** 2
    for k in range(2 * n_max + 2):
        # normalised moment  ∫ x^k (b - x)/b dx / 2
        moment = 1 / (k + 1) if k % 2 == 0 else -1 / ((k + 2) * b)
        assert np.sum(weights * nodes**k) == pytest.approx(moment, abs=1e-12)


def test_legendre_function_couplings():
    for lam in (-2.5, -6.0, -20.0):
        assert legendre_function_system(lam, 2).coupling(1) == pytest.approx(1.0, rel=1e-15)
    assert legendre_function_system(-3.0, 2).coupling(2) == pytest.approx(math.sqrt(5), rel=1e-15)


def test_legendre_function_singular_case_is_rejected():
    with pytest.raises(DomainError, match="singular"):
        legendre_function_system(-3.0, 3)
    spec = legendre_function_system(-3.5, 3)
    assert spec.level_count == 4 and spec.coupling(4) == 0.0


def test_legendre_function_domain():
    with pytest.raises(DomainError):
        legendre_function_system(-0.5, 1)
    with pytest.raises(DomainError):
        legendre_function_system(-6.0, 7)


def test_custom_system_hand_cases():
    two = custom_system([1.0], [0.0])
    assert two.level_count == 2 and two.resonant and two.closed
    cheb = custom_system([1, 1 / math.sqrt(2), 1 / math.sqrt(2)])
    np.testing.assert_allclose(cheb.couplings, gegenbauer_system(0, 3).couplings, rtol=1e-14)
    with pytest.raises(DomainError):
        custom_system([1.0, 0.0])
    with pytest.raises(DomainError):
        custom_system([1.0, 1.0], [0.0])


def test_spec_is_read_only():
    spec = krawtchouk_system(3)
    with pytest.raises(ValueError):
        spec.couplings[0] = 2.0
    with pytest.raises(TypeError):
        spec.params["N"] = 5


def test_domain_errors():
    with pytest.raises(DomainError):
        jacobi_system(-1.0, 0.0, 5)
    with pytest.raises(DomainError):
        jacobi_system(0.0, 0.0, 0)
    with pytest.raises(DomainError):
        jacobi_antisymmetric_system(1.0, 5)
    with pytest.raises(DomainError):
        krawtchouk_system(0)
    with pytest.raises(DomainError):
        christoffel_legendre_system(0.5, 5)
    with pytest.raises(DomainError):
        DegenerateSystemSpec(N=0, M=1)


def test_resize_and_truncate():
    spec = jacobi_system(1, 2, 10)
    bigger = spec.resized(20)
    np.testing.assert_array_equal(bigger.couplings[:10], spec.couplings)
    closed = spec.truncated()
    assert closed.closed and closed.coupling(11) == 0.0
    with pytest.raises(DomainError):
        closed.resized(30)


@pytest.mark.parametrize("name", list(FAMILIES))
def test_every_family_builds_from_its_example(name):
    family = FAMILIES[name]
    spec = build_system(name, **family.example)
    # gegenbauer is a parameterisation of the jacobi ladder
    assert spec.family == ("jacobi" if name == "gegenbauer" else name)
    again = system_from_dict(spec.to_dict())
    assert again.to_dict() == spec.to_dict()


def test_unknown_family_lists_supported():
    with pytest.raises(UnsupportedFamilyError) as info:
        build_system("pollaczek")
    for name in FAMILIES:
        assert name in str(info.value)


def test_unknown_parameter_is_rejected():
    with pytest.raises(DomainError):
        build_system("krawtchouk", N=3, eps=0.1)


def test_truncated_round_trip():
    spec = jacobi_system(0.5, 0.5, 6).truncated()
    again = system_from_dict(spec.to_dict())
    assert again.closed
