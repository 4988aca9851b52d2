import numpy as np
import pytest

from weaveframes.exceptions import DegenerateOperatorError, NotHermitianError, NotPSDError
from weaveframes.numerics import (
    DEFAULT_TOL,
    Tolerances,
    commutes,
    eig_hermitian,
    hermitize,
    loewner_leq,
    max_scale_psd,
    psd_sqrt,
)
from oracles import lower_bound_oracle, rayleigh_samples


def _random_hermitian(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (Z + Z.conj().T) / 2


def _random_spd(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return Z @ Z.conj().T + 0.1 * np.eye(n)


def test_tolerances_reject_nonpositive():
    with pytest.raises(ValueError):
        Tolerances(psd_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(bisect_tol=-1.0)


# hermitize


def test_hermitize_identity():
    H, r = hermitize(np.eye(3))
    np.testing.assert_array_equal(H, np.eye(3))
    assert r == 0


def test_hermitize_nilpotent():
    H, r = hermitize([[0, 1], [0, 0]])
    np.testing.assert_allclose(H, [[0, 0.5], [0.5, 0]])
    assert r == pytest.approx(np.sqrt(0.5), abs=1e-15)


def test_hermitize_hermitian_untouched():
    H0 = _random_hermitian(np.random.default_rng(0), 4)
    H, r = hermitize(H0)
    np.testing.assert_allclose(H, H0, atol=1e-15)
    assert r <= 1e-15


# eig_hermitian


def test_eig_diagonal_sorted():
    spec = eig_hermitian(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(spec.eigenvalues, [1, 2, 3])


def test_eig_identity():
    np.testing.assert_allclose(eig_hermitian(np.eye(5)).eigenvalues, np.ones(5))


@pytest.mark.parametrize("seed", range(5))
def test_eig_matches_quadratic_formula(seed):
    rng = np.random.default_rng(seed)
    a, d = rng.standard_normal(2)
    b = complex(*rng.standard_normal(2))
    H = np.array([[a, b], [np.conj(b), d]])
    disc = np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    expected = [(a + d) / 2 - disc, (a + d) / 2 + disc]
    np.testing.assert_allclose(eig_hermitian(H).eigenvalues, expected, atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eig_hermitian([[0, 1], [0, 0]])


# psd_sqrt


def test_sqrt_diagonal():
    np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_sqrt_identity():
    np.testing.assert_allclose(psd_sqrt(np.eye(4)), np.eye(4), atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_sqrt_roundtrip(seed):
    A = _random_spd(np.random.default_rng(seed), 5)
    R = psd_sqrt(A)
    assert np.linalg.norm(R @ R - A) <= 1e-8 * np.linalg.norm(A)
    assert np.linalg.eigvalsh(R)[0] >= 0


def test_sqrt_rejects_negative():
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_sqrt_clamps_tiny_negative():
    R = psd_sqrt(np.diag([1.0, -1e-13]))
    np.testing.assert_allclose(R, np.diag([1.0, 0.0]), atol=1e-12)


# loewner_leq and commutes


def test_loewner_examples():
    assert loewner_leq(np.eye(3), 2 * np.eye(3))
    T = _random_hermitian(np.random.default_rng(1), 3)
    assert loewner_leq(T, T)
    assert not loewner_leq(np.diag([1.0, 3.0]), np.diag([2.0, 2.0]))


def test_commutes_examples():
    assert commutes(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    A = np.random.default_rng(2).standard_normal((3, 3))
    assert commutes(A, np.eye(3))
    assert not commutes([[0, 1], [0, 0]], [[0, 0], [1, 0]])


# max_scale_psd


def test_max_scale_examples():
    assert max_scale_psd(np.diag([1.0, 2.0]), np.eye(2)) == pytest.approx(1.0, abs=DEFAULT_TOL.bisect_tol)
    assert max_scale_psd(np.diag([1.0, 2.0]), np.diag([0.0, 1.0])) == pytest.approx(2.0, abs=DEFAULT_TOL.bisect_tol)
    assert max_scale_psd(np.zeros((2, 2)), np.eye(2)) == pytest.approx(0.0, abs=DEFAULT_TOL.bisect_tol)


def test_max_scale_zero_p_is_degenerate():
    with pytest.raises(DegenerateOperatorError):
        max_scale_psd(np.eye(2), np.zeros((2, 2)))


def test_max_scale_kernel_mismatch_gives_zero():
    # S vanishes on e1 where P does not
    assert max_scale_psd(np.diag([0.0, 1.0]), np.eye(2)) == pytest.approx(0.0, abs=DEFAULT_TOL.bisect_tol)


@pytest.mark.parametrize("seed", range(10))
def test_max_scale_matches_generalized_eigen_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 5
    S = _random_spd(rng, n)
    Q = np.linalg.qr(rng.standard_normal((n, 2)))[0]
    P = Q @ Q.T
    a = max_scale_psd(S, P)
    expected = lower_bound_oracle(S, P)
    assert abs(a - expected) <= 1e-8 * max(expected, 1.0)
    num, den = rayleigh_samples(S, P, rng, 2000)
    active = den > 1e-6
    assert np.all(a <= num[active] / den[active] + 1e-6)


def test_max_scale_witness_attains_ratio():
    S, P = np.diag([3.0, 1.0, 5.0]), np.diag([1.0, 0.5, 1.0])
    a, f = max_scale_psd(S, P, return_witness=True)
    assert a == pytest.approx(2.0, abs=1e-9)
    ratio = np.vdot(f, S @ f).real / np.vdot(f, P @ f).real
    assert ratio == pytest.approx(a, abs=1e-6)
