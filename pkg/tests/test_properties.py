"""Property-based checks of the numerical invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from weaveframes import optimal_bounds, per_subset_bounds, random_instance, universal_bounds_exhaustive
from weaveframes.frame_ops import factorization_gap, frame_operator, quadratic_form
from weaveframes.numerics import DEFAULT_TOL, hermitize, loewner_leq, psd_sqrt
from weaveframes.theorems import check_bessel_sum

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=40, deadline=None)


def _hermitian(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (Z + Z.conj().T) / 2


@SETTINGS
@given(seeds, st.integers(1, 6))
def test_psd_sqrt_roundtrip(seed, n):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = Z @ Z.conj().T
    R = psd_sqrt(H)
    assert np.linalg.norm(R @ R - H) <= 1e-8 * max(np.linalg.norm(H), 1.0)


@SETTINGS
@given(seeds, st.integers(1, 5))
def test_loewner_reflexive_transitive(seed, n):
    rng = np.random.default_rng(seed)
    T1 = _hermitian(rng, n)
    Z = rng.standard_normal((n, n))
    T2 = T1 + Z @ Z.T
    T3 = T2 + np.eye(n) * rng.uniform(0, 1)
    assert loewner_leq(T1, T1)
    assert loewner_leq(T1, T2) and loewner_leq(T2, T3) and loewner_leq(T1, T3)


@SETTINGS
@given(seeds, st.integers(1, 5))
def test_commuting_product_monotone(seed, n):
    # T1 <= T2 and T3 >= 0 all diagonal in one basis
    rng = np.random.default_rng(seed)
    V = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))[0]
    d1 = rng.standard_normal(n)
    d2 = d1 + rng.uniform(0, 2, n)
    d3 = rng.uniform(0, 2, n)
    T1, T2, T3 = ((V * d) @ V.conj().T for d in (d1, d2, d3))
    assert loewner_leq(hermitize(T1 @ T3)[0], hermitize(T2 @ T3)[0])


@SETTINGS
@given(seeds, st.integers(1, 5), st.integers(1, 4))
def test_operator_identities(seed, n, m):
    w = random_instance(seed, n, m)
    inst = w.lambda_instance()
    assert factorization_gap(inst) <= 1e-9
    f = np.random.default_rng(seed).standard_normal(n)
    S = frame_operator(inst)
    assert abs(quadratic_form(inst, f) - f @ S @ f) <= 1e-9 * (1 + f @ f)


@SETTINGS
@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_sandwich_and_bessel_sum(seed, n, m):
    w = random_instance(seed, n, m)
    cert = universal_bounds_exhaustive(w)
    B1 = optimal_bounds(w.lambda_instance()).upper
    B2 = optimal_bounds(w.omega_instance()).upper
    slack = 2 * DEFAULT_TOL.psd_tol
    for sigma in range(1 << m):
        sub = per_subset_bounds(w, sigma)
        assert cert.lower <= sub.lower + slack + DEFAULT_TOL.bisect_tol
        assert sub.upper <= cert.upper + slack
        assert sub.upper <= B1 + B2 + DEFAULT_TOL.psd_tol
    assert check_bessel_sum(w).diagnostics["violations"] == 0


@SETTINGS
@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_lower_below_upper_when_k_is_identity(seed, n, m):
    # against |K^* f|^2 = |f|^2 the two bounds are ordered
    w = random_instance(seed, n, m, k_mode="identity")
    for sigma in range(1 << m):
        sub = per_subset_bounds(w, sigma)
        assert sub.lower <= sub.upper + 2 * DEFAULT_TOL.psd_tol
