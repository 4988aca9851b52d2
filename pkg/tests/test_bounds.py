import math

import numpy as np
import pytest

from weaveframes import (
    GFrameFamily,
    UncertifiableError,
    build_controlled_instance,
    classical_frame_bounds,
    is_bessel,
    optimal_bounds,
    random_instance,
)
from weaveframes.bounds import classical_k_frame_bounds, lift_vectors, satisfies_lower
from weaveframes.frame_ops import frame_operator, quadratic_form
from oracles import lower_bound_oracle


def test_identity_bounds(identity_instance):
    cert = optimal_bounds(identity_instance)
    assert cert.lower == pytest.approx(1.0, abs=1e-9)
    assert cert.upper == pytest.approx(1.0, abs=1e-12)
    assert cert.verdict


def test_example_lambda_bounds(example12):
    w, _ = example12
    cert = optimal_bounds(w.lambda_instance())
    assert cert.lower == pytest.approx(1.0, abs=1e-9)
    assert cert.upper == pytest.approx(2.0, abs=1e-9)


def test_example_omega_bounds(example12):
    # member 1 scales e3 by 3/2 and member 2 reads e4 at scale 5/4; e4 also
    # sits in member 1 at weight 1, so the top diagonal entry is 25/16 + 1
    w, _ = example12
    inst = w.omega_instance()
    cert = optimal_bounds(inst)
    assert cert.lower == pytest.approx(1.0, abs=1e-9)
    assert cert.upper == pytest.approx(1.0 + (1 + 2 ** -2) ** 2, abs=1e-9)
    assert satisfies_lower(inst, 1.0) and is_bessel(inst, 5.0)


def test_is_bessel_examples(identity_instance, example12):
    assert is_bessel(identity_instance, 1.0)
    assert not is_bessel(identity_instance, 0.5)
    w, _ = example12
    assert is_bessel(w.lambda_instance(), 2.0)
    assert not is_bessel(w.lambda_instance(), 1.99)


def test_refuses_without_commutation():
    L = np.array([[1.0, 1.0]])
    inst = build_controlled_instance(GFrameFamily((L,)), np.diag([1.0, 2.0]), np.diag([2.0, 1.0]), np.eye(2))
    with pytest.raises(UncertifiableError):
        optimal_bounds(inst)


def test_zero_k_advisory():
    e = np.eye(2)
    cert = optimal_bounds(build_controlled_instance(GFrameFamily((e,)), e, e, np.zeros((2, 2))))
    assert math.isinf(cert.lower) and cert.verdict and cert.advisories


def test_classical_examples():
    assert classical_frame_bounds(np.eye(3)) == pytest.approx((1.0, 1.0))
    e = np.eye(2)
    assert classical_frame_bounds([e[0], e[0], e[1]]) == pytest.approx((1.0, 2.0))
    assert classical_frame_bounds([e[0]]) == pytest.approx((0.0, 1.0))


def test_classical_k_frame():
    e = np.eye(2)
    # a single vector is a K-frame for the projection onto its span
    A, B = classical_k_frame_bounds([e[0]], np.diag([1.0, 0.0]))
    assert A == pytest.approx(1.0, abs=1e-9) and B == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(10))
def test_reduction_coherence(seed):
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    A, B = classical_frame_bounds(F)
    cert = optimal_bounds(lift_vectors(F))
    assert cert.lower == pytest.approx(A, abs=1e-9)
    assert cert.upper == pytest.approx(B, abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_lower_matches_oracle_and_witnesses_are_tight(seed):
    w = random_instance(seed, 5, 3)
    inst = w.lambda_instance()
    cert = optimal_bounds(inst)
    S = frame_operator(inst)
    expected = lower_bound_oracle(S, inst.k_op.KKstar)
    assert abs(cert.lower - expected) <= 1e-8 * max(expected, 1.0)
    f = cert.lower_witness
    Kf = inst.k_op.K.conj().T @ f
    assert quadratic_form(inst, f) <= (cert.lower + 1e-6) * np.vdot(Kf, Kf).real + 1e-12
    g = cert.upper_witness
    assert quadratic_form(inst, g) >= (cert.upper - 1e-6) * np.vdot(g, g).real


@pytest.mark.parametrize("seed", range(5))
def test_appending_member_is_monotone(seed):
    w = random_instance(seed, 4, 3)
    inst = w.lambda_instance()
    base = optimal_bounds(inst)
    extra = w.omega_family.members[0]
    grown = build_controlled_instance(GFrameFamily(inst.family.members + (extra,)),
                                      inst.controls, None, inst.k_op)
    more = optimal_bounds(grown)
    assert more.upper >= base.upper - 1e-12
    assert more.lower >= base.lower - 2e-10
