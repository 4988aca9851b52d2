"""Optimal frame bounds and frame/Bessel verdicts for one controlled instance."""

from __future__ import annotations

import math

import numpy as np

from .exceptions import NotPSDError, UncertifiableError
from .frame_ops import frame_operator
from .model import BoundCertificate, ControlledInstance, GFrameFamily, build_controlled_instance
from .numerics import DEFAULT_TOL, Tolerances, loewner_leq, max_scale_psd
from .validation import check_square, check_vectors


def certify_operator(S: np.ndarray, KKstar: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> BoundCertificate:
    """Bounds for a Hermitian frame operator ``S`` against ``K K^*``.

    ``upper`` is the top eigenvalue of ``S``; ``lower`` is the largest ``A``
    with ``A K K^* <= S``.
    """
    w, V = np.linalg.eigh(S)
    scale = max(abs(w[0]), abs(w[-1]), 1.0)
    if w[0] < -tol.psd_tol * scale:
        raise NotPSDError(
            f"frame operator has eigenvalue {w[0]:.3e}: the controlled form takes negative values"
        )
    upper = max(float(w[-1]), 0.0)
    upper_witness = V[:, -1]
    kk_norm = float(np.abs(np.linalg.eigvalsh(KKstar)).max())
    if kk_norm <= tol.psd_tol:
        return BoundCertificate(
            lower=math.inf, upper=upper, lower_witness=None, upper_witness=upper_witness,
            verdict=True, advisories=("K vanishes: the lower inequality is vacuous",),
        )
    lower, lower_witness = max_scale_psd(S, KKstar, tol, return_witness=True)
    return BoundCertificate(
        lower=float(lower), upper=upper, lower_witness=lower_witness, upper_witness=upper_witness,
        verdict=bool(lower > tol.psd_tol),
    )


def optimal_bounds(inst: ControlledInstance, tol: Tolerances | None = None) -> BoundCertificate:
    """Optimal lower and upper controlled K-g-frame bounds.

    Refuses (raises :class:`UncertifiableError`) when ``S_Lambda`` does not
    commute with the controls.
    """
    tol = tol or inst.tol
    if not inst.commutation_ok:
        raise UncertifiableError("S_Lambda does not commute with C and Cprime; bounds are not certified")
    return certify_operator(frame_operator(inst), inst.k_op.KKstar, tol)


def is_bessel(inst: ControlledInstance, B: float, tol: Tolerances | None = None) -> bool:
    tol = tol or inst.tol
    S = frame_operator(inst)
    return loewner_leq(S, B * np.eye(inst.n), tol)


def satisfies_lower(inst: ControlledInstance, A: float, tol: Tolerances | None = None) -> bool:
    """Loewner check of a stated lower bound: ``A K K^* <= S``."""
    tol = tol or inst.tol
    return loewner_leq(A * inst.k_op.KKstar, frame_operator(inst), tol)


def classical_frame_bounds(vectors) -> tuple[float, float]:
    """Extreme eigenvalues of ``sum_j f_j f_j^*``; a lower value of 0 means not a frame."""
    F = check_vectors(vectors)
    w = np.linalg.eigvalsh(F.T @ F.conj())
    return max(float(w[0]), 0.0), max(float(w[-1]), 0.0)


def classical_k_frame_bounds(vectors, K, tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    """Optimal K-frame bounds ``A |K^* f|^2 <= sum |<f, f_j>|^2 <= B |f|^2``."""
    F = check_vectors(vectors)
    K = check_square(K, n=F.shape[1], name="K")
    S = F.T @ F.conj()
    S = 0.5 * (S + S.conj().T)
    KK = K @ K.conj().T
    cert = certify_operator(S, 0.5 * (KK + KK.conj().T), tol)
    return cert.lower, cert.upper


def lift_vectors(vectors, K=None, tol: Tolerances = DEFAULT_TOL) -> ControlledInstance:
    """The ``d_j = 1``, ``C = C' = I`` instance induced by a vector family (``K = I`` by default)."""
    family = GFrameFamily.from_vectors(check_vectors(vectors))
    n = family.ambient_dim
    eye = np.eye(n)
    return build_controlled_instance(family, eye, eye, eye if K is None else K, tol)
