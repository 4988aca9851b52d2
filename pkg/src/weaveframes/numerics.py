"""Hermitian spectral kernel.

Dense eigendecompositions, positive square roots, Loewner-order tests and
the bisection that extracts the largest ``A`` with ``S - A P >= 0``.
Tolerances are relative to operator norms with a floor of 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateOperatorError, NotHermitianError, NotPSDError
from .validation import check_square

_EPS = np.finfo(np.float64).eps
_MAX_BISECT_STEPS = 200


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances.

    psd_tol
        Relative slack for positive-semidefiniteness tests.
    bisect_tol
        Absolute stopping width for the scale bisection.
    commute_tol
        Relative slack for commutator and hermiticity tests.
    """

    psd_tol: float = 1e-9
    bisect_tol: float = 1e-10
    commute_tol: float = 1e-8

    def __post_init__(self):
        for name in ("psd_tol", "bisect_tol", "commute_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    def as_dict(self) -> dict:
        return {"psd_tol": self.psd_tol, "bisect_tol": self.bisect_tol, "commute_tol": self.commute_tol}


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    hermitian_residual: float


def spectral_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitize(M) -> tuple[np.ndarray, float]:
    """Split off the Hermitian part of a square matrix.

    Returns ``(M + M*)/2`` and the Frobenius norm of the discarded skew part.
    """
    M = check_square(M, name="matrix")
    H = 0.5 * (M + M.conj().T)
    residual = 0.5 * np.linalg.norm(M - M.conj().T, "fro")
    return H, float(residual)


def eig_hermitian(H, tol: Tolerances = DEFAULT_TOL) -> HermitianSpectrum:
    """Ascending eigenpairs of a (numerically) Hermitian matrix."""
    Hh, residual = hermitize(H)
    scale = max(float(np.linalg.norm(Hh, "fro")), 1.0)
    if residual > tol.commute_tol * scale:
        raise NotHermitianError(
            f"skew part has Frobenius norm {residual:.3e}, above {tol.commute_tol:.1e} x {scale:.3e}"
        )
    w, V = np.linalg.eigh(Hh)
    return HermitianSpectrum(eigenvalues=w, eigenvectors=V, hermitian_residual=residual)


def psd_sqrt(H, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique positive semidefinite square root.

    Eigenvalues that are negative but within ``psd_tol`` are clamped to zero.
    """
    spec = eig_hermitian(H, tol)
    w = spec.eigenvalues
    if w.size and w[0] < -tol.psd_tol * max(np.abs(w).max(), 1.0):
        raise NotPSDError(f"smallest eigenvalue {w[0]:.3e} is materially negative")
    V = spec.eigenvectors
    root = (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T
    return 0.5 * (root + root.conj().T)


def loewner_leq(T1, T2, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``T1 <= T2`` in the Loewner order, up to relative slack ``psd_tol``."""
    T1 = check_square(T1, name="T1")
    T2 = check_square(T2, n=T1.shape[0], name="T2")
    lam_min = eig_hermitian(T2 - T1, tol).eigenvalues[0]
    return bool(lam_min >= -tol.psd_tol * max(spectral_norm(T1), spectral_norm(T2), 1.0))


def commutes(A, B, tol: Tolerances = DEFAULT_TOL) -> bool:
    A = check_square(A, name="A")
    B = check_square(B, n=A.shape[0], name="B")
    gap = np.linalg.norm(A @ B - B @ A, "fro")
    return bool(gap <= tol.commute_tol * np.linalg.norm(A, "fro") * np.linalg.norm(B, "fro"))


def _lam_min(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(M)[0])


def max_scale_psd(S, P, tol: Tolerances = DEFAULT_TOL, return_witness: bool = False):
    """Largest ``A >= 0`` with ``S - A P`` positive semidefinite.

    Bisects on the monotone map ``A -> lambda_min(S - A P)``. ``P`` may be
    singular; directions in its kernel only require ``S >= 0`` there.

    Parameters
    ----------
    S, P : array_like
        Hermitian positive semidefinite matrices of equal size.
    return_witness : bool
        Also return a unit vector on which ``<S f, f> / <P f, f>`` is within
        the bisection width of the returned value.

    Raises
    ------
    NotPSDError
        If ``S`` or ``P`` has a materially negative eigenvalue.
    DegenerateOperatorError
        If ``P`` vanishes within ``psd_tol``.
    """
    S = check_square(S, name="S")
    P = check_square(P, n=S.shape[0], name="P")
    n = S.shape[0]
    s_spec = eig_hermitian(S, tol)
    p_spec = eig_hermitian(P, tol)
    s_norm = max(abs(s_spec.eigenvalues[0]), abs(s_spec.eigenvalues[-1]))
    p_norm = max(abs(p_spec.eigenvalues[0]), abs(p_spec.eigenvalues[-1]))
    if s_spec.eigenvalues[0] < -tol.psd_tol * max(s_norm, 1.0):
        raise NotPSDError(f"S has eigenvalue {s_spec.eigenvalues[0]:.3e}; the quadratic form is not non-negative")
    if p_spec.eigenvalues[0] < -tol.psd_tol * max(p_norm, 1.0):
        raise NotPSDError(f"P has eigenvalue {p_spec.eigenvalues[0]:.3e}")
    if p_norm <= tol.psd_tol:
        raise DegenerateOperatorError("P vanishes; the scale is unbounded")

    # clamp rounding-level negative eigenvalues so kernel directions of P stay feasible
    V = s_spec.eigenvectors
    Sc = (V * np.clip(s_spec.eigenvalues, 0.0, None)) @ V.conj().T
    Sc = 0.5 * (Sc + Sc.conj().T)
    Ph = 0.5 * (P + P.conj().T)

    active = p_spec.eigenvalues[p_spec.eigenvalues > tol.psd_tol * p_norm]
    lo, hi = 0.0, (s_spec.eigenvalues[-1] + 1.0) / active[0]

    def feasible(a: float) -> bool:
        slack = 64.0 * n * _EPS * max(s_norm, a * p_norm, 1.0)
        return _lam_min(Sc - a * Ph) >= -slack

    steps = 0
    while hi - lo > tol.bisect_tol and steps < _MAX_BISECT_STEPS:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
        steps += 1
    if not return_witness:
        return lo
    _, W = np.linalg.eigh(Sc - hi * Ph)
    return lo, W[:, 0]
