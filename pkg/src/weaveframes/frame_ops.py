"""Synthesis, analysis and frame operators of a controlled instance."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import NotPSDError, ShapeError
from .model import ControlledInstance
from .numerics import DEFAULT_TOL, Tolerances, hermitize
from .validation import check_vector, check_vectors


class ImaginaryFormWarning(UserWarning):
    """The controlled quadratic form has a non-negligible imaginary part."""


@dataclass(frozen=True)
class GBasisLayout:
    """Block offsets of the direct sum of the codomain spaces."""

    offsets: tuple

    @classmethod
    def from_dims(cls, dims) -> "GBasisLayout":
        dims = [int(d) for d in dims]
        if not dims or min(dims) < 1:
            raise ShapeError("codomain dimensions must be positive")
        return cls(tuple(int(x) for x in np.concatenate([[0], np.cumsum(dims)])))

    @property
    def total(self) -> int:
        return self.offsets[-1]

    @property
    def block_count(self) -> int:
        return len(self.offsets) - 1

    def block(self, j: int) -> slice:
        return slice(self.offsets[j], self.offsets[j + 1])

    def embed(self, j: int, g) -> np.ndarray:
        """Place ``g`` in block ``j`` of an otherwise zero block vector."""
        out = np.zeros(self.total, dtype=np.complex128)
        out[self.block(j)] = g
        return out

    def extract(self, j: int, x) -> np.ndarray:
        return np.asarray(x)[self.block(j)]

    def split(self, x) -> list[np.ndarray]:
        return [self.extract(j, x) for j in range(self.block_count)]


def layout_of(inst: ControlledInstance) -> GBasisLayout:
    return GBasisLayout.from_dims(inst.family.codomain_dims)


def frame_operator(inst: ControlledInstance, return_residual: bool = False):
    """``sum_j C' Lambda_j^* Lambda_j C``, hermitized.

    With ``return_residual`` the Frobenius norm of the removed skew part is
    returned as well; it vanishes up to rounding when ``commutation_ok``.
    """
    S = inst.controls.Cp @ inst.family.gram_sum() @ inst.controls.C
    H, residual = hermitize(S)
    if return_residual:
        return H, residual
    return H


def synthesis_matrix(inst: ControlledInstance, layout: GBasisLayout | None = None) -> np.ndarray:
    """``n x total`` matrix whose block ``j`` is ``(CC')^{1/2} Lambda_j^*``."""
    if layout is None:
        layout = layout_of(inst)
    elif layout.offsets != layout_of(inst).offsets:
        raise ShapeError("layout does not match the family's codomain dimensions")
    R = inst.controls.sqrt_product
    return np.hstack([R @ M.conj().T for M in inst.family.members])


def analysis_apply(inst: ControlledInstance, f) -> list[np.ndarray]:
    f = check_vector(f, inst.n, name="f")
    Rf = inst.controls.sqrt_product @ f
    return [M @ Rf for M in inst.family.members]


def quadratic_form(inst: ControlledInstance, f) -> float:
    """Real part of ``sum_j <Lambda_j C f, Lambda_j C' f>``.

    Warns with :class:`ImaginaryFormWarning` if the imaginary part exceeds
    ``1e-9 (1 + |f|^2)``.
    """
    f = check_vector(f, inst.n, name="f")
    Cf = inst.controls.C @ f
    Cpf = inst.controls.Cp @ f
    value = sum(np.vdot(M @ Cpf, M @ Cf) for M in inst.family.members)
    bound = 1e-9 * (1.0 + float(np.vdot(f, f).real))
    if abs(value.imag) > bound:
        hint = "" if inst.commutation_ok else " (standing commutation assumption fails)"
        warnings.warn(f"imaginary part {value.imag:.3e} of the controlled form{hint}", ImaginaryFormWarning,
                      stacklevel=2)
    return float(value.real)


def factorization_gap(inst: ControlledInstance) -> float:
    """Relative Frobenius distance between ``T T^*`` and the frame operator.

    The two agree when ``S_Lambda`` commutes with the controls.
    """
    T = synthesis_matrix(inst)
    TT = hermitize(T @ T.conj().T)[0]
    S = frame_operator(inst)
    return float(np.linalg.norm(TT - S, "fro") / max(np.linalg.norm(S, "fro"), 1.0))


def classical_reconstruct(frame_vectors, f, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Reconstruct ``f`` as ``sum_j <S^{-1} f_j, f> f_j``.

    Raises :class:`NotPSDError` when the frame operator is singular, i.e. the
    vectors do not span the space.
    """
    F = check_vectors(frame_vectors, name="frame vectors")
    f = check_vector(f, F.shape[1], name="f")
    S = F.T @ F.conj()
    w = np.linalg.eigvalsh(S)
    if w[0] <= tol.psd_tol * max(w[-1], 1.0):
        raise NotPSDError("frame operator is singular; the vectors are not a frame for the space")
    duals = np.linalg.solve(S, F.T)
    coeffs = duals.T.conj() @ f
    return F.T @ coeffs
