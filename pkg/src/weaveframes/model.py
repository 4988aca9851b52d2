"""Validated domain objects: g-frame families, control pairs, K operators.

All objects are immutable once built. Matrices are stored as read-only
``complex128`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import ControlError, ShapeError
from .numerics import DEFAULT_TOL, Tolerances, commutes, hermitize, psd_sqrt
from .validation import check_mask, check_operator, check_square


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class HilbertSpec:
    ambient_dim: int

    def __post_init__(self):
        if int(self.ambient_dim) < 1:
            raise ShapeError(f"ambient dimension must be >= 1, got {self.ambient_dim}")


@dataclass(frozen=True)
class GFrameFamily:
    """Finite family of operators ``Lambda_j : C^n -> C^{d_j}``."""

    members: tuple

    def __post_init__(self):
        members = tuple(check_operator(M, name=f"member {j + 1}") for j, M in enumerate(self.members))
        if not members:
            raise ShapeError("a family needs at least one member")
        n = members[0].shape[1]
        for j, M in enumerate(members):
            if M.shape[1] != n:
                raise ShapeError(f"member {j + 1} acts on dimension {M.shape[1]}, expected {n}")
            if M.shape[0] < 1:
                raise ShapeError(f"member {j + 1} has an empty codomain")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_vectors(cls, vectors) -> "GFrameFamily":
        """Lift a vector family to the ``d_j = 1`` family ``f -> <f, f_j>``."""
        rows = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        return cls(tuple(v.conj()[None, :] for v in rows))

    @property
    def member_count(self) -> int:
        return len(self.members)

    @property
    def ambient_dim(self) -> int:
        return self.members[0].shape[1]

    @property
    def codomain_dims(self) -> tuple[int, ...]:
        return tuple(M.shape[0] for M in self.members)

    def grams(self) -> list[np.ndarray]:
        """``Lambda_j^* Lambda_j`` for every member."""
        return [M.conj().T @ M for M in self.members]

    def gram_sum(self) -> np.ndarray:
        """The uncontrolled frame operator ``S_Lambda``."""
        return sum(self.grams())

    def __eq__(self, other):
        if not isinstance(other, GFrameFamily):
            return NotImplemented
        if other.member_count != self.member_count:
            return False
        return all(a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.members, other.members))

    __hash__ = None


def validate_gl_plus(M, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float, float]:
    """Membership in GL+ via ``m I <= M <= M_ I`` with ``m > 0``.

    Returns ``(ok, m, M_)`` where ``m, M_`` are the extreme eigenvalues of the
    Hermitian part.
    """
    M = check_square(M, name="control")
    H, residual = hermitize(M)
    w = np.linalg.eigvalsh(H)
    lam_min, lam_max = float(w[0]), float(w[-1])
    hermitian = residual <= tol.commute_tol * max(float(np.linalg.norm(H, "fro")), 1.0)
    ok = hermitian and lam_min > tol.psd_tol * max(lam_max, 1.0)
    return bool(ok), lam_min, lam_max


@dataclass(frozen=True, eq=False)
class ControlPair:
    C: np.ndarray
    Cp: np.ndarray
    sqrt_product: np.ndarray

    @classmethod
    def build(cls, C, Cp, tol: Tolerances = DEFAULT_TOL) -> "ControlPair":
        C = check_square(C, name="C")
        Cp = check_square(Cp, n=C.shape[0], name="Cprime")
        for name, M in (("C", C), ("Cprime", Cp)):
            ok, lo, hi = validate_gl_plus(M, tol)
            if not ok:
                raise ControlError(
                    f"GL+ invariant violated: {name} must be Hermitian with positive spectrum "
                    f"(eigenvalues in [{lo:.3e}, {hi:.3e}])"
                )
        C = hermitize(C)[0]
        Cp = hermitize(Cp)[0]
        if not commutes(C, Cp, tol):
            raise ControlError("commutation invariant violated: C and Cprime do not commute")
        root = psd_sqrt(hermitize(C @ Cp)[0], tol)
        return cls(_frozen(C), _frozen(Cp), _frozen(root))

    @property
    def dim(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True, eq=False)
class KOperator:
    K: np.ndarray
    KKstar: np.ndarray

    @classmethod
    def build(cls, K) -> "KOperator":
        K = check_square(K, name="K")
        KKstar, _ = hermitize(K @ K.conj().T)
        return cls(_frozen(K), _frozen(KKstar))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.K)


@dataclass(frozen=True, eq=False)
class ControlledInstance:
    """A family together with its controls and K.

    ``commutation_ok`` records whether ``S_Lambda`` commutes with both
    controls; bound certification refuses instances where it does not.
    """

    space: HilbertSpec
    family: GFrameFamily
    controls: ControlPair
    k_op: KOperator
    commutation_ok: bool
    tol: Tolerances = field(default=DEFAULT_TOL)

    @property
    def n(self) -> int:
        return self.space.ambient_dim


def _as_controls(C, Cp, tol) -> ControlPair:
    if isinstance(C, ControlPair):
        return C
    return ControlPair.build(C, Cp, tol)


def _as_k(K) -> KOperator:
    return K if isinstance(K, KOperator) else KOperator.build(K)


def build_controlled_instance(family, C, Cp=None, K=None, tol: Tolerances = DEFAULT_TOL) -> ControlledInstance:
    """Validate and assemble a controlled instance.

    ``C`` may be a prebuilt :class:`ControlPair` (``Cp`` is then ignored) and
    ``K`` a prebuilt :class:`KOperator`; both skip re-validation.
    """
    if not isinstance(family, GFrameFamily):
        family = GFrameFamily(tuple(family))
    n = family.ambient_dim
    controls = _as_controls(C, Cp, tol)
    if K is None:
        raise ShapeError("K operator is required")
    k_op = _as_k(K)
    if controls.dim != n or k_op.K.shape[0] != n:
        raise ShapeError(
            f"dimension mismatch: family acts on {n}, controls on {controls.dim}, K on {k_op.K.shape[0]}"
        )
    S = family.gram_sum()
    ok = commutes(S, controls.C, tol) and commutes(S, controls.Cp, tol)
    return ControlledInstance(HilbertSpec(n), family, controls, k_op, bool(ok), tol)


@dataclass(frozen=True, eq=False)
class WeavingInstance:
    lambda_family: GFrameFamily
    omega_family: GFrameFamily
    controls: ControlPair
    k_op: KOperator
    tol: Tolerances = field(default=DEFAULT_TOL)

    def __post_init__(self):
        lam, om = self.lambda_family, self.omega_family
        if lam.member_count != om.member_count:
            raise ShapeError(f"families have {lam.member_count} and {om.member_count} members")
        if lam.ambient_dim != om.ambient_dim:
            raise ShapeError("families act on different ambient dimensions")
        if self.controls.dim != lam.ambient_dim or self.k_op.K.shape[0] != lam.ambient_dim:
            raise ShapeError("controls or K do not match the ambient dimension")

    @property
    def m(self) -> int:
        return self.lambda_family.member_count

    @property
    def n(self) -> int:
        return self.lambda_family.ambient_dim

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def lambda_instance(self) -> ControlledInstance:
        return build_controlled_instance(self.lambda_family, self.controls, K=self.k_op, tol=self.tol)

    def omega_instance(self) -> ControlledInstance:
        return build_controlled_instance(self.omega_family, self.controls, K=self.k_op, tol=self.tol)

    def mixed_instance(self, sigma: int) -> ControlledInstance:
        return build_controlled_instance(paper_subfamily(self, sigma), self.controls, K=self.k_op, tol=self.tol)


def build_weaving_instance(lambda_family, omega_family, C, Cp=None, K=None,
                           tol: Tolerances = DEFAULT_TOL) -> WeavingInstance:
    if not isinstance(lambda_family, GFrameFamily):
        lambda_family = GFrameFamily(tuple(lambda_family))
    if not isinstance(omega_family, GFrameFamily):
        omega_family = GFrameFamily(tuple(omega_family))
    controls = _as_controls(C, Cp, tol)
    if K is None:
        raise ShapeError("K operator is required")
    return WeavingInstance(lambda_family, omega_family, controls, _as_k(K), tol)


def paper_subfamily(w: WeavingInstance, sigma: int) -> GFrameFamily:
    """Member ``j`` from Lambda when bit ``j`` of ``sigma`` is set, else from Omega."""
    sigma = check_mask(sigma, w.m)
    lam, om = w.lambda_family.members, w.omega_family.members
    return GFrameFamily(tuple(lam[j] if sigma >> j & 1 else om[j] for j in range(w.m)))


@dataclass(frozen=True)
class BoundCertificate:
    """Optimal bounds with witnesses.

    ``verdict`` is the frame verdict for a single instance and the woven
    verdict for a weaving reduction. ``lower`` is ``inf`` when K vanishes.
    """

    lower: float
    upper: float
    lower_witness: Optional[np.ndarray]
    upper_witness: Optional[np.ndarray]
    verdict: bool
    worst_subset: Optional[int] = None
    upper_subset: Optional[int] = None
    sampled: bool = False
    subsets_evaluated: int = 1
    advisories: tuple = ()


def member_commutation(family: GFrameFamily, controls: ControlPair, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Every ``Lambda_j^* Lambda_j`` commutes with both controls."""
    return all(commutes(G, controls.C, tol) and commutes(G, controls.Cp, tol) for G in family.grams())


__all__ = [
    "BoundCertificate",
    "ControlPair",
    "ControlledInstance",
    "GFrameFamily",
    "HilbertSpec",
    "KOperator",
    "WeavingInstance",
    "build_controlled_instance",
    "build_weaving_instance",
    "member_commutation",
    "paper_subfamily",
    "validate_gl_plus",
]
