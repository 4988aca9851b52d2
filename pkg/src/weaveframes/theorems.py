"""Executable checkers for the weaving theorems.

Each checker verifies the theorem's hypotheses numerically, states the
bounds the theorem then guarantees, and compares them against the
exhaustive weaving oracle. A report whose hypotheses hold but whose oracle
disagrees is a counterexample.

Hypothesis identities are tested with Frobenius-relative tolerance 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import is_bessel, optimal_bounds
from .exceptions import FrameError, ShapeError
from .model import BoundCertificate, GFrameFamily, WeavingInstance, build_weaving_instance, member_commutation
from .numerics import Tolerances, hermitize, loewner_leq
from .validation import MAX_EXHAUSTIVE_MEMBERS, check_cap, check_operator, indices_from_mask
from .weaving import _MixedGrams, universal_bounds_exhaustive

IDENTITY_TOL = 1e-8
ADJOINT_TOL = 1e-10
ORACLE_TOL = 1e-6


@dataclass
class TheoremReport:
    theorem_id: str
    hypotheses_hold: bool
    hypotheses: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    claimed_lower: float = 0.0
    claimed_upper: float = math.inf
    claims_woven: bool = True
    oracle_ran: bool = False
    oracle_agrees: Optional[bool] = None
    oracle_lower: Optional[float] = None
    oracle_upper: Optional[float] = None
    oracle_verdict: Optional[bool] = None
    failing_subset: Optional[int] = None
    notes: list = field(default_factory=list)

    def to_dict(self, m: int | None = None) -> dict:
        out = {k: v for k, v in self.__dict__.items()}
        if m is not None and self.failing_subset is not None:
            out["failing_subset"] = indices_from_mask(self.failing_subset, m)
        return out


@dataclass(frozen=True, eq=False)
class ScalarExpansion:
    """Coefficients expressing Omega members through Lambda members.

    ``basis`` holds the orthonormal vectors ``e_k`` as columns.
    ``coefficients[(i, j, k)]`` is the coefficient of ``Lambda_j R e_i`` in
    ``Omega_j R e_k`` (0-based indices, absent keys are zero).
    """

    basis: np.ndarray
    coefficients: dict
    M: float

    def __post_init__(self):
        basis = check_operator(self.basis, name="basis")
        if basis.shape[0] != basis.shape[1]:
            raise ShapeError("basis must hold n vectors of length n")
        if not self.M > 0:
            raise ValueError("M must be positive")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coefficients", {tuple(int(x) for x in key): float(v)
                                                  for key, v in self.coefficients.items()})

    def tensor(self, m: int) -> np.ndarray:
        """Dense coefficient array indexed ``[j, i, k]``."""
        n = self.basis.shape[0]
        out = np.zeros((m, n, n))
        for (i, j, k), v in self.coefficients.items():
            if not (0 <= i < n and 0 <= k < n and 0 <= j < m):
                raise ShapeError(f"coefficient index {(i, j, k)} out of range")
            out[j, i, k] = v
        return out


@dataclass(frozen=True, eq=False)
class AtomicSystem:
    """Local frames: ``local_frames_H[j]`` rows are the vectors ``f_jk`` of the codomain of ``Lambda_j``."""

    local_frames_H: tuple
    local_frames_W: tuple

    def __post_init__(self):
        for name in ("local_frames_H", "local_frames_W"):
            frames = tuple(check_operator(np.atleast_2d(F), name=f"{name}[{j}]")
                           for j, F in enumerate(getattr(self, name)))
            object.__setattr__(self, name, frames)

    @classmethod
    def orthonormal(cls, w: WeavingInstance) -> "AtomicSystem":
        return cls(tuple(np.eye(d) for d in w.lambda_family.codomain_dims),
                   tuple(np.eye(d) for d in w.omega_family.codomain_dims))

    def check_against(self, w: WeavingInstance) -> None:
        for name, frames, dims in (("H", self.local_frames_H, w.lambda_family.codomain_dims),
                                   ("W", self.local_frames_W, w.omega_family.codomain_dims)):
            if len(frames) != len(dims) or any(F.shape[1] != d for F, d in zip(frames, dims)):
                raise ShapeError(f"local frames for {name} do not match the codomain dimensions {dims}")

    def bounds(self, tol: Tolerances) -> tuple[float, float, float, float]:
        """``(alpha, beta, alpha', beta')``: extreme local frame bounds over all nodes."""
        out = []
        for name, frames in (("H", self.local_frames_H), ("W", self.local_frames_W)):
            lows, highs = [], []
            for j, F in enumerate(frames):
                w_ = np.linalg.eigvalsh(F.T @ F.conj())
                if w_[0] <= tol.psd_tol * max(w_[-1], 1.0):
                    raise FrameError(f"local family {name}[{j + 1}] is not a frame for its subspace")
                lows.append(w_[0])
                highs.append(w_[-1])
            out.extend([float(min(lows)), float(max(highs))])
        return out[0], out[1], out[2], out[3]


def _rel(x: np.ndarray, scale: float) -> float:
    return float(np.linalg.norm(x) / max(scale, 1.0))


def _run_oracle(w: WeavingInstance, tol: Tolerances, report: TheoremReport,
                oracle: BoundCertificate | None) -> BoundCertificate | None:
    if oracle is not None:
        return oracle
    if w.m > MAX_EXHAUSTIVE_MEMBERS:
        report.notes.append("oracle skipped: member count above the exhaustive cap")
        return None
    try:
        return universal_bounds_exhaustive(w, tol)
    except FrameError as exc:
        report.notes.append(f"oracle refused: {exc}")
        return None


def _record_oracle(report: TheoremReport, oracle: BoundCertificate | None, oracle_tol: float) -> None:
    """Soundness comparison: a claim must contain the oracle interval."""
    if oracle is None:
        return
    report.oracle_ran = True
    report.oracle_lower, report.oracle_upper, report.oracle_verdict = oracle.lower, oracle.upper, oracle.verdict
    if report.hypotheses_hold:
        ok = oracle.lower >= report.claimed_lower - oracle_tol and oracle.upper <= report.claimed_upper + oracle_tol
        if report.claims_woven:
            ok = ok and oracle.verdict
        report.oracle_agrees = bool(ok)


def _components(w: WeavingInstance, tol: Tolerances, report: TheoremReport):
    """Optimal bounds of the two component families, or ``None`` when refused."""
    try:
        lam = optimal_bounds(w.lambda_instance(), tol)
        om = optimal_bounds(w.omega_instance(), tol)
    except FrameError as exc:
        report.notes.append(f"component bounds refused: {exc}")
        report.hypotheses["components_certified"] = False
        return None, None
    report.hypotheses["components_certified"] = True
    report.diagnostics.update(lambda_lower=lam.lower, lambda_upper=lam.upper,
                              omega_lower=om.lower, omega_upper=om.upper)
    return lam, om


def _standing_commutation(w: WeavingInstance, tol: Tolerances, report: TheoremReport) -> None:
    report.hypotheses["member_commutation"] = bool(
        member_commutation(w.lambda_family, w.controls, tol) and member_commutation(w.omega_family, w.controls, tol)
    )


def _finish(report: TheoremReport) -> TheoremReport:
    report.hypotheses_hold = bool(all(report.hypotheses.values()))
    return report


def mixed_synthesis(w: WeavingInstance, sigma: int) -> np.ndarray:
    """``U_sigma``: column blocks ``R Lambda_j^*`` for ``j`` in sigma, ``R Omega_j^*`` otherwise."""
    R = w.controls.sqrt_product
    lam, om = w.lambda_family.members, w.omega_family.members
    return np.hstack([R @ (lam[j] if sigma >> j & 1 else om[j]).conj().T for j in range(w.m)])


def mixed_analysis(w: WeavingInstance, sigma: int, f) -> np.ndarray:
    """Concatenated blocks ``Lambda_j R f`` (j in sigma) and ``Omega_j R f`` (j not in sigma)."""
    Rf = w.controls.sqrt_product @ np.asarray(f, dtype=np.complex128)
    lam, om = w.lambda_family.members, w.omega_family.members
    return np.concatenate([(lam[j] if sigma >> j & 1 else om[j]) @ Rf for j in range(w.m)])


def check_characterization(w: WeavingInstance, A_candidate: float, tol: Tolerances | None = None, *,
                           seed: int = 0, oracle: BoundCertificate | None = None,
                           oracle_tol: float = ORACLE_TOL) -> TheoremReport:
    """Operator characterization: ``A K K^* <= U_sigma U_sigma^*`` for every subset.

    This is an equivalence, so the oracle is compared whether or not the
    condition holds: passing requires a universal lower bound of at least
    ``A_candidate``, failing requires one of at most ``A_candidate``.
    """
    tol = tol or w.tol
    check_cap(w.m)
    report = TheoremReport("characterization", False)
    rng = np.random.default_rng(seed)
    KK = w.k_op.KKstar
    worst_adjoint = 0.0
    failing = None
    for sigma in range(1 << w.m):
        U = mixed_synthesis(w, sigma)
        f = rng.standard_normal(w.n) + 1j * rng.standard_normal(w.n)
        worst_adjoint = max(worst_adjoint, _rel(U.conj().T @ f - mixed_analysis(w, sigma, f), np.linalg.norm(f)))
        if failing is None and not loewner_leq(A_candidate * KK, hermitize(U @ U.conj().T)[0], tol):
            failing = sigma
    full = mixed_synthesis(w, w.full_mask)
    empty = mixed_synthesis(w, 0)
    B1 = float(np.linalg.norm(full, 2) ** 2)
    B2 = float(np.linalg.norm(empty, 2) ** 2)
    report.diagnostics.update(adjoint_residual=worst_adjoint, lambda_upper=B1, omega_upper=B2)
    report.hypotheses.update(
        positive_candidate=bool(A_candidate > 0),
        adjoint_formula=bool(worst_adjoint <= ADJOINT_TOL),
        loewner_all_subsets=failing is None,
    )
    report.failing_subset = failing
    report.claimed_lower, report.claimed_upper = float(A_candidate), B1 + B2
    _finish(report)
    oracle = _run_oracle(w, tol, report, oracle)
    _record_oracle(report, oracle, oracle_tol)
    if oracle is not None and not report.hypotheses_hold and A_candidate > 0:
        report.oracle_agrees = bool(oracle.lower <= A_candidate + oracle_tol)
    return report


def check_perturbation_scalars(w: WeavingInstance, exp: ScalarExpansion, tol: Tolerances | None = None, *,
                               omega_upper: float | None = None, oracle: BoundCertificate | None = None,
                               oracle_tol: float = ORACLE_TOL) -> TheoremReport:
    """Scalar-perturbation sufficient condition.

    Hypotheses: per member the images ``Lambda_j R e_k`` and ``Omega_j R e_k``
    are orthogonal sets, the expansion identity holds, and every diagonal
    coefficient satisfies ``|beta_kj^k|^2 >= M``. Claimed bounds are
    ``min(1, M) A`` and ``B + beta`` with ``(A, B)`` the Lambda bounds and
    ``beta`` the Omega upper bound (``omega_upper`` if stated).
    """
    tol = tol or w.tol
    E = exp.basis
    n, m = w.n, w.m
    if E.shape[0] != n:
        raise ShapeError(f"basis has dimension {E.shape[0]}, expected {n}")
    if np.linalg.norm(E.conj().T @ E - np.eye(n)) > 1e-9:
        raise FrameError("expansion basis is not orthonormal")
    report = TheoremReport("perturbation", False)
    report.notes.append("lower bound uses the proof's min(1, M) * A rather than the bare min(1, M)")
    _standing_commutation(w, tol, report)
    R = w.controls.sqrt_product
    beta = exp.tensor(m)
    worst_orth = worst_orth_o = worst_expand = 0.0
    for j in range(m):
        LV = w.lambda_family.members[j] @ R @ E
        OV = w.omega_family.members[j] @ R @ E
        for V, key in ((LV, "lambda"), (OV, "omega")):
            G = V.conj().T @ V
            off = _rel(G - np.diag(np.diag(G)), np.linalg.norm(G))
            if key == "lambda":
                worst_orth = max(worst_orth, off)
            else:
                worst_orth_o = max(worst_orth_o, off)
        worst_expand = max(worst_expand, _rel(OV - LV @ beta[j], np.linalg.norm(OV)))
    diag_sq = np.array([[beta[j, k, k] ** 2 for k in range(n)] for j in range(m)])
    inf_sq = float(diag_sq.min())
    report.diagnostics.update(lambda_orthogonality=worst_orth, omega_orthogonality=worst_orth_o,
                              expansion_residual=worst_expand, inf_diagonal_sq=inf_sq, M=exp.M)
    report.hypotheses.update(
        orthogonal_sets=bool(worst_orth <= IDENTITY_TOL and worst_orth_o <= IDENTITY_TOL),
        expansion_identity=bool(worst_expand <= IDENTITY_TOL),
        inf_condition=bool(inf_sq >= exp.M),
    )
    lam, om = _components(w, tol, report)
    if lam is not None:
        report.hypotheses["lambda_is_frame"] = bool(lam.verdict and math.isfinite(lam.lower))
        beta_omega = om.upper
        if omega_upper is not None:
            report.hypotheses["stated_omega_bound"] = is_bessel(w.omega_instance(), omega_upper, tol)
            beta_omega = float(omega_upper)
        report.claimed_lower = min(1.0, exp.M) * lam.lower
        report.claimed_upper = lam.upper + beta_omega
    _finish(report)
    _record_oracle(report, _run_oracle(w, tol, report, oracle), oracle_tol)
    return report


def check_cross_synthesis(w: WeavingInstance, tol: Tolerances | None = None, *,
                          oracle: BoundCertificate | None = None, oracle_tol: float = ORACLE_TOL) -> TheoremReport:
    """Cross-synthesis sufficient condition ``K = sum_i C Lambda_i^* Omega_i C'`` with symmetric terms.

    Besides the stated hypotheses, the proof rewrites each term as
    ``R Lambda_i^* Omega_i R`` with ``R = (C C')^{1/2}``; that identity is
    checked as well.
    """
    tol = tol or w.tol
    report = TheoremReport("cross-synthesis", False)
    C, Cp, R = w.controls.C, w.controls.Cp, w.controls.sqrt_product
    K = w.k_op.K
    total = np.zeros_like(K)
    worst_sym = worst_root = 0.0
    for L, O in zip(w.lambda_family.members, w.omega_family.members):
        term = C @ L.conj().T @ O @ Cp
        total = total + term
        scale = np.linalg.norm(term)
        worst_sym = max(worst_sym, _rel(term - C @ O.conj().T @ L @ Cp, scale))
        worst_root = max(worst_root, _rel(term - R @ L.conj().T @ O @ R, scale))
    k_res = _rel(K - total, np.linalg.norm(K))
    report.diagnostics.update(k_residual=k_res, symmetry_residual=worst_sym, root_rewrite_residual=worst_root)
    report.hypotheses.update(
        k_decomposition=bool(k_res <= IDENTITY_TOL),
        term_symmetry=bool(worst_sym <= IDENTITY_TOL),
        root_rewrite=bool(worst_root <= IDENTITY_TOL),
    )
    lam, om = _components(w, tol, report)
    if lam is not None:
        B1, B2 = lam.upper, om.upper
        report.hypotheses["nonzero_bessel_bounds"] = bool(max(B1, B2) > tol.psd_tol)
        if max(B1, B2) > 0:
            report.claimed_lower = 1.0 / (2.0 * max(B1, B2))
        report.claimed_upper = B1 + B2
    _finish(report)
    _record_oracle(report, _run_oracle(w, tol, report, oracle), oracle_tol)
    return report


def _induced_family(family: GFrameFamily, frames, R: np.ndarray) -> GFrameFamily:
    """Node ``j`` becomes the matrix whose rows are ``(R Lambda_j^* f_jk)^*``."""
    return GFrameFamily(tuple(F.conj() @ M @ R for F, M in zip(frames, family.members)))


def induced_weaving(w: WeavingInstance, atoms: AtomicSystem) -> WeavingInstance:
    """Ordinary vector weaving (``C = C' = I``) of the lifted atoms, grouped by node."""
    R = w.controls.sqrt_product
    eye = np.eye(w.n)
    return build_weaving_instance(_induced_family(w.lambda_family, atoms.local_frames_H, R),
                                  _induced_family(w.omega_family, atoms.local_frames_W, R),
                                  eye, eye, w.k_op, w.tol)


def check_atomic_equivalence(w: WeavingInstance, atoms: AtomicSystem, direction: str = "forward",
                             tol: Tolerances | None = None, *, oracle: BoundCertificate | None = None,
                             oracle_tol: float = ORACLE_TOL) -> TheoremReport:
    """Transfer between controlled g-weaving and ordinary weaving of lifted atoms.

    ``forward``: from the g-level universal bounds ``(A, B)`` claims
    ``(min(alpha, alpha') A, max(beta, beta') B)`` for the lifted vectors.
    ``backward``: from the lifted bounds ``(C*, D*)`` claims
    ``(min(1/beta, 1/beta') C*, max(1/alpha, 1/alpha') D*)`` at g-level.
    Both woven verdicts must coincide in either direction.
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    tol = tol or w.tol
    check_cap(w.m)
    atoms.check_against(w)
    alpha, beta, alpha_p, beta_p = atoms.bounds(tol)
    report = TheoremReport(f"atomic-{direction}", False)
    report.diagnostics.update(alpha=alpha, beta=beta, alpha_prime=alpha_p, beta_prime=beta_p)
    report.hypotheses["local_frames"] = True

    g_level = _run_oracle(w, tol, report, oracle)
    try:
        lifted = universal_bounds_exhaustive(induced_weaving(w, atoms), tol)
    except FrameError as exc:
        report.notes.append(f"lifted oracle refused: {exc}")
        lifted = None
    if g_level is None or lifted is None:
        report.hypotheses["premise_woven"] = False
        return _finish(report)
    report.diagnostics.update(g_lower=g_level.lower, g_upper=g_level.upper,
                              lifted_lower=lifted.lower, lifted_upper=lifted.upper)
    if direction == "forward":
        premise, target = g_level, lifted
        report.claimed_lower = min(alpha, alpha_p) * premise.lower
        report.claimed_upper = max(beta, beta_p) * premise.upper
    else:
        premise, target = lifted, g_level
        report.claimed_lower = min(1.0 / beta, 1.0 / beta_p) * premise.lower
        report.claimed_upper = max(1.0 / alpha, 1.0 / alpha_p) * premise.upper
    report.hypotheses["premise_woven"] = bool(premise.verdict)
    _finish(report)
    _record_oracle(report, target, oracle_tol)
    same = premise.verdict == target.verdict
    report.oracle_agrees = bool(same and (report.oracle_agrees if report.hypotheses_hold else True))
    return report


def check_positive_gap(w: WeavingInstance, mode: str = "per_index", tol: Tolerances | None = None, *,
                       oracle: BoundCertificate | None = None, oracle_tol: float = ORACLE_TOL) -> TheoremReport:
    """Positive-gap sufficient condition: ``sum_{i in J} (Omega_i^* Omega_i - Lambda_i^* Lambda_i) >= 0``.

    ``per_index`` tests each ``i`` separately, which implies every ``J``;
    ``all_subsets`` tests every nonempty ``J``.
    """
    if mode not in ("per_index", "all_subsets"):
        raise ValueError("mode must be 'per_index' or 'all_subsets'")
    tol = tol or w.tol
    report = TheoremReport(f"positive-gap:{mode}", False)
    report.notes.append("checked in the controlled setting; C = C' = I is the plain case")
    _standing_commutation(w, tol, report)
    lg = w.lambda_family.grams()
    og = w.omega_family.grams()
    failing = None
    if mode == "per_index":
        for i in range(w.m):
            if not loewner_leq(lg[i], og[i], tol):
                failing = 1 << i
                break
    else:
        check_cap(w.m)
        for J in range(1, 1 << w.m):
            picked = [i for i in range(w.m) if J >> i & 1]
            if not loewner_leq(sum(lg[i] for i in picked), sum(og[i] for i in picked), tol):
                failing = J
                break
    report.failing_subset = failing
    report.hypotheses["gap_positive"] = failing is None
    lam, om = _components(w, tol, report)
    if lam is not None:
        report.hypotheses["lambda_is_frame"] = bool(lam.verdict and math.isfinite(lam.lower))
        report.claimed_lower = lam.lower
        report.claimed_upper = lam.upper + om.upper
    _finish(report)
    _record_oracle(report, _run_oracle(w, tol, report, oracle), oracle_tol)
    return report


def check_bessel_sum(w: WeavingInstance, tol: Tolerances | None = None, *,
                     oracle: BoundCertificate | None = None, oracle_tol: float = ORACLE_TOL) -> TheoremReport:
    """Every mixture is Bessel with bound ``B1 + B2``; verified subset by subset."""
    tol = tol or w.tol
    check_cap(w.m)
    report = TheoremReport("bessel-sum", False, claims_woven=False)
    lam, om = _components(w, tol, report)
    if lam is None:
        return _finish(report)
    report.claimed_lower = 0.0
    report.claimed_upper = lam.upper + om.upper
    _finish(report)
    grams = _MixedGrams(w)
    C, Cp = w.controls.C, w.controls.Cp
    violations = 0
    worst = -math.inf
    first = None
    for sigma in range(1 << w.m):
        S = hermitize(Cp @ grams.plain(sigma) @ C)[0]
        top = float(np.linalg.eigvalsh(S)[-1])
        worst = max(worst, top)
        if top > report.claimed_upper + tol.psd_tol * max(report.claimed_upper, 1.0):
            violations += 1
            first = sigma if first is None else first
    report.failing_subset = first
    report.diagnostics.update(violations=violations, max_subset_upper=worst)
    oracle = _run_oracle(w, tol, report, oracle)
    _record_oracle(report, oracle, oracle_tol)
    if report.oracle_ran:
        report.oracle_agrees = bool(report.oracle_agrees and violations == 0)
    return report
