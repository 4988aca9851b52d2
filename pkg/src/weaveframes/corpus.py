"""Instance generators: the truncated worked example and seeded random pairs."""

from __future__ import annotations

import numpy as np

from .exceptions import ShapeError
from .model import GFrameFamily, WeavingInstance, build_weaving_instance
from .numerics import DEFAULT_TOL, Tolerances, hermitize
from .theorems import ScalarExpansion
from .validation import MAX_EXHAUSTIVE_MEMBERS

K_MODES = ("random", "identity", "cross")
OMEGA_MODES = ("independent", "scaled")


def example_controls(N: int) -> np.ndarray:
    """Hermitian control acting on ``span{e1, e2}`` as ``[[1, 1/2], [1/2, 1]]`` and as the identity elsewhere.

    This is the self-adjoint part of the map sending ``e1`` to ``e1 + e2``.
    """
    C = np.eye(N)
    C[1, 0] = C[0, 1] = 0.5
    return C


def paper_example(N: int, tol: Tolerances = DEFAULT_TOL) -> tuple[WeavingInstance, ScalarExpansion]:
    """The worked weaving example truncated to dimension ``N``.

    Member ``j`` (1-based, ``j = 1..N-3``) reads the coordinates of
    ``e_{j+2}`` and ``e_{j+3}``; the Omega member scales the first one by
    ``1 + 2^-j``. K projects onto ``span{e3, ..., eN}``.
    """
    if N < 6:
        raise ShapeError(f"the truncated example needs N >= 6, got {N}")
    m = N - 3
    lam, om = [], []
    for j in range(1, m + 1):
        L = np.zeros((2, N))
        L[0, j + 1] = 1.0
        L[1, j + 2] = 1.0
        O = L.copy()
        O[0, j + 1] = 1.0 + 2.0 ** -j
        lam.append(L)
        om.append(O)
    C = example_controls(N)
    K = np.diag([0.0, 0.0] + [1.0] * (N - 2))
    w = build_weaving_instance(GFrameFamily(tuple(lam)), GFrameFamily(tuple(om)), C, C, K, tol)
    coefficients = {}
    for k in range(N):
        for j in range(1, m + 1):
            coefficients[(k, j - 1, k)] = 1.0 + 2.0 ** -j if k == j + 1 else 1.0
    return w, ScalarExpansion(basis=np.eye(N), coefficients=coefficients, M=1.0)


def _unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _spd(rng, V, spread):
    logs = rng.uniform(-np.log(spread), np.log(spread), size=V.shape[0])
    return hermitize((V * np.exp(logs)) @ V.conj().T)[0]


def _diagonal_member(rng, V, d):
    """``U Sigma V^*`` with ``Sigma`` supported on ``d`` distinct columns, so its Gram is diagonal in ``V``."""
    n = V.shape[0]
    cols = rng.choice(n, size=d, replace=False)
    Sigma = np.zeros((d, n), dtype=np.complex128)
    Sigma[np.arange(d), cols] = rng.uniform(0.5, 1.5, size=d) * np.exp(2j * np.pi * rng.uniform(size=d))
    return _unitary(rng, d) @ Sigma @ V.conj().T


def _dense_member(rng, d, n):
    return (rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))) / np.sqrt(n)


def _generate(seed, n, m, dims, spectrum_spread, commuting, k_mode, omega_mode, scale_range, tol):
    if n < 1 or m < 1 or m > MAX_EXHAUSTIVE_MEMBERS:
        raise ValueError(f"need n >= 1 and 1 <= m <= {MAX_EXHAUSTIVE_MEMBERS}, got n={n}, m={m}")
    if spectrum_spread < 1:
        raise ValueError("spectrum_spread must be >= 1")
    if k_mode not in K_MODES or omega_mode not in OMEGA_MODES:
        raise ValueError(f"k_mode must be one of {K_MODES}, omega_mode one of {OMEGA_MODES}")
    if omega_mode == "scaled" and not commuting:
        raise ValueError("scaled Omega members need the commuting construction")
    rng = np.random.default_rng(seed)
    if dims is None:
        dims = rng.integers(1, min(3, n) + 1, size=m).tolist()
    dims = [int(d) for d in dims]
    if len(dims) != m or min(dims) < 1 or (commuting and max(dims) > n):
        raise ValueError(f"dims must be {m} positive ints (each <= n in commuting mode), got {dims}")

    V = _unitary(rng, n)
    if spectrum_spread == 1:
        C = Cp = np.eye(n)
    else:
        C, Cp = _spd(rng, V, spectrum_spread), _spd(rng, V, spectrum_spread)

    scales = None
    if commuting:
        lam = [_diagonal_member(rng, V, d) for d in dims]
        if omega_mode == "scaled":
            scales = rng.uniform(*scale_range, size=(m, n))
            om = [L @ ((V * t) @ V.conj().T) for L, t in zip(lam, scales)]
        else:
            om = [_diagonal_member(rng, V, d) for d in dims]
    else:
        lam = [_dense_member(rng, d, n) for d in dims]
        om = [_dense_member(rng, d, n) for d in dims]

    if k_mode == "identity":
        K = np.eye(n)
    elif k_mode == "cross":
        K = sum(C @ L.conj().T @ O @ Cp for L, O in zip(lam, om))
    else:
        rank = int(rng.integers(1, n + 1))
        Q = _unitary(rng, n)[:, :rank]
        G = (_unitary(rng, n) * rng.uniform(0.5, 2.0, size=n)) @ _unitary(rng, n).conj().T
        K = (Q @ Q.conj().T) @ G
    w = build_weaving_instance(GFrameFamily(tuple(lam)), GFrameFamily(tuple(om)), C, Cp, K, tol)
    return w, V, scales


def random_instance(seed: int, n: int, m: int, dims=None, spectrum_spread: float = 2.0, *,
                    commuting: bool = True, k_mode: str = "random", omega_mode: str = "independent",
                    scale_range=(0.5, 2.0), tol: Tolerances = DEFAULT_TOL) -> WeavingInstance:
    """Seeded random weaving pair.

    With ``commuting`` (the default) the controls share a random eigenbasis
    ``V`` and every member Gram matrix is diagonal in ``V``, so the standing
    commutation assumption holds for every mixture. ``spectrum_spread = 1``
    gives ``C = C' = I`` exactly.
    """
    w, _, _ = _generate(seed, n, m, dims, spectrum_spread, commuting, k_mode, omega_mode, scale_range, tol)
    return w


def random_scaled_pair(seed: int, n: int, m: int, dims=None, spectrum_spread: float = 2.0, *,
                       k_mode: str = "random", scale_range=(0.5, 2.0),
                       tol: Tolerances = DEFAULT_TOL) -> tuple[WeavingInstance, ScalarExpansion]:
    """Random pair whose Omega members rescale Lambda along the control eigenbasis.

    Returns the matching diagonal scalar expansion (basis = control
    eigenbasis, ``M`` = smallest squared scale).
    """
    w, V, scales = _generate(seed, n, m, dims, spectrum_spread, True, k_mode, "scaled", scale_range, tol)
    coefficients = {(k, j, k): float(scales[j, k]) for j in range(m) for k in range(n)}
    M = float(np.min(scales) ** 2)
    return w, ScalarExpansion(basis=V, coefficients=coefficients, M=M)
