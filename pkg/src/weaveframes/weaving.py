"""Wovenness by enumeration of the member subsets.

Subsets are bitmasks: bit ``j`` set means member ``j`` is taken from the
Lambda family, otherwise from Omega. Per-subset results are combined by a
min/max reduction, so evaluation order never changes the output; ties for
the worst subset go to the smallest mask.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import replace

import numpy as np

from .bounds import certify_operator, optimal_bounds
from .exceptions import UncertifiableError
from .model import BoundCertificate, WeavingInstance
from .numerics import Tolerances, commutes, hermitize
from .validation import check_cap, check_mask


class _MixedGrams:
    """Cached member Gram matrices so each subset costs one sum."""

    def __init__(self, w: WeavingInstance):
        self.w = w
        self.lam = np.stack(w.lambda_family.grams())
        self.om = np.stack(w.omega_family.grams())

    def plain(self, sigma: int) -> np.ndarray:
        bits = np.array([(sigma >> j) & 1 for j in range(self.w.m)], dtype=bool)
        return self.lam[bits].sum(axis=0) + self.om[~bits].sum(axis=0)


def _certify_mask(grams: _MixedGrams, sigma: int, tol: Tolerances) -> BoundCertificate:
    w = grams.w
    S = grams.plain(sigma)
    if not (commutes(S, w.controls.C, tol) and commutes(S, w.controls.Cp, tol)):
        raise UncertifiableError(f"subset mask {sigma}: mixed frame operator does not commute with the controls")
    controlled = hermitize(w.controls.Cp @ S @ w.controls.C)[0]
    return certify_operator(controlled, w.k_op.KKstar, tol)


def per_subset_bounds(w: WeavingInstance, sigma: int, tol: Tolerances | None = None) -> BoundCertificate:
    tol = tol or w.tol
    sigma = check_mask(sigma, w.m)
    cert = optimal_bounds(w.mixed_instance(sigma), tol)
    return replace(cert, worst_subset=sigma, upper_subset=sigma)


def iter_subset_bounds(w: WeavingInstance, masks: Iterable[int],
                       tol: Tolerances | None = None) -> Iterator[tuple[int, BoundCertificate]]:
    tol = tol or w.tol
    grams = _MixedGrams(w)
    for sigma in masks:
        yield sigma, _certify_mask(grams, check_mask(sigma, w.m), tol)


def _reduce(results: Iterable[tuple[int, BoundCertificate]], tol: Tolerances, sampled: bool) -> BoundCertificate:
    # values within bisect_tol count as ties so bisection noise cannot pick the worst subset
    low_ties: dict[int, BoundCertificate] = {}
    high_ties: dict[int, BoundCertificate] = {}
    lowest = highest = None
    count = 0
    every_frame = True
    advisories: list[str] = []
    for sigma, cert in results:
        count += 1
        every_frame &= cert.verdict
        advisories.extend(a for a in cert.advisories if a not in advisories)
        if lowest is None or cert.lower < lowest:
            lowest = cert.lower
            low_ties = {s: c for s, c in low_ties.items() if c.lower <= lowest + tol.bisect_tol}
        if cert.lower <= lowest + tol.bisect_tol:
            low_ties[sigma] = cert
        if highest is None or cert.upper > highest:
            highest = cert.upper
            high_ties = {s: c for s, c in high_ties.items() if c.upper >= highest - tol.bisect_tol}
        if cert.upper >= highest - tol.bisect_tol:
            high_ties[sigma] = cert
    if sampled:
        advisories.append("sampled, not exhaustive")
    worst = min(low_ties)
    top = min(high_ties)
    return BoundCertificate(
        lower=lowest, upper=highest,
        lower_witness=low_ties[worst].lower_witness, upper_witness=high_ties[top].upper_witness,
        verdict=bool(every_frame and lowest > tol.psd_tol),
        worst_subset=worst, upper_subset=top,
        sampled=sampled, subsets_evaluated=count, advisories=tuple(advisories),
    )


def universal_bounds_exhaustive(w: WeavingInstance, tol: Tolerances | None = None) -> BoundCertificate:
    """Universal bounds over all ``2^m`` subsets.

    Raises :class:`CapExceededError` above 20 members.
    """
    tol = tol or w.tol
    check_cap(w.m)
    return _reduce(iter_subset_bounds(w, range(1 << w.m), tol), tol, sampled=False)


def sample_masks(m: int, trials: int, seed: int) -> list[int]:
    """Deterministic subset sample, always containing the empty and the full subset."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    full = (1 << m) - 1
    if m <= 30:
        total = 1 << m
        drawn = rng.choice(total, size=min(trials, total), replace=False).tolist()
    else:
        bits = rng.integers(0, 2, size=(trials, m))
        drawn = [sum(int(b) << j for j, b in enumerate(row)) for row in bits]
    return sorted({0, full, *map(int, drawn)})


def universal_bounds_sampled(w: WeavingInstance, trials: int, seed: int,
                             tol: Tolerances | None = None) -> BoundCertificate:
    """Universal bounds over a seeded sample of subsets.

    The lower value over-estimates and the upper value under-estimates the
    exhaustive ones.
    """
    tol = tol or w.tol
    masks = sample_masks(w.m, trials, seed)
    return _reduce(iter_subset_bounds(w, masks, tol), tol, sampled=True)
