"""Estimator-style wrappers around the functional API.

``fit`` takes an instance (not a data matrix); fitted attributes end in an
underscore. ``transform`` applies the controlled analysis operator to rows
of a vector batch.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .bounds import optimal_bounds
from .frame_ops import analysis_apply
from .model import ControlledInstance, WeavingInstance
from .numerics import Tolerances
from .validation import check_vectors, indices_from_mask
from .weaving import universal_bounds_exhaustive, universal_bounds_sampled


def _check_fitted(est, attr):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class ControlledFrameBounds(TransformerMixin, BaseEstimator):
    """Optimal bounds of a controlled K-g-frame.

    Parameters
    ----------
    psd_tol, bisect_tol, commute_tol : float
        Numerical tolerances, see :class:`Tolerances`.

    Attributes
    ----------
    lower_, upper_ : float
        Optimal lower and upper bounds.
    is_frame_ : bool
    certificate_ : BoundCertificate
    """

    def __init__(self, psd_tol=1e-9, bisect_tol=1e-10, commute_tol=1e-8):
        self.psd_tol = psd_tol
        self.bisect_tol = bisect_tol
        self.commute_tol = commute_tol

    def _tol(self):
        return Tolerances(self.psd_tol, self.bisect_tol, self.commute_tol)

    def fit(self, X, y=None):
        if isinstance(X, WeavingInstance):
            X = X.lambda_instance()
        if not isinstance(X, ControlledInstance):
            raise TypeError(f"expected a ControlledInstance, got {type(X).__name__}")
        cert = optimal_bounds(X, self._tol())
        self.instance_ = X
        self.certificate_ = cert
        self.lower_, self.upper_ = cert.lower, cert.upper
        self.is_frame_ = cert.verdict
        self.n_features_in_ = X.n
        return self

    def transform(self, X):
        """Concatenated analysis coefficients, one row per input vector."""
        _check_fitted(self, "instance_")
        F = check_vectors(X, n=self.n_features_in_)
        return np.stack([np.concatenate(analysis_apply(self.instance_, f)) for f in F])


class WeavingAnalyzer(BaseEstimator):
    """Universal bounds of a weaving pair.

    Parameters
    ----------
    mode : {"exhaustive", "sampled"}
    trials : int
        Subsets drawn in sampled mode.
    seed : int
    psd_tol, bisect_tol, commute_tol : float
    """

    def __init__(self, mode="exhaustive", trials=256, seed=0,
                 psd_tol=1e-9, bisect_tol=1e-10, commute_tol=1e-8):
        self.mode = mode
        self.trials = trials
        self.seed = seed
        self.psd_tol = psd_tol
        self.bisect_tol = bisect_tol
        self.commute_tol = commute_tol

    def fit(self, X, y=None):
        if not isinstance(X, WeavingInstance):
            raise TypeError(f"expected a WeavingInstance, got {type(X).__name__}")
        tol = Tolerances(self.psd_tol, self.bisect_tol, self.commute_tol)
        if self.mode == "exhaustive":
            cert = universal_bounds_exhaustive(X, tol)
        elif self.mode == "sampled":
            cert = universal_bounds_sampled(X, self.trials, self.seed, tol)
        else:
            raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {self.mode!r}")
        self.certificate_ = cert
        self.lower_, self.upper_ = cert.lower, cert.upper
        self.woven_ = cert.verdict
        self.worst_subset_ = indices_from_mask(cert.worst_subset, X.m)
        return self

    def predict(self, X=None):
        """Woven verdict of the fitted pair."""
        _check_fitted(self, "woven_")
        return self.woven_
