"""Principal component analysis with deterministic component signs."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import DataError


class PcaReducer(TransformerMixin, BaseEstimator):
    """Mean-centering PCA computed through a singular value decomposition.

    The input is only centered, never variance-scaled. Each component's
    sign is fixed so that its largest-magnitude entry is positive, which
    makes fitted models reproducible across runs and BLAS builds.

    Parameters
    ----------
    n_components : int
        Number of components to keep, between 1 and min(n_samples,
        n_features) of the training data.

    Attributes
    ----------
    mean_ : ndarray of shape (n_features,)
    components_ : ndarray of shape (n_components, n_features)
        Orthonormal rows, ordered by descending eigenvalue.
    eigenvalues_ : ndarray of shape (n_components,)
        Variances along the kept components (descending, non-negative).
    total_variance_ : float
        Sum of all eigenvalues, equal to the total column variance of the
        centered training data.
    zero_variance_ : bool
        True when the training data had no variance at all.
    """

    def __init__(self, n_components=600):
        self.n_components = n_components

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        m, n = X.shape
        c = self.n_components
        if not isinstance(c, (int, np.integer)) or not 1 <= c <= min(m, n):
            raise DataError(
                f"n_components={c!r} must be an int in [1, min(n_samples, "
                f"n_features)] = [1, {min(m, n)}]"
            )
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        _, singular, vt = np.linalg.svd(centered, full_matrices=False)
        eigenvalues = singular**2 / m
        components = vt[:c]
        peak = np.argmax(np.abs(components), axis=1)
        signs = np.sign(components[np.arange(c), peak])
        signs[signs == 0] = 1.0
        self.components_ = components * signs[:, None]
        self.eigenvalues_ = eigenvalues[:c]
        self.total_variance_ = float(eigenvalues.sum())
        self.zero_variance_ = bool(self.total_variance_ == 0.0)
        self.n_features_in_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DataError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return (X - self.mean_) @ self.components_.T

    def inverse_transform(self, Z):
        check_is_fitted(self, "components_")
        Z = check_array(Z, dtype=np.float64)
        if Z.shape[1] != self.components_.shape[0]:
            raise DataError(
                f"expected {self.components_.shape[0]} components, got {Z.shape[1]}"
            )
        return Z @ self.components_ + self.mean_

    def retained_variance(self, n_components=None):
        """Fraction of total variance kept by the first n_components."""
        check_is_fitted(self, "components_")
        c = self.components_.shape[0] if n_components is None else n_components
        if not 0 <= c <= self.components_.shape[0]:
            raise DataError(
                f"n_components={c} outside [0, {self.components_.shape[0]}]"
            )
        if self.total_variance_ == 0.0:
            return 0.0
        return float(self.eigenvalues_[:c].sum() / self.total_variance_)
