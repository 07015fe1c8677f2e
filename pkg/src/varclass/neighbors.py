"""Exact-scan nearest-neighbor classifiers, crisp and fuzzy.

Both classifiers compare every query against every training row with one of
the nine supported distance measures. Neighbor ties at equal distance are
resolved toward the smaller training-row index via a stable sort, so
predictions are fully deterministic.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y
from sklearn.utils.multiclass import unique_labels

from .distances import METRICS, DistanceMetric
from .errors import ConfigError, DataError
from .ranking import rank_from_scores

INITS = ("keller", "crisp")


def sorted_neighbors(D):
    """Columns of each row of D ordered by ascending distance, then index."""
    order = np.argsort(D, axis=1, kind="stable")
    return order, np.take_along_axis(D, order, axis=1)


def vote_rankings(nbr_classes, classes):
    """Rankings from a (n_queries, k) array of neighbor class indices.

    Varieties are ordered by vote count; tied counts go to the variety
    holding the closest neighbor, then to the smaller id. Encoding the
    earliest neighbor position into the score fractionally keeps the
    shared descending-score contract intact.
    """
    k = nbr_classes.shape[1]
    n_classes = len(classes)
    positions = np.arange(k, dtype=np.float64)
    rankings = []
    for row in nbr_classes:
        votes = np.bincount(row, minlength=n_classes).astype(np.float64)
        earliest = np.full(n_classes, np.inf)
        np.minimum.at(earliest, row, positions)
        present = votes > 0
        scores = votes[present] - earliest[present] / (k + 1)
        rankings.append(rank_from_scores(classes[present], scores))
    return rankings


def keller_memberships(nbr_classes, class_idx, n_classes):
    """Soft training memberships from the K neighbors of each training row.

    A row's own class gets 0.51 plus its share of 0.49; other classes get
    their share of 0.49. nbr_classes must already exclude the row itself.
    """
    m, K = nbr_classes.shape
    U = np.zeros((m, n_classes), dtype=np.float64)
    np.add.at(U, (np.repeat(np.arange(m), K), nbr_classes.ravel()), 1.0)
    U *= 0.49 / K
    U[np.arange(m), class_idx] += 0.51
    U /= U.sum(axis=1, keepdims=True)
    return U


def fuzzy_scores(nbr_idx, nbr_dist, memberships, fuzzifier):
    """Class scores for queries given their sorted neighbors.

    Weights are inverse distances raised to 2/(fuzzifier - 1). A query at
    distance zero from its closest neighbor inherits that neighbor's
    membership row outright. Rows sum to 1.
    """
    expo = 2.0 / (fuzzifier - 1.0)
    closest = nbr_dist[:, :1]
    with np.errstate(divide="ignore", invalid="ignore"):
        # scaling by the closest distance keeps the weights in [0, 1]
        weights = (nbr_dist / closest) ** (-expo)
        scores = np.einsum("qk,qkc->qc", weights, memberships[nbr_idx])
        scores /= weights.sum(axis=1, keepdims=True)
    exact = closest[:, 0] == 0.0
    if np.any(exact):
        scores[exact] = memberships[nbr_idx[exact, 0]]
    return scores


class KnnVarietyClassifier(ClassifierMixin, BaseEstimator):
    """k-nearest-neighbors with majority voting over variety labels.

    Parameters
    ----------
    k : int
        Number of neighbors, 1 <= k <= n_training_samples.
    metric : str
        One of the nine supported distance measure names.
    """

    def __init__(self, k=1, metric="spearman"):
        self.k = k
        self.metric = metric

    def _validate_params(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {METRICS}, got {self.metric!r}")

    def fit(self, X, y):
        self._validate_params()
        X, y = check_X_y(X, y, dtype=np.float64)
        if self.k > X.shape[0]:
            raise DataError(f"k={self.k} exceeds the {X.shape[0]} training samples")
        self.classes_ = unique_labels(y)
        self.class_idx_ = np.searchsorted(self.classes_, y)
        self.X_ = X
        self.metric_ = DistanceMetric(self.metric).fit(X)
        self.n_features_in_ = X.shape[1]
        return self

    def kneighbors(self, X):
        """Distances and training-row indices of the k nearest neighbors."""
        check_is_fitted(self, "X_")
        X = check_array(X, dtype=np.float64)
        order, dist = sorted_neighbors(self.metric_.pairwise(X, self.X_))
        return dist[:, : self.k], order[:, : self.k]

    def predict_ranking(self, X):
        """One RankedPrediction per row, over the varieties voted for."""
        _, idx = self.kneighbors(X)
        return vote_rankings(self.class_idx_[idx], self.classes_)

    def predict(self, X):
        return np.array([r.label for r in self.predict_ranking(X)])


class FuzzyKnnVarietyClassifier(ClassifierMixin, BaseEstimator):
    """Fuzzy k-nearest-neighbors with soft training memberships.

    Parameters
    ----------
    k : int
        Number of neighbors used at prediction time.
    metric : str
        One of the nine supported distance measure names.
    fuzzifier : float
        Membership exponent m > 1; 2 gives plain inverse-square weights.
    init : str
        "keller" derives soft training memberships from each training
        row's own neighborhood; "crisp" uses one-hot memberships.
    k_init : int or None
        Neighborhood size for the keller initialization; defaults to k.
    """

    def __init__(self, k=1, metric="spearman", fuzzifier=2.0, init="keller",
                 k_init=None):
        self.k = k
        self.metric = metric
        self.fuzzifier = fuzzifier
        self.init = init
        self.k_init = k_init

    def _validate_params(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not (isinstance(self.fuzzifier, (int, float)) and self.fuzzifier > 1):
            raise ConfigError(f"fuzzifier must be > 1, got {self.fuzzifier!r}")
        if self.init not in INITS:
            raise ConfigError(f"init must be one of {INITS}, got {self.init!r}")
        if self.k_init is not None and (
            not isinstance(self.k_init, (int, np.integer)) or self.k_init < 1
        ):
            raise ConfigError(f"k_init must be a positive integer, got {self.k_init!r}")

    def fit(self, X, y):
        self._validate_params()
        X, y = check_X_y(X, y, dtype=np.float64)
        m = X.shape[0]
        if self.k > m:
            raise DataError(f"k={self.k} exceeds the {m} training samples")
        self.classes_ = unique_labels(y)
        self.class_idx_ = np.searchsorted(self.classes_, y)
        self.X_ = X
        self.metric_ = DistanceMetric(self.metric).fit(X)
        if self.init == "crisp":
            U = np.zeros((m, len(self.classes_)), dtype=np.float64)
            U[np.arange(m), self.class_idx_] = 1.0
        else:
            K = self.k if self.k_init is None else self.k_init
            if K >= m:
                raise DataError(
                    f"keller initialization with k_init={K} needs at least "
                    f"{K + 1} training samples, got {m}"
                )
            D = self.metric_.pairwise(X, X)
            np.fill_diagonal(D, np.inf)
            order, _ = sorted_neighbors(D)
            U = keller_memberships(
                self.class_idx_[order[:, :K]], self.class_idx_, len(self.classes_)
            )
        self.memberships_ = U
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        """Class scores per query, columns follow classes_, rows sum to 1."""
        check_is_fitted(self, "memberships_")
        X = check_array(X, dtype=np.float64)
        order, dist = sorted_neighbors(self.metric_.pairwise(X, self.X_))
        return fuzzy_scores(
            order[:, : self.k], dist[:, : self.k], self.memberships_, self.fuzzifier
        )

    def predict_ranking(self, X):
        """One RankedPrediction per row, over all fitted varieties."""
        proba = self.predict_proba(X)
        return [rank_from_scores(self.classes_, row) for row in proba]

    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]
