"""Variety ranking with a BM25 score over per-variety word statistics.

Each variety is treated as one document whose words come from all of its
training products. The default "modified" variant fixes the within-variety
term frequency at 1, so only word presence, inverse variety frequency and
the variety length normalization drive the score. The "classic" variant
keeps the raw word counts and is mainly useful as a reference point.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted
from sklearn.utils.multiclass import unique_labels

from .errors import ConfigError, DataError
from .ranking import rank_from_scores
from .vectorize import ProductMatrix, build_variety_matrix

VARIANTS = ("modified", "classic")


class Bm25VarietyRanker(ClassifierMixin, BaseEstimator):
    """Rank varieties for binary word-occurrence vectors.

    Parameters
    ----------
    k : float
        Term-frequency saturation, k > 0.
    b : float
        Length-normalization strength, 0 <= b <= 1.
    variant : str
        "modified" scores word presence only; "classic" uses word counts.

    Attributes
    ----------
    classes_ : ndarray
        Sorted variety ids seen during fit.
    word_totals_ : ndarray of shape (n_varieties,)
        Total word count per variety (row sums of the count matrix).
    idf_ : ndarray of shape (n_features,)
        ln((N + 1) / (vf + 1)) where vf counts varieties containing the word.
    """

    def __init__(self, k=1.2, b=0.75, variant="modified"):
        self.k = k
        self.b = b
        self.variant = variant

    def fit(self, X, y):
        if not (isinstance(self.k, (int, float)) and self.k > 0):
            raise ConfigError(f"k must be > 0, got {self.k!r}")
        if not (isinstance(self.b, (int, float)) and 0 <= self.b <= 1):
            raise ConfigError(f"b must be in [0, 1], got {self.b!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        X = check_array(X, dtype=np.float64)
        y = np.asarray(y)
        if y.shape != (X.shape[0],):
            raise DataError("y must have one label per row of X")
        self.classes_ = unique_labels(y)
        indices = np.searchsorted(self.classes_, y)
        vm = build_variety_matrix(
            ProductMatrix((X > 0).astype(np.uint8), indices),
            n_varieties=len(self.classes_),
        )
        n_varieties = len(self.classes_)
        presence = vm.Y > 0
        variety_freq = presence.sum(axis=0)
        self.idf_ = np.log((n_varieties + 1) / (variety_freq + 1))
        self.word_totals_ = vm.word_totals
        self.mean_word_total_ = vm.mean_word_total
        # the length factor is constant per variety once c(w, V) is fixed at 1
        norm = 1 + self.k * (
            1 - self.b + self.b * vm.word_totals / vm.mean_word_total
        )
        if self.variant == "modified":
            self._weights = presence * ((self.k + 1) / norm)[:, None]
        else:
            counts = vm.Y.astype(np.float64)
            self._weights = counts * (self.k + 1) / (counts + norm[:, None])
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        """BM25 score of every variety (columns follow classes_) per row."""
        check_is_fitted(self, "idf_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DataError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return ((X > 0) * self.idf_) @ self._weights.T

    def predict_ranking(self, X):
        """Full variety rankings, one RankedPrediction per row of X."""
        scores = self.decision_function(X)
        return [rank_from_scores(self.classes_, row) for row in scores]

    def predict(self, X):
        scores = self.decision_function(X)
        # argmax takes the first maximum, which is the smallest variety id
        return self.classes_[np.argmax(scores, axis=1)]
