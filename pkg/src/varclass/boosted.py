"""Gradient-boosted regression trees on a second-order softmax objective.

Each boosting round fits one regression tree per class to the gradient and
hessian of the softmax cross-entropy, using exact greedy split search.
Split gain, leaf weights and the recorded objective all follow the usual
regularized second-order expansion; a round that finds no positive-gain
split for a class simply adds no tree for it.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y
from sklearn.utils.multiclass import unique_labels

from .errors import ConfigError, DataError
from .ranking import rank_from_scores


@dataclass(frozen=True)
class Tree:
    """A binary regression tree in flat-array form; feature -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_leaves(self):
        return int((self.feature < 0).sum())

    def apply(self, X):
        """Leaf node index for every row, walking one level per pass."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[node]
            active = feat >= 0
            if not active.any():
                return node
            rows = np.flatnonzero(active)
            goes_left = X[rows, feat[rows]] < self.threshold[node[rows]]
            node[rows] = np.where(
                goes_left, self.left[node[rows]], self.right[node[rows]]
            )

    def predict(self, X):
        """Raw leaf weights; the learning rate is applied by the caller."""
        return self.value[self.apply(X)]


class _TreeGrower:
    def __init__(self, X, g, h, max_depth, reg_lambda, gamma, min_child_weight):
        self.X = X
        self.g = g
        self.h = h
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.gamma = gamma
        self.min_child_weight = min_child_weight
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []

    def grow(self):
        """Build the tree, or return None when the root cannot split."""
        self._grow_node(np.arange(self.X.shape[0]), 0)
        if len(self.feature) == 1:
            return None
        return Tree(
            np.array(self.feature, dtype=np.int64),
            np.array(self.threshold, dtype=np.float64),
            np.array(self.left, dtype=np.int64),
            np.array(self.right, dtype=np.int64),
            np.array(self.value, dtype=np.float64),
        )

    def _grow_node(self, idx, depth):
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        split = self._find_split(idx) if depth < self.max_depth else None
        if split is None:
            G = self.g[idx].sum()
            H = self.h[idx].sum()
            self.value[node] = -G / (H + self.reg_lambda)
            return node
        feat, thr = split
        left_mask = self.X[idx, feat] < thr
        self.feature[node] = feat
        self.threshold[node] = thr
        self.left[node] = self._grow_node(idx[left_mask], depth + 1)
        self.right[node] = self._grow_node(idx[~left_mask], depth + 1)
        return node

    def _find_split(self, idx):
        """Best (feature, threshold) by regularized gain, or None.

        Candidate thresholds are midpoints between consecutive distinct
        sorted values. Ties in gain keep the lowest feature index, then
        the lowest threshold position, so growth is deterministic.
        """
        lam = self.reg_lambda
        G = self.g[idx].sum()
        H = self.h[idx].sum()
        parent = G * G / (H + lam)
        best_gain = 0.0
        best = None
        for feat in range(self.X.shape[1]):
            xs = self.X[idx, feat]
            order = np.argsort(xs, kind="stable")
            xs = xs[order]
            if xs[0] == xs[-1]:
                continue
            gcum = np.cumsum(self.g[idx][order])
            hcum = np.cumsum(self.h[idx][order])
            cut = np.flatnonzero(xs[:-1] != xs[1:])
            lo = xs[cut]
            hi = xs[cut + 1]
            thr = 0.5 * (lo + hi)
            GL = gcum[cut]
            HL = hcum[cut]
            GR = G - GL
            HR = H - HL
            ok = (
                (HL >= self.min_child_weight)
                & (HR >= self.min_child_weight)
                & (lo < thr)
                & (thr < hi)  # rejects midpoints that collapse to a side
            )
            if not ok.any():
                continue
            gain = 0.5 * (GL**2 / (HL + lam) + GR**2 / (HR + lam) - parent) - self.gamma
            gain[~ok] = -np.inf
            j = int(np.argmax(gain))
            if gain[j] > best_gain:
                best_gain = gain[j]
                best = (feat, float(thr[j]))
        return best


def _softmax(Z):
    shifted = Z - Z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _cross_entropy_sum(Z, class_idx):
    shifted = Z - Z.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1))
    return float((lse - shifted[np.arange(Z.shape[0]), class_idx]).sum())


class GradientBoostedTreesClassifier(ClassifierMixin, BaseEstimator):
    """Multiclass boosted trees trained round by round, one tree per class.

    Parameters
    ----------
    rounds : int
        Boosting rounds, >= 1.
    learning_rate : float
        Shrinkage applied to leaf weights when accumulating, in (0, 1].
    max_depth : int
        Maximum tree depth, >= 1.
    reg_lambda : float
        L2 penalty on leaf weights, >= 0.
    gamma : float
        Per-leaf complexity charge subtracted from split gains, >= 0.
    min_child_weight : float
        Minimum hessian sum per child, >= 0.

    Attributes
    ----------
    classes_ : ndarray of sorted variety ids.
    base_score_ : ndarray of per-class log priors.
    trees_ : list of per-round dicts mapping class column -> Tree.
    objective_curve_ : ndarray of length rounds + 1; the regularized
        objective before any trees and after every round. Non-increasing.
    """

    def __init__(self, rounds=100, learning_rate=0.3, max_depth=6,
                 reg_lambda=1.0, gamma=0.0, min_child_weight=1.0):
        self.rounds = rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.gamma = gamma
        self.min_child_weight = min_child_weight

    def _validate_params(self):
        if not isinstance(self.rounds, (int, np.integer)) or self.rounds < 1:
            raise ConfigError(f"rounds must be a positive integer, got {self.rounds!r}")
        if not 0 < self.learning_rate <= 1:
            raise ConfigError(
                f"learning_rate must be in (0, 1], got {self.learning_rate!r}"
            )
        if not isinstance(self.max_depth, (int, np.integer)) or self.max_depth < 1:
            raise ConfigError(f"max_depth must be a positive integer, got {self.max_depth!r}")
        for name in ("reg_lambda", "gamma", "min_child_weight"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    def fit(self, X, y):
        self._validate_params()
        X, y = check_X_y(X, y, dtype=np.float64)
        self.classes_ = unique_labels(y)
        class_idx = np.searchsorted(self.classes_, y)
        m = X.shape[0]
        n_classes = len(self.classes_)
        self.n_features_in_ = X.shape[1]
        if n_classes == 1:
            # degenerate but legal: always predict the lone class
            self.base_score_ = np.zeros(1)
            self.trees_ = []
            self.objective_curve_ = np.zeros(1)
            return self
        priors = np.bincount(class_idx, minlength=n_classes) / m
        self.base_score_ = np.log(priors)
        F = np.tile(self.base_score_, (m, 1))
        onehot = np.zeros((m, n_classes))
        onehot[np.arange(m), class_idx] = 1.0
        trees = []
        curve = []
        penalty = 0.0
        lr = self.learning_rate
        for _ in range(self.rounds):
            P = _softmax(F)
            curve.append(_cross_entropy_sum(F, class_idx) + penalty)
            round_trees = {}
            for c in range(n_classes):
                g = P[:, c] - onehot[:, c]
                h = P[:, c] * (1.0 - P[:, c])
                tree = _TreeGrower(
                    X, g, h, self.max_depth, self.reg_lambda, self.gamma,
                    self.min_child_weight,
                ).grow()
                if tree is None:
                    continue
                round_trees[c] = tree
                F[:, c] += lr * tree.predict(X)
                leaf_w = lr * tree.value[tree.feature < 0]
                penalty += self.gamma * tree.n_leaves + 0.5 * self.reg_lambda * (
                    leaf_w**2
                ).sum()
            trees.append(round_trees)
        curve.append(_cross_entropy_sum(F, class_idx) + penalty)
        self.trees_ = trees
        self.objective_curve_ = np.array(curve)
        return self

    def decision_function(self, X):
        """Accumulated raw scores per class, columns follow classes_."""
        check_is_fitted(self, "trees_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DataError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        F = np.tile(self.base_score_, (X.shape[0], 1))
        for round_trees in self.trees_:
            for c, tree in round_trees.items():
                F[:, c] += self.learning_rate * tree.predict(X)
        return F

    def predict_proba(self, X):
        return _softmax(self.decision_function(X))

    def predict_ranking(self, X):
        """One RankedPrediction per row, over all fitted varieties."""
        proba = self.predict_proba(X)
        return [rank_from_scores(self.classes_, row) for row in proba]

    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]
