"""The nine distance measures used by the nearest-neighbor classifiers.

All measures are total functions. Degenerate denominators (a zero vector
for cosine, a constant vector for correlation or spearman) yield distance
1, the midpoint of those measures' ranges, instead of raising. A jaccard
denominator of zero yields 0 for equal vectors and 1 otherwise.

seuclidean is the only measure with state: it divides each dimension by a
standard deviation fitted on training data, and dimensions whose training
variance is zero are excluded.
"""

import numpy as np

from .errors import DataError

METRICS = (
    "cityblock",
    "cosine",
    "correlation",
    "euclidean",
    "seuclidean",
    "jaccard",
    "hamming",
    "chebychev",
    "spearman",
)

# cap on elements per broadcast block so q x m x d temporaries stay small
_BLOCK_ELEMENTS = 2**24


def fractional_ranks(X):
    """Row-wise ranks 1..n with ties averaged, as used by spearman."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DataError("fractional_ranks expects a 2-d array")
    m, n = X.shape
    order = np.argsort(X, axis=1, kind="stable")
    ranks = np.empty((m, n), dtype=np.float64)
    for i in range(m):
        row = X[i, order[i]]
        bounds = np.flatnonzero(np.r_[True, row[1:] != row[:-1], True])
        avg = np.empty(n, dtype=np.float64)
        for a, b in zip(bounds[:-1], bounds[1:]):
            avg[a:b] = 0.5 * (a + 1 + b)
        ranks[i, order[i]] = avg
    return ranks


def _blocked(A, B, fn):
    out = np.empty((A.shape[0], B.shape[0]), dtype=np.float64)
    per_row = max(1, B.shape[0] * max(1, A.shape[1]))
    step = max(1, _BLOCK_ELEMENTS // per_row)
    for i in range(0, A.shape[0], step):
        out[i : i + step] = fn(A[i : i + step, None, :], B[None, :, :])
    return out


def _cosine_from_raw(A, B):
    na = np.linalg.norm(A, axis=1)
    nb = np.linalg.norm(B, axis=1)
    sim = A @ B.T
    with np.errstate(divide="ignore", invalid="ignore"):
        sim /= na[:, None]
        sim /= nb[None, :]
    dist = 1.0 - np.clip(sim, -1.0, 1.0)
    dist[na == 0, :] = 1.0
    dist[:, nb == 0] = 1.0
    return dist


def _correlation_from_raw(A, B):
    return _cosine_from_raw(A - A.mean(axis=1, keepdims=True),
                            B - B.mean(axis=1, keepdims=True))


def _jaccard_pair_block(a, b):
    num = np.minimum(a, b).sum(axis=-1)
    den = np.maximum(a, b).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = 1.0 - num / den
    degenerate = den == 0
    if np.any(degenerate):
        equal = (a == b).all(axis=-1)
        dist = np.where(degenerate, np.where(equal, 0.0, 1.0), dist)
    return dist


class DistanceMetric:
    """One named distance measure, fitted when the measure needs it."""

    def __init__(self, kind):
        if kind not in METRICS:
            raise DataError(f"unknown metric {kind!r}; choose from {METRICS}")
        self.kind = kind
        self.scale_ = None

    def fit(self, X):
        """Record per-dimension standard deviations (seuclidean only)."""
        if self.kind == "seuclidean":
            X = np.asarray(X, dtype=np.float64)
            if X.ndim != 2:
                raise DataError("seuclidean must be fitted on a 2-d training array")
            self.scale_ = X.std(axis=0)
        return self

    def _check(self, A, B):
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        B = np.atleast_2d(np.asarray(B, dtype=np.float64))
        if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[1]:
            raise DataError("inputs must be 2-d with matching dimensionality")
        if A.shape[1] < 1:
            raise DataError("vectors must have at least one dimension")
        if self.kind in ("correlation", "spearman") and A.shape[1] < 2:
            raise DataError(f"{self.kind} needs at least two dimensions")
        if self.kind == "seuclidean":
            if self.scale_ is None:
                raise DataError("seuclidean must be fitted on training data first")
            if self.scale_.shape[0] != A.shape[1]:
                raise DataError("seuclidean was fitted with a different dimensionality")
        return A, B

    def pairwise(self, A, B):
        """Distance matrix between the rows of A and the rows of B."""
        A, B = self._check(A, B)
        kind = self.kind
        if kind == "cityblock":
            return _blocked(A, B, lambda a, b: np.abs(a - b).sum(axis=-1))
        if kind == "chebychev":
            return _blocked(A, B, lambda a, b: np.abs(a - b).max(axis=-1))
        if kind == "hamming":
            return _blocked(A, B, lambda a, b: (a != b).mean(axis=-1))
        if kind == "euclidean":
            return _blocked(
                A, B, lambda a, b: np.sqrt(np.square(a - b).sum(axis=-1))
            )
        if kind == "seuclidean":
            keep = self.scale_ > 0
            return _blocked(
                A[:, keep] / self.scale_[keep],
                B[:, keep] / self.scale_[keep],
                lambda a, b: np.sqrt(np.square(a - b).sum(axis=-1)),
            )
        if kind == "jaccard":
            return _blocked(A, B, _jaccard_pair_block)
        if kind == "cosine":
            return _cosine_from_raw(A, B)
        if kind == "correlation":
            return _correlation_from_raw(A, B)
        # spearman: correlation on within-row fractional ranks
        return _correlation_from_raw(fractional_ranks(A), fractional_ranks(B))

    def __call__(self, a, b):
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.ndim != 1 or b.ndim != 1:
            raise DataError("distance() expects two 1-d vectors")
        return float(self.pairwise(a[None, :], b[None, :])[0, 0])


def distance(a, b, metric):
    """Distance between two vectors; metric is a name or a DistanceMetric."""
    if isinstance(metric, str):
        metric = DistanceMetric(metric)
    return metric(a, b)


def pairwise_distance(A, B, metric):
    """Distance matrix between row sets; metric is a name or a DistanceMetric."""
    if isinstance(metric, str):
        metric = DistanceMetric(metric)
    return metric.pairwise(A, B)
