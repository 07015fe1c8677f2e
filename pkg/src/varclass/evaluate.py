"""Train/test splitting, top-k scoring, confusion statistics and tuning.

A prediction counts as a top-k hit when the truth appears among the k
best-ranked varieties. For precision-style metrics each prediction is first
collapsed to a single effective label: the truth itself on a hit, the
top-ranked variety otherwise. One-vs-rest counts are then pooled (micro) or
averaged per class (macro).
"""

from dataclasses import dataclass

import numpy as np

from .distances import METRICS, DistanceMetric
from .errors import ConfigError, DataError
from .mlp import MlpVarietyClassifier, forward
from .neighbors import (
    fuzzy_scores,
    keller_memberships,
    sorted_neighbors,
    vote_rankings,
)
from .ranking import rank_from_scores

DEFAULT_KS = tuple(range(1, 30, 2))
DEFAULT_NODES = (300, 400, 500, 600, 700, 800)
DEFAULT_EPOCH_CHECKPOINTS = (100, 200, 300, 400, 500, 600, 700, 800)


@dataclass(frozen=True)
class DatasetSplit:
    """Shuffled train/test index split, reproducible from ratio and seed."""

    train_indices: np.ndarray
    test_indices: np.ndarray
    ratio: float
    seed: int


def split_indices(n, ratio=0.9, seed=0):
    if not 0 < ratio < 1:
        raise ConfigError(f"split ratio must be strictly between 0 and 1, got {ratio}")
    n_train = int(ratio * n)
    if n_train < 1 or n_train >= n:
        raise DataError(f"split of {n} rows at ratio {ratio} leaves an empty partition")
    perm = np.random.default_rng(seed).permutation(n)
    return DatasetSplit(perm[:n_train], perm[n_train:], ratio, seed)


def _take(seq, indices):
    if isinstance(seq, np.ndarray):
        return seq[indices]
    return [seq[i] for i in indices]


def split_dataset(rows, labels, ratio=0.9, seed=0):
    """Split rows and labels together; returns the parts plus the split."""
    labels = np.asarray(labels)
    if len(rows) != labels.shape[0]:
        raise DataError("rows and labels must have equal length")
    split = split_indices(len(rows), ratio, seed)
    return (
        _take(rows, split.train_indices),
        labels[split.train_indices],
        _take(rows, split.test_indices),
        labels[split.test_indices],
        split,
    )


def topk_hit(prediction, truth, k):
    """True when the truth is among the k best-ranked varieties."""
    return truth in prediction.top(k)


def effective_labels(predictions, truths, k, collapse=True):
    """Single label per prediction for confusion counting.

    With collapse on, a top-k hit counts as the truth itself; otherwise the
    top-ranked variety stands. With collapse off this is always plain top-1.
    """
    truths = np.asarray(truths)
    out = np.empty(truths.shape[0], dtype=truths.dtype)
    for i, (pred, truth) in enumerate(zip(predictions, truths)):
        if collapse and truth in pred.top(k):
            out[i] = truth
        else:
            out[i] = pred.label
    return out


@dataclass(frozen=True)
class ConfusionSummary:
    """One-vs-rest counts per class over the union of truth and predicted."""

    classes: np.ndarray
    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray
    tn: np.ndarray


def confusion_counts(effective, truths):
    effective = np.asarray(effective)
    truths = np.asarray(truths)
    classes = np.union1d(truths, effective)
    n = truths.shape[0]
    tp = np.empty(len(classes), dtype=np.int64)
    fp = np.empty_like(tp)
    fn = np.empty_like(tp)
    for i, c in enumerate(classes):
        predicted = effective == c
        actual = truths == c
        tp[i] = np.sum(predicted & actual)
        fp[i] = np.sum(predicted & ~actual)
        fn[i] = np.sum(~predicted & actual)
    tn = n - tp - fp - fn
    return ConfusionSummary(classes, tp, fp, fn, tn)


@dataclass(frozen=True)
class Metrics:
    k: int
    mode: str
    accuracy: float
    precision: float
    recall: float
    f1: float


def _safe_div(num, den):
    return num / den if den > 0 else 0.0


def evaluate_classifier(predictions, truths, k=1, mode="macro", collapse=True):
    """Top-k accuracy plus averaged precision, recall and F1.

    Macro averages the per-class scores over the classes present in the
    truths; micro pools the one-vs-rest counts of every involved class, so
    at k=1 accuracy, precision, recall and F1 all coincide.
    """
    if mode not in ("macro", "micro"):
        raise ConfigError(f"mode must be 'macro' or 'micro', got {mode!r}")
    truths = np.asarray(truths)
    predictions = list(predictions)
    if len(predictions) != truths.shape[0] or truths.shape[0] == 0:
        raise DataError("need one prediction per truth label and at least one pair")
    hits = np.fromiter(
        (topk_hit(p, t, k) for p, t in zip(predictions, truths)),
        dtype=bool,
        count=len(predictions),
    )
    accuracy = float(hits.mean())
    counts = confusion_counts(effective_labels(predictions, truths, k, collapse), truths)
    if mode == "micro":
        tp, fp, fn = counts.tp.sum(), counts.fp.sum(), counts.fn.sum()
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
    else:
        in_truth = np.isin(counts.classes, truths)
        per_p = []
        per_r = []
        per_f = []
        for i in np.flatnonzero(in_truth):
            p = _safe_div(counts.tp[i], counts.tp[i] + counts.fp[i])
            r = _safe_div(counts.tp[i], counts.tp[i] + counts.fn[i])
            per_p.append(p)
            per_r.append(r)
            per_f.append(_safe_div(2 * p * r, p + r))
        precision = float(np.mean(per_p))
        recall = float(np.mean(per_r))
        f1 = float(np.mean(per_f))
    return Metrics(k, mode, accuracy, float(precision), float(recall), float(f1))


def metrics_table(predictions, truths, ks=(1, 2, 3), mode="macro", collapse=True):
    return [evaluate_classifier(predictions, truths, k, mode, collapse) for k in ks]


@dataclass(frozen=True)
class TuningCell:
    """One grid point: its parameters and top-k accuracies for k = 1, 2, 3."""

    params: dict
    accuracy: dict


@dataclass(frozen=True)
class TuningResult:
    cells: tuple
    best: dict

    def best_params(self, k=1):
        return self.best[k].params


def _topk_accuracies(rankings, truths):
    return {
        k: float(np.mean([topk_hit(r, t, k) for r, t in zip(rankings, truths)]))
        for k in (1, 2, 3)
    }


def _pick_best(cells):
    best = {}
    for k in (1, 2, 3):
        best[k] = max(cells, key=lambda cell: cell.accuracy[k])
    return best


def tune_knn(X_train, y_train, X_test, y_test, ks=DEFAULT_KS, metrics=METRICS,
             variant="knn", fuzzifier=2.0):
    """Sweep the (k, metric) grid for the voting or fuzzy classifier.

    The distance matrices are computed once per metric and shared by every
    k; the per-cell rankings go through the same helpers the estimators
    use. Ties for the best cell keep the earliest grid position (metric
    order, then ascending k). For the fuzzy variant the membership
    neighborhood follows each cell's k.
    """
    if variant not in ("knn", "fknn"):
        raise ConfigError(f"variant must be 'knn' or 'fknn', got {variant!r}")
    for m in metrics:
        if m not in METRICS:
            raise ConfigError(f"unknown metric {m!r}")
    X_train = np.asarray(X_train, dtype=np.float64)
    X_test = np.asarray(X_test, dtype=np.float64)
    y_train = np.asarray(y_train)
    ks = tuple(ks)
    if not ks or any(k < 1 or k > X_train.shape[0] for k in ks):
        raise DataError("every k must satisfy 1 <= k <= n_train")
    classes = np.unique(y_train)
    class_idx = np.searchsorted(classes, y_train)
    cells = []
    for metric in metrics:
        dm = DistanceMetric(metric).fit(X_train)
        test_order, test_dist = sorted_neighbors(dm.pairwise(X_test, X_train))
        if variant == "fknn":
            D_tt = dm.pairwise(X_train, X_train)
            np.fill_diagonal(D_tt, np.inf)
            train_order, _ = sorted_neighbors(D_tt)
        for k in ks:
            if variant == "knn":
                rankings = vote_rankings(class_idx[test_order[:, :k]], classes)
            else:
                if k >= X_train.shape[0]:
                    raise DataError(
                        f"fuzzy tuning needs k < n_train, got k={k}"
                    )
                memberships = keller_memberships(
                    class_idx[train_order[:, :k]], class_idx, len(classes)
                )
                scores = fuzzy_scores(
                    test_order[:, :k], test_dist[:, :k], memberships, fuzzifier
                )
                rankings = [rank_from_scores(classes, row) for row in scores]
            cells.append(
                TuningCell(
                    {"metric": metric, "k": int(k)},
                    _topk_accuracies(rankings, y_test),
                )
            )
    return TuningResult(tuple(cells), _pick_best(cells))


def tune_mlp(X_train, y_train, X_test, y_test, nodes=DEFAULT_NODES,
             epoch_checkpoints=DEFAULT_EPOCH_CHECKPOINTS, hidden_layers=3,
             learning_rate=0.001, batch_size=32, seed=0):
    """Sweep hidden width against training length for the network.

    One network per width is trained to the largest checkpoint and scored
    at every intermediate one. Because initialization and the shuffle
    stream depend only on the seed, the parameters at checkpoint T are
    identical to those of a fresh T-epoch run, so this equals the full
    rectangular grid at a fraction of the cost.
    """
    checkpoints = tuple(sorted(set(int(t) for t in epoch_checkpoints)))
    if not checkpoints or checkpoints[0] < 1:
        raise ConfigError("epoch checkpoints must be positive integers")
    X_test = np.asarray(X_test, dtype=np.float64)
    classes = np.unique(np.asarray(y_train))
    by_width = {}
    for width in nodes:
        scores = {}

        def hook(epoch, params):
            if epoch in scores:
                return
            if epoch in checkpoints:
                probs = forward(params, X_test)
                rankings = [rank_from_scores(classes, row) for row in probs]
                scores[epoch] = _topk_accuracies(rankings, y_test)

        clf = MlpVarietyClassifier(
            hidden_layers=hidden_layers,
            hidden_units=int(width),
            epochs=checkpoints[-1],
            learning_rate=learning_rate,
            batch_size=batch_size,
            seed=seed,
        )
        clf.fit(X_train, y_train, epoch_hook=hook)
        by_width[width] = scores
    cells = []
    for width in nodes:
        for T in epoch_checkpoints:
            cells.append(
                TuningCell(
                    {"nodes": int(width), "epochs": int(T)},
                    by_width[width][int(T)],
                )
            )
    return TuningResult(tuple(cells), _pick_best(cells))
