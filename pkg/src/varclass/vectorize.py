"""Bag-of-words matrices: binary per product, count-valued per variety."""

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ProductMatrix:
    """Binary occurrence matrix X (products x vocabulary) with labels."""

    X: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.X.ndim != 2 or self.labels.shape != (self.X.shape[0],):
            raise DataError("X must be 2-d with one label per row")


@dataclass(frozen=True)
class VarietyMatrix:
    """Count matrix Y (varieties x vocabulary): per-variety column sums of X.

    word_totals[i] is the total word count of variety i, the row sum of Y;
    mean_word_total is its average over varieties.
    """

    Y: np.ndarray
    word_totals: np.ndarray
    mean_word_total: float


def vectorize_words(word_list, vocab):
    """Binary occurrence vector of one word list; unknown words are ignored."""
    x = np.zeros(len(vocab), dtype=np.uint8)
    for w in word_list:
        j = vocab.get(w)
        if j is not None:
            x[j] = 1
    return x


def build_product_matrix(word_lists, vocab, labels):
    """Stack per-product occurrence vectors into the binary matrix X."""
    labels = np.asarray(labels)
    word_lists = list(word_lists)
    if len(word_lists) != labels.shape[0]:
        raise DataError("one label per word list required")
    if len(word_lists) == 0:
        raise DataError("cannot build a product matrix from zero products")
    X = np.zeros((len(word_lists), len(vocab)), dtype=np.uint8)
    for i, wl in enumerate(word_lists):
        for w in wl:
            j = vocab.get(w)
            if j is not None:
                X[i, j] = 1
    return ProductMatrix(X, labels)


def build_variety_matrix(product_matrix, n_varieties=None):
    """Sum the rows of X within each variety to get the count matrix Y."""
    X = product_matrix.X
    labels = product_matrix.labels
    if labels.min() < 0:
        raise DataError("variety ids must be non-negative")
    V = n_varieties if n_varieties is not None else int(labels.max()) + 1
    if labels.max() >= V:
        raise DataError("label outside [0, n_varieties)")
    Y = np.zeros((V, X.shape[1]), dtype=np.int64)
    np.add.at(Y, labels, X.astype(np.int64))
    word_totals = Y.sum(axis=1)
    return VarietyMatrix(Y, word_totals, float(word_totals.mean()))
