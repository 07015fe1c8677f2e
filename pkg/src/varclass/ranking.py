"""Ranked predictions shared by every classifier in the package.

All classifiers reduce to the same output contract: varieties ordered by
descending score, score ties broken by ascending variety id. Top-k metrics
read the first k entries of that order.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RankedPrediction:
    """An ordered tuple of (variety_id, score) pairs, best first.

    Ids are unique; the order is by descending score with ascending id as
    the tie break, so ``top(1) <= top(2) <= top(3)`` holds by construction.
    """

    entries: tuple

    def __post_init__(self):
        ids = [i for i, _ in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate variety ids in ranking")

    def __len__(self):
        return len(self.entries)

    @property
    def label(self):
        """The single best variety id."""
        return self.entries[0][0]

    def top(self, k):
        """Ids of the k best-scored varieties (fewer if the ranking is shorter)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        return frozenset(i for i, _ in self.entries[:k])

    def ids(self):
        return tuple(i for i, _ in self.entries)

    def scores(self):
        return tuple(s for _, s in self.entries)


def rank_from_scores(labels, scores):
    """Build a RankedPrediction from parallel label and score arrays.

    Sorts by descending score; equal scores fall back to ascending label.
    """
    labels = np.asarray(labels)
    scores = np.asarray(scores, dtype=np.float64)
    if labels.shape != scores.shape or labels.ndim != 1:
        raise ValueError("labels and scores must be 1-d arrays of equal length")
    order = np.lexsort((labels, -scores))
    return RankedPrediction(
        tuple((int(labels[i]), float(scores[i])) for i in order)
    )
