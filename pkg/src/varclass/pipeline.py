"""End-to-end pipeline: catalog text to ranked variety predictions.

The pipeline owns everything a prediction needs after fit: the stopword
set, the vocabulary, the optional PCA reduction and the classifier. The
BM25 path works directly on binary word vectors; the vector classifiers
see PCA-reduced rows when a component count is configured.
"""

import numpy as np
from sklearn.base import BaseEstimator

from .bm25 import Bm25VarietyRanker
from .boosted import GradientBoostedTreesClassifier
from .errors import ConfigError, DataError
from .mlp import MlpVarietyClassifier
from .neighbors import FuzzyKnnVarietyClassifier, KnnVarietyClassifier
from .pca import PcaReducer
from .textprep import StopwordSet, Vocabulary, preprocess
from .vectorize import build_product_matrix, vectorize_words

CLASSIFIERS = {
    "bm25": Bm25VarietyRanker,
    "knn": KnnVarietyClassifier,
    "fknn": FuzzyKnnVarietyClassifier,
    "gbt": GradientBoostedTreesClassifier,
    "mlp": MlpVarietyClassifier,
}


def make_classifier(kind, params=None):
    """Instantiate one of the five classifiers by name."""
    if kind not in CLASSIFIERS:
        raise ConfigError(
            f"unknown classifier {kind!r}; choose from {sorted(CLASSIFIERS)}"
        )
    try:
        return CLASSIFIERS[kind](**(params or {}))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for classifier {kind!r}: {exc}") from None


class VarietyPipeline(BaseEstimator):
    """Fit on a catalog, predict rankings for raw products.

    Parameters
    ----------
    classifier : str
        One of "bm25", "knn", "fknn", "gbt", "mlp".
    classifier_params : dict or None
        Keyword arguments for the chosen classifier.
    stopwords : str or StopwordSet
        A builtin list name ("es", "en") or an explicit set.
    fold_accents : bool
        Strip accents during cleansing (off by default).
    pca_components : int or None
        Components for the reduction step; None or 0 disables it. Ignored
        by the BM25 path, which always works on the raw binary vectors.
    """

    def __init__(self, classifier="bm25", classifier_params=None, stopwords="es",
                 fold_accents=False, pca_components=None):
        self.classifier = classifier
        self.classifier_params = classifier_params
        self.stopwords = stopwords
        self.fold_accents = fold_accents
        self.pca_components = pca_components

    def _resolve_stopwords(self):
        if isinstance(self.stopwords, StopwordSet):
            sw = self.stopwords
        elif isinstance(self.stopwords, str):
            sw = StopwordSet.builtin(self.stopwords)
        else:
            raise ConfigError(
                f"stopwords must be a language code or a StopwordSet, "
                f"got {type(self.stopwords).__name__}"
            )
        return sw.folded() if self.fold_accents else sw

    def word_lists(self, products):
        """Cleansed word list per product, using the fitted stopword set."""
        sw = getattr(self, "stopwords_", None)
        if sw is None:
            sw = self._resolve_stopwords()
        return [
            preprocess(p.description(), sw, fold_accents=self.fold_accents)
            for p in products
        ]

    def fit(self, catalog, vocab_catalog=None):
        """Fit on a catalog; vocab_catalog widens the vocabulary/PCA scope.

        When given, vocab_catalog must contain the training products (it is
        typically the full pre-split catalog); vocabulary and reduction are
        fitted on it while the classifier still trains only on catalog.
        """
        self.stopwords_ = self._resolve_stopwords()
        train_lists = self.word_lists(catalog.products)
        labels = catalog.labels()
        if vocab_catalog is None:
            scope_lists = train_lists
        else:
            if vocab_catalog.variety_index != catalog.variety_index:
                raise DataError(
                    "vocab_catalog must share the training catalog's varieties"
                )
            scope_lists = self.word_lists(vocab_catalog.products)
        self.vocabulary_ = Vocabulary.from_word_lists(scope_lists)
        self.variety_names_ = catalog.variety_names()
        X = build_product_matrix(train_lists, self.vocabulary_, labels).X
        X = X.astype(np.float64)
        estimator = make_classifier(self.classifier, self.classifier_params)
        if self.classifier == "bm25":
            self.pca_ = None
        elif self.pca_components:
            self.pca_ = PcaReducer(self.pca_components)
            if vocab_catalog is None:
                self.pca_.fit(X)
            else:
                scope_matrix = build_product_matrix(
                    scope_lists,
                    self.vocabulary_,
                    np.zeros(len(scope_lists), dtype=np.int64),
                ).X.astype(np.float64)
                self.pca_.fit(scope_matrix)
            X = self.pca_.transform(X)
        else:
            self.pca_ = None
        self.estimator_ = estimator.fit(X, labels)
        return self

    def _vectors(self, products):
        lists = self.word_lists(products)
        X = np.zeros((len(lists), len(self.vocabulary_)), dtype=np.float64)
        for i, wl in enumerate(lists):
            X[i] = vectorize_words(wl, self.vocabulary_)
        return X

    def in_vocabulary_counts(self, products):
        """How many vocabulary words each product's description hits."""
        return self._vectors(products).sum(axis=1).astype(np.int64)

    def predict_ranking(self, products):
        """One RankedPrediction per product, labels being variety ids."""
        if not hasattr(self, "estimator_"):
            raise DataError("pipeline is not fitted")
        X = self._vectors(products)
        if self.pca_ is not None:
            X = self.pca_.transform(X)
        return self.estimator_.predict_ranking(X)

    def predict(self, products):
        """Best variety id per product."""
        return np.array([r.label for r in self.predict_ranking(products)])

    def variety_name(self, variety_id):
        return self.variety_names_[variety_id]
