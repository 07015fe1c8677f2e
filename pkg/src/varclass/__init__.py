"""Classify retail grocery products into taxonomy varieties from text."""

__version__ = "0.1.0"

from .bm25 import Bm25VarietyRanker
from .boosted import GradientBoostedTreesClassifier
from .catalog import (
    Catalog,
    CatalogFormat,
    Product,
    clean_catalog,
    load_catalog,
    read_products,
    save_catalog,
)
from .distances import METRICS, DistanceMetric, distance, pairwise_distance
from .errors import ConfigError, DataError, NumericError, VarclassError
from .evaluate import (
    DatasetSplit,
    Metrics,
    TuningResult,
    evaluate_classifier,
    metrics_table,
    split_dataset,
    split_indices,
    topk_hit,
    tune_knn,
    tune_mlp,
)
from .mlp import MlpVarietyClassifier
from .neighbors import FuzzyKnnVarietyClassifier, KnnVarietyClassifier
from .pca import PcaReducer
from .persist import load_model, save_model
from .pipeline import CLASSIFIERS, VarietyPipeline, make_classifier
from .ranking import RankedPrediction, rank_from_scores
from .synth import SynthConfig, synth_catalog
from .textprep import StopwordSet, Vocabulary, build_vocabulary, preprocess
from .vectorize import (
    ProductMatrix,
    VarietyMatrix,
    build_product_matrix,
    build_variety_matrix,
    vectorize_words,
)

__all__ = [
    "Bm25VarietyRanker",
    "Catalog",
    "CatalogFormat",
    "CLASSIFIERS",
    "ConfigError",
    "DataError",
    "DatasetSplit",
    "DistanceMetric",
    "FuzzyKnnVarietyClassifier",
    "GradientBoostedTreesClassifier",
    "KnnVarietyClassifier",
    "METRICS",
    "Metrics",
    "MlpVarietyClassifier",
    "NumericError",
    "PcaReducer",
    "Product",
    "ProductMatrix",
    "RankedPrediction",
    "StopwordSet",
    "SynthConfig",
    "TuningResult",
    "VarclassError",
    "VarietyMatrix",
    "VarietyPipeline",
    "Vocabulary",
    "build_product_matrix",
    "build_variety_matrix",
    "build_vocabulary",
    "clean_catalog",
    "distance",
    "evaluate_classifier",
    "load_catalog",
    "load_model",
    "make_classifier",
    "metrics_table",
    "pairwise_distance",
    "preprocess",
    "rank_from_scores",
    "read_products",
    "save_catalog",
    "save_model",
    "split_dataset",
    "split_indices",
    "synth_catalog",
    "topk_hit",
    "tune_knn",
    "tune_mlp",
    "vectorize_words",
]
