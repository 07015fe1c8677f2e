"""Model file format: a small magic header plus a pickled payload.

The payload carries the fitted pipeline and a metadata dict (classifier
kind and parameters, stopword digest, vocabulary size and friends) so a
loaded model can be inspected without poking at pickle internals.
"""

import hashlib
import pickle

from . import __version__
from .errors import DataError

MAGIC = b"VARCLASS\x00"
FORMAT_VERSION = 1


def stopword_digest(stopwords):
    """Order-independent sha256 of a stopword set, for provenance checks."""
    joined = "\n".join(sorted(stopwords.words))
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def save_model(path, pipeline, extra_metadata=None):
    """Write a fitted pipeline; returns the metadata that was stored."""
    if not hasattr(pipeline, "estimator_"):
        raise DataError("refusing to save an unfitted pipeline")
    metadata = {
        "format_version": FORMAT_VERSION,
        "package_version": __version__,
        "classifier": pipeline.classifier,
        "classifier_params": dict(pipeline.classifier_params or {}),
        "fold_accents": bool(pipeline.fold_accents),
        "pca_components": pipeline.pca_components if pipeline.pca_ is not None else None,
        "stopword_sha256": stopword_digest(pipeline.stopwords_),
        "vocabulary_size": len(pipeline.vocabulary_),
        "n_varieties": len(pipeline.variety_names_),
    }
    metadata.update(extra_metadata or {})
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes([FORMAT_VERSION]))
        pickle.dump({"metadata": metadata, "pipeline": pipeline}, fh, protocol=4)
    return metadata


def load_model(path):
    """Read a model file back; returns (pipeline, metadata)."""
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise DataError(f"{path}: not a model file (bad magic)")
        version = fh.read(1)
        if not version or version[0] != FORMAT_VERSION:
            raise DataError(
                f"{path}: unsupported model format version "
                f"{version[0] if version else 'missing'}"
            )
        payload = pickle.load(fh)
    return payload["pipeline"], payload["metadata"]
