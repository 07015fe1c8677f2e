"""Command-line interface: synth, train, predict, evaluate, tune.

Reports contain no timestamps or machine details, so identical inputs and
seeds produce byte-identical output. Exit codes: 0 success, 2 config
problems, 3 data problems, 4 numeric failures.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .catalog import clean_catalog, load_catalog, read_products, save_catalog
from .config import load_config
from .errors import ConfigError, DataError, NumericError
from .evaluate import metrics_table, split_indices, tune_knn, tune_mlp
from .pca import PcaReducer
from .persist import load_model, save_model
from .pipeline import VarietyPipeline
from .synth import SynthConfig, synth_catalog
from .textprep import StopwordSet, Vocabulary
from .vectorize import build_product_matrix


def _stopword_set(cfg):
    name = cfg["pipeline"]["stopwords"]
    if name in ("es", "en"):
        return StopwordSet.builtin(name)
    return StopwordSet.from_file(name)


def _pipeline_from_config(cfg, kind):
    return VarietyPipeline(
        classifier=kind,
        classifier_params=cfg.classifier_params(kind),
        stopwords=_stopword_set(cfg),
        fold_accents=cfg["pipeline"]["fold_accents"],
        pca_components=cfg["pipeline"]["pca_components"] or None,
    )


def _write_json(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _print_table(headers, rows):
    table = [tuple(str(v) for v in row) for row in rows]
    widths = [
        max(len(h), *(len(r[i]) for r in table)) if table else len(h)
        for i, h in enumerate(headers)
    ]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for row in table:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())


def cmd_synth(args):
    cfg = SynthConfig(
        n_varieties=args.varieties,
        products_per_variety=args.products_per_variety,
        words_per_signature=args.words_per_signature,
        noise_vocab=args.noise_vocab,
        overlap=args.overlap,
        seed=args.seed,
    )
    catalog = synth_catalog(cfg)
    save_catalog(args.out, catalog)
    print(
        f"wrote {len(catalog)} products across {catalog.n_varieties} "
        f"varieties to {args.out}"
    )


def cmd_train(args):
    cfg = load_config(args.config)
    fmt = cfg.catalog_format()
    catalog = load_catalog(args.catalog, fmt)
    cleaned = clean_catalog(catalog)
    dropped = len(catalog) - len(cleaned)
    kind = args.classifier or cfg["pipeline"]["classifier"]
    pipe = _pipeline_from_config(cfg, kind)
    pipe.fit(cleaned)
    metadata = save_model(
        args.model,
        pipe,
        {"products_loaded": len(catalog), "products_dropped_textless": dropped},
    )
    print(f"loaded {len(catalog)} products, dropped {dropped} without text")
    print(
        f"trained {kind} on {len(cleaned)} products, "
        f"{metadata['n_varieties']} varieties, "
        f"vocabulary of {metadata['vocabulary_size']} words"
    )
    print(f"model written to {args.model}")


def cmd_predict(args):
    if args.top < 1:
        raise ConfigError(f"--top must be >= 1, got {args.top}")
    pipe, metadata = load_model(args.model)
    cfg = load_config(args.config)
    products = read_products(args.input, cfg.catalog_format())
    rankings = pipe.predict_ranking(products)
    known_words = pipe.in_vocabulary_counts(products)
    entries = []
    for product, ranking, known in zip(products, rankings, known_words):
        entries.append(
            {
                "ean": product.ean,
                "empty_description": int(known) == 0,
                "ranking": [
                    {
                        "variety_id": vid,
                        "variety": pipe.variety_name(vid),
                        "score": score,
                    }
                    for vid, score in ranking.entries[: args.top]
                ],
            }
        )
    payload = {
        "classifier": metadata["classifier"],
        "top": args.top,
        "products": entries,
    }
    _write_json(payload, args.out)
    if args.out and args.out != "-":
        print(f"wrote {len(entries)} predictions to {args.out}")


def cmd_evaluate(args):
    cfg = load_config(args.config)
    catalog = clean_catalog(load_catalog(args.catalog, cfg.catalog_format()))
    split = split_indices(len(catalog), cfg["split"]["ratio"], cfg["split"]["seed"])
    train_cat = catalog.subset(split.train_indices)
    test_cat = catalog.subset(split.test_indices)
    scope_cat = catalog if cfg["pipeline"]["vocab_scope"] == "all" else None
    truths = test_cat.labels()
    mode = cfg["evaluate"]["mode"]
    collapse = cfg["evaluate"]["collapse"]
    results = []
    for kind in cfg["evaluate"]["classifiers"]:
        grid = (0,) if kind == "bm25" else cfg["evaluate"]["pca_grid"]
        for components in grid:
            pipe = _pipeline_from_config(cfg, kind)
            pipe.pca_components = components or None
            pipe.fit(train_cat, vocab_catalog=scope_cat)
            rankings = pipe.predict_ranking(test_cat.products)
            rows = metrics_table(rankings, truths, (1, 2, 3), mode, collapse)
            results.append(
                {
                    "classifier": kind,
                    "pca_components": components or None,
                    "metrics": {
                        str(m.k): {
                            "accuracy": m.accuracy,
                            "precision": m.precision,
                            "recall": m.recall,
                            "f1": m.f1,
                        }
                        for m in rows
                    },
                }
            )
    payload = {
        "catalog": {
            "products": len(catalog),
            "varieties": catalog.n_varieties,
        },
        "split": {
            "ratio": split.ratio,
            "seed": split.seed,
            "train": int(len(split.train_indices)),
            "test": int(len(split.test_indices)),
        },
        "mode": mode,
        "collapse": collapse,
        "vocab_scope": cfg["pipeline"]["vocab_scope"],
        "results": results,
    }
    table_rows = []
    for entry in results:
        for k in ("1", "2", "3"):
            m = entry["metrics"][k]
            table_rows.append(
                (
                    entry["classifier"],
                    entry["pca_components"] or "-",
                    k,
                    f"{m['accuracy']:.6f}",
                    f"{m['precision']:.6f}",
                    f"{m['recall']:.6f}",
                    f"{m['f1']:.6f}",
                )
            )
    _print_table(
        ("classifier", "pca", "k", "accuracy", "precision", "recall", "f1"),
        table_rows,
    )
    if args.report:
        _write_json(payload, args.report)
        print(f"report written to {args.report}")


def _prepare_matrices(cfg, catalog, split):
    """Vectorize and optionally reduce the catalog for tuning sweeps."""
    pipe = VarietyPipeline(stopwords=_stopword_set(cfg),
                           fold_accents=cfg["pipeline"]["fold_accents"])
    word_lists = pipe.word_lists(catalog.products)
    labels = catalog.labels()
    train_idx, test_idx = split.train_indices, split.test_indices
    if cfg["pipeline"]["vocab_scope"] == "all":
        vocab = Vocabulary.from_word_lists(word_lists)
        scope_idx = np.arange(len(catalog))
    else:
        vocab = Vocabulary.from_word_lists([word_lists[i] for i in train_idx])
        scope_idx = train_idx
    X = build_product_matrix(word_lists, vocab, labels).X.astype(np.float64)
    components = cfg["pipeline"]["pca_components"]
    if components:
        reducer = PcaReducer(components).fit(X[scope_idx])
        X = reducer.transform(X)
    return X[train_idx], labels[train_idx], X[test_idx], labels[test_idx]


def cmd_tune(args):
    cfg = load_config(args.config)
    catalog = clean_catalog(load_catalog(args.catalog, cfg.catalog_format()))
    split = split_indices(len(catalog), cfg["split"]["ratio"], cfg["split"]["seed"])
    X_train, y_train, X_test, y_test = _prepare_matrices(cfg, catalog, split)
    variant = cfg["tune"]["variant"]
    if variant in ("knn", "fknn"):
        result = tune_knn(
            X_train,
            y_train,
            X_test,
            y_test,
            ks=cfg["tune"]["ks"],
            metrics=cfg["tune"]["metrics"],
            variant=variant,
            fuzzifier=cfg["tune"]["fuzzifier"],
        )
    else:
        result = tune_mlp(
            X_train,
            y_train,
            X_test,
            y_test,
            nodes=cfg["tune"]["nodes"],
            epoch_checkpoints=cfg["tune"]["epoch_checkpoints"],
            hidden_layers=cfg["mlp"]["hidden_layers"],
            learning_rate=cfg["mlp"]["learning_rate"],
            batch_size=cfg["mlp"]["batch_size"],
            seed=cfg["mlp"]["seed"],
        )
    cells = [
        {**cell.params, **{f"top{k}": cell.accuracy[k] for k in (1, 2, 3)}}
        for cell in result.cells
    ]
    payload = {
        "variant": variant,
        "cells": cells,
        "best": {
            str(k): {**cell.params, "accuracy": cell.accuracy[k]}
            for k, cell in result.best.items()
        },
    }
    param_names = sorted(result.cells[0].params)
    _print_table(
        (*param_names, "top1", "top2", "top3"),
        [
            tuple(cell.params[p] for p in param_names)
            + tuple(f"{cell.accuracy[k]:.6f}" for k in (1, 2, 3))
            for cell in result.cells
        ],
    )
    for k in (1, 2, 3):
        best = result.best[k]
        print(f"best top-{k}: {best.params} accuracy {best.accuracy[k]:.6f}")
    if args.report:
        _write_json(payload, args.report)
        print(f"report written to {args.report}")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="varclass",
        description="Classify grocery products into varieties from label text.",
    )
    parser.add_argument(
        "--version", action="version", version=f"varclass {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic catalog file")
    p.add_argument("--out", required=True, help="catalog file to write")
    p.add_argument("--varieties", type=int, default=20)
    p.add_argument("--products-per-variety", type=int, default=100)
    p.add_argument("--words-per-signature", type=int, default=6)
    p.add_argument("--noise-vocab", type=int, default=100)
    p.add_argument("--overlap", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a classifier on a catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument("--model", required=True, help="model file to write")
    p.add_argument("--config", default=None, help="INI configuration file")
    p.add_argument(
        "--classifier",
        choices=("bm25", "knn", "fknn", "gbt", "mlp"),
        default=None,
        help="overrides [pipeline] classifier from the config",
    )
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="rank varieties for new products")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="product file to classify")
    p.add_argument("--out", default=None, help="JSON output path (default stdout)")
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="split a catalog and score classifiers")
    p.add_argument("--catalog", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--report", default=None, help="JSON report path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("tune", help="sweep hyperparameter grids")
    p.add_argument("--catalog", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--report", default=None, help="JSON report path")
    p.set_defaults(func=cmd_tune)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except (DataError, OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    return 0
