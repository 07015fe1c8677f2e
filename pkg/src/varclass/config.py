"""INI configuration for the command-line tools.

Every section and key is validated against a schema before anything runs:
unknown names and uncoercible values fail fast with a ConfigError, which
the CLI turns into exit code 2.
"""

import configparser
from dataclasses import dataclass, field

from .catalog import FIELDS, CatalogFormat
from .distances import METRICS
from .errors import ConfigError
from .pipeline import CLASSIFIERS


def _bool(raw):
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _int(raw):
    return int(raw.strip())


def _float(raw):
    return float(raw.strip())


def _str(raw):
    return raw.strip()


def _optional_int(raw):
    raw = raw.strip()
    return None if raw in ("", "none") else int(raw)


def _choice(*options):
    def coerce(raw):
        value = raw.strip()
        if value not in options:
            raise ValueError(f"must be one of {options}, got {value!r}")
        return value

    return coerce


def _int_list(raw):
    return tuple(int(part.strip()) for part in raw.split(",") if part.strip())


def _str_list(raw):
    return tuple(part.strip() for part in raw.split(",") if part.strip())


_CATALOG_KEYS = {"delimiter": _str, **{f: _str for f in FIELDS}}

_SCHEMA = {
    "catalog": _CATALOG_KEYS,
    "pipeline": {
        "classifier": _choice(*sorted(CLASSIFIERS)),
        "stopwords": _str,
        "fold_accents": _bool,
        "pca_components": _int,
        "vocab_scope": _choice("train", "all"),
    },
    "split": {"ratio": _float, "seed": _int},
    "bm25": {"k": _float, "b": _float, "variant": _choice("modified", "classic")},
    "knn": {"k": _int, "metric": _choice(*METRICS)},
    "fknn": {
        "k": _int,
        "metric": _choice(*METRICS),
        "fuzzifier": _float,
        "init": _choice("keller", "crisp"),
        "k_init": _optional_int,
    },
    "gbt": {
        "rounds": _int,
        "learning_rate": _float,
        "max_depth": _int,
        "reg_lambda": _float,
        "gamma": _float,
        "min_child_weight": _float,
    },
    "mlp": {
        "hidden_layers": _int,
        "hidden_units": _int,
        "epochs": _int,
        "learning_rate": _float,
        "batch_size": _int,
        "seed": _int,
    },
    "evaluate": {
        "classifiers": _str_list,
        "pca_grid": _int_list,
        "mode": _choice("macro", "micro"),
        "collapse": _bool,
    },
    "tune": {
        "variant": _choice("knn", "fknn", "mlp"),
        "ks": _int_list,
        "metrics": _str_list,
        "fuzzifier": _float,
        "nodes": _int_list,
        "epoch_checkpoints": _int_list,
    },
}

_DEFAULTS = {
    "catalog": {"delimiter": ",", **{f: f for f in FIELDS}},
    "pipeline": {
        "classifier": "bm25",
        "stopwords": "es",
        "fold_accents": False,
        "pca_components": 0,
        "vocab_scope": "train",
    },
    "split": {"ratio": 0.9, "seed": 0},
    "bm25": {"k": 1.2, "b": 0.75, "variant": "modified"},
    "knn": {"k": 1, "metric": "spearman"},
    "fknn": {
        "k": 1,
        "metric": "spearman",
        "fuzzifier": 2.0,
        "init": "keller",
        "k_init": None,
    },
    "gbt": {
        "rounds": 100,
        "learning_rate": 0.3,
        "max_depth": 6,
        "reg_lambda": 1.0,
        "gamma": 0.0,
        "min_child_weight": 1.0,
    },
    "mlp": {
        "hidden_layers": 3,
        "hidden_units": 800,
        "epochs": 600,
        "learning_rate": 0.001,
        "batch_size": 32,
        "seed": 0,
    },
    "evaluate": {
        "classifiers": ("bm25", "knn", "fknn", "gbt", "mlp"),
        "pca_grid": (0,),
        "mode": "macro",
        "collapse": True,
    },
    "tune": {
        "variant": "knn",
        "ks": tuple(range(1, 30, 2)),
        "metrics": METRICS,
        "fuzzifier": 2.0,
        "nodes": (300, 400, 500, 600, 700, 800),
        "epoch_checkpoints": (100, 200, 300, 400, 500, 600, 700, 800),
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration values, one dict per section."""

    sections: dict = field(default_factory=dict)

    def __getitem__(self, section):
        return self.sections[section]

    def catalog_format(self):
        cat = self.sections["catalog"]
        return CatalogFormat(
            delimiter=cat["delimiter"],
            columns={f: cat[f] for f in FIELDS},
        )

    def classifier_params(self, kind):
        """Constructor kwargs for the given classifier name."""
        if kind == "bm25":
            return dict(self.sections["bm25"])
        if kind in ("knn", "fknn", "gbt", "mlp"):
            return dict(self.sections[kind])
        raise ConfigError(f"unknown classifier {kind!r}")


def default_config():
    return RunConfig({s: dict(v) for s, v in _DEFAULTS.items()})


def load_config(path=None):
    """Parse and validate an INI file; None gives the defaults."""
    merged = {s: dict(v) for s, v in _DEFAULTS.items()}
    if path is None:
        return RunConfig(merged)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(
                f"{path}: unknown section [{section}]; known sections: "
                f"{sorted(_SCHEMA)}"
            )
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(
                    f"{path}: unknown key {key!r} in [{section}]; known keys: "
                    f"{sorted(_SCHEMA[section])}"
                )
            try:
                merged[section][key] = _SCHEMA[section][key](raw)
            except ValueError as exc:
                raise ConfigError(f"{path}: [{section}] {key}: {exc}") from None
    config = RunConfig(merged)
    _cross_validate(config, path)
    return config


def _cross_validate(config, path):
    for metric in config["tune"]["metrics"]:
        if metric not in METRICS:
            raise ConfigError(f"{path}: [tune] metrics: unknown metric {metric!r}")
    for name in config["evaluate"]["classifiers"]:
        if name not in CLASSIFIERS:
            raise ConfigError(
                f"{path}: [evaluate] classifiers: unknown classifier {name!r}"
            )
    if not 0 < config["split"]["ratio"] < 1:
        raise ConfigError(f"{path}: [split] ratio must be strictly between 0 and 1")
