"""Synthetic catalog generation for tests, benchmarks and examples.

Every variety owns a signature of made-up words; products sample from
their variety's signature and mix in words from a shared noise pool. With
overlap 0 the signatures are disjoint, so the catalog is separable by
construction. Generation is fully deterministic for a given seed.
"""

from dataclasses import dataclass

import numpy as np

from .catalog import Catalog, Product
from .errors import ConfigError


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for the generator; defaults give an easy, separable catalog."""

    n_varieties: int = 20
    products_per_variety: int = 100
    words_per_signature: int = 6
    noise_vocab: int = 100
    overlap: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_varieties < 2:
            raise ConfigError("n_varieties must be >= 2")
        if self.products_per_variety < 1:
            raise ConfigError("products_per_variety must be >= 1")
        if self.words_per_signature < 1:
            raise ConfigError("words_per_signature must be >= 1")
        if self.noise_vocab < 0:
            raise ConfigError("noise_vocab must be >= 0")
        if not 0 <= self.overlap < 1:
            raise ConfigError("overlap must be in [0, 1)")


def synth_catalog(cfg=SynthConfig()):
    """Generate a Catalog per the config; same config, same catalog."""
    rng = np.random.default_rng(cfg.seed)
    wps = cfg.words_per_signature
    n_shared = int(cfg.overlap * wps)
    # letters on both sides of every digit keep these words intact through
    # the cleansing step that drops standalone numbers
    shared_pool = [f"mix{j:03d}x" for j in range(max(2 * n_shared, 1) * cfg.n_varieties)]
    noise_pool = [f"filler{j:03d}x" for j in range(cfg.noise_vocab)]
    signatures = []
    for v in range(cfg.n_varieties):
        own = [f"sig{v:03d}w{j:02d}" for j in range(wps - n_shared)]
        borrowed = list(rng.choice(shared_pool, size=n_shared, replace=False))
        signatures.append(own + borrowed)
    products = []
    ean = 10**7
    for v in range(cfg.n_varieties):
        signature = signatures[v]
        for _ in range(cfg.products_per_variety):
            take = int(rng.integers(max(1, wps // 2), wps + 1))
            words = list(rng.choice(signature, size=min(take, wps), replace=False))
            if noise_pool:
                n_noise = int(rng.integers(0, min(4, len(noise_pool)) + 1))
                words += list(rng.choice(noise_pool, size=n_noise, replace=False))
            split = max(1, len(words) // 2)
            products.append(
                Product(
                    ean=str(ean),
                    category="synthetic",
                    subcategory="synthetic",
                    variety=f"variety-{v:03d}",
                    brand=f"brand-{int(rng.integers(0, 10)):02d}",
                    name=" ".join(words[:split]),
                    legal_name=f"product of variety {v}",
                    ingredients=" ".join(words[split:]),
                )
            )
            ean += 1
    return Catalog.from_products(products)
