"""Product catalog loading, validation and cleaning.

Catalogs are delimited text files, one product per row. Column headers can
be remapped through CatalogFormat so differently named exports still load.
Variety ids are assigned by ascending lexicographic order of variety names.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

TEXT_FIELDS = ("name", "legal_name", "ingredients")
TAXONOMY_FIELDS = ("category", "subcategory", "variety")
FIELDS = ("ean",) + TAXONOMY_FIELDS + ("brand",) + TEXT_FIELDS


@dataclass(frozen=True)
class Product:
    """One catalog row. Text fields are kept byte for byte as read."""

    ean: str
    category: str = ""
    subcategory: str = ""
    variety: str = ""
    brand: str = ""
    name: str = ""
    legal_name: str = ""
    ingredients: str = ""

    def has_text(self):
        """True when at least one free-text field is non-blank."""
        return any(getattr(self, f).strip() for f in TEXT_FIELDS)

    def description(self):
        return " ".join(
            v for f in TEXT_FIELDS if (v := getattr(self, f)) and v.strip()
        )


def _identity_columns():
    return {f: f for f in FIELDS}


@dataclass(frozen=True)
class CatalogFormat:
    """Delimiter plus a field -> header-name mapping for catalog files."""

    delimiter: str = ","
    columns: dict = field(default_factory=_identity_columns)

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise DataError("delimiter must be a single character")
        unknown = set(self.columns) - set(FIELDS)
        if unknown:
            raise DataError(f"unknown catalog fields in column mapping: {sorted(unknown)}")
        merged = _identity_columns()
        merged.update(self.columns)
        object.__setattr__(self, "columns", merged)


@dataclass(frozen=True)
class Catalog:
    """An immutable product list plus the variety-name -> id assignment."""

    products: tuple
    variety_index: dict

    def __len__(self):
        return len(self.products)

    @property
    def n_varieties(self):
        return len(self.variety_index)

    def variety_names(self):
        """Variety names ordered by id."""
        names = [None] * len(self.variety_index)
        for name, i in self.variety_index.items():
            names[i] = name
        return tuple(names)

    def labels(self):
        """Variety id per product, aligned with ``products``."""
        return np.array([self.variety_index[p.variety] for p in self.products])

    def subset(self, indices):
        """Products at the given positions, keeping this catalog's ids.

        Used by train/test splitting so both partitions agree on what each
        variety id means even when a partition misses some varieties.
        """
        return Catalog(
            tuple(self.products[int(i)] for i in indices), self.variety_index
        )

    @classmethod
    def from_products(cls, products):
        products = tuple(products)
        if not products:
            raise DataError("catalog has no products")
        seen = set()
        for p in products:
            if not p.ean.strip():
                raise DataError(f"product with blank EAN: {p!r}")
            if p.ean in seen:
                raise DataError(f"duplicate EAN {p.ean!r}")
            seen.add(p.ean)
        names = sorted({p.variety for p in products})
        return cls(products, {name: i for i, name in enumerate(names)})


def _read_products(path, fmt, required_fields):
    fmt = fmt or CatalogFormat()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=fmt.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: catalog file is empty")
        positions = {}
        for fieldname, colname in fmt.columns.items():
            if colname in header:
                positions[fieldname] = header.index(colname)
        missing = [fmt.columns[f] for f in required_fields if f not in positions]
        if missing:
            raise DataError(f"{path}: missing required columns {missing}")
        width = len(header)
        products = []
        eans = {}
        for row in reader:
            line = reader.line_num
            if len(row) != width:
                short = [
                    fmt.columns[f] for f, pos in positions.items() if pos >= len(row)
                ]
                raise DataError(
                    f"{path}: line {line}: row has {len(row)} cells, header has "
                    f"{width}; affected columns {short or 'beyond mapped ones'}"
                )
            values = {f: row[pos] for f, pos in positions.items()}
            ean = values.get("ean", "")
            if not ean.strip():
                raise DataError(f"{path}: line {line}: product has a blank EAN")
            if ean in eans:
                raise DataError(
                    f"{path}: line {line}: duplicate EAN {ean!r} first seen on "
                    f"line {eans[ean]}"
                )
            eans[ean] = line
            products.append(Product(**values))
        if not products:
            raise DataError(f"{path}: catalog file has a header but no rows")
    return products


def load_catalog(path, fmt=None):
    """Read a full catalog file; every mapped column must be present."""
    return Catalog.from_products(_read_products(path, fmt, FIELDS))


def read_products(path, fmt=None):
    """Read products for prediction: only EAN and the text fields are required."""
    return _read_products(path, fmt, ("ean",) + TEXT_FIELDS)


def clean_catalog(catalog):
    """Drop products whose three text fields are all blank.

    Variety ids are reassigned on the survivors, so they stay contiguous.
    """
    kept = [p for p in catalog.products if p.has_text()]
    if not kept:
        raise DataError("no products with any descriptive text")
    return Catalog.from_products(kept)


def save_catalog(path, catalog, fmt=None):
    """Write a catalog (or plain product list) back out as delimited text."""
    fmt = fmt or CatalogFormat()
    products = catalog.products if isinstance(catalog, Catalog) else catalog
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=fmt.delimiter)
        writer.writerow([fmt.columns[f] for f in FIELDS])
        for p in products:
            writer.writerow([getattr(p, f) for f in FIELDS])
