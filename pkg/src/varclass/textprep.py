"""Text cleansing and vocabulary construction for product descriptions.

A product's free-text fields are merged into one description, cleansed into
a deduplicated word list, and the union of training word lists becomes the
vocabulary every classifier operates on.
"""

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources

from .errors import DataError

# A maximal run of digits is dropped only when no letter touches either end,
# so embedded codes like e420ii or b12 survive while "40" in "40% vol" dies.
_STANDALONE_DIGITS = re.compile(r"(?<![^\W\d_])(?<!\d)\d+(?!\d)(?![^\W\d_])")
_BRACKETS = str.maketrans({c: " " for c in "()[]{}"})


def _strip_accents(text):
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def _punct_to_space(text):
    # Unicode punctuation (P*) and symbols (S*) both count; this is what
    # turns "40%" into "40 " and "extra-virgin" into "extra virgin".
    return "".join(
        " " if unicodedata.category(c)[0] in "PS" else c for c in text
    )


@dataclass(frozen=True)
class StopwordSet:
    """An immutable set of lowercase words excluded from descriptions."""

    words: frozenset

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower():
                raise DataError(f"stopword entries must be lowercase and non-empty: {w!r}")

    def __contains__(self, word):
        return word in self.words

    def __len__(self):
        return len(self.words)

    def folded(self):
        """The same set with accents stripped from every entry."""
        return StopwordSet(frozenset(_strip_accents(w) for w in self.words))

    @classmethod
    def from_words(cls, words):
        return cls(frozenset(w.strip().lower() for w in words if w.strip()))

    @classmethod
    def from_file(cls, path):
        """Load one word per line; blank lines and # comments are skipped."""
        words = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    words.append(line)
        return cls.from_words(words)

    @classmethod
    def builtin(cls, lang="es"):
        """One of the lists shipped with the package ("es" or "en")."""
        try:
            text = (
                resources.files("varclass")
                .joinpath(f"data/stopwords_{lang}.txt")
                .read_text(encoding="utf-8")
            )
        except FileNotFoundError:
            raise DataError(f"no builtin stopword list for language {lang!r}")
        return cls.from_words(
            line for line in text.splitlines() if line.strip() and not line.startswith("#")
        )


def build_description(name, legal_name="", ingredients=""):
    """Join the non-blank text fields of a product into one string."""
    return " ".join(part for part in (name, legal_name, ingredients) if part and part.strip())


def preprocess(text, stopwords=(), fold_accents=False):
    """Cleanse a raw description into an ordered, deduplicated word list.

    Steps, in order: brackets to spaces, lowercase, optional accent folding,
    drop standalone digit runs, drop stopwords, punctuation and symbols to
    spaces, collapse whitespace, split, dedupe keeping first occurrence.
    The result is stable under a second pass.
    """
    s = text.translate(_BRACKETS)
    s = s.lower()
    if fold_accents:
        s = _strip_accents(s)
    s = _STANDALONE_DIGITS.sub(" ", s)
    s = " ".join(t for t in s.split() if t not in stopwords)
    s = _punct_to_space(s)
    words = []
    seen = set()
    for token in s.split():
        # splitting on punctuation can expose new stopwords, so filter again
        if token in stopwords or token in seen:
            continue
        seen.add(token)
        words.append(token)
    return words


@dataclass(frozen=True)
class Vocabulary:
    """Ordered unique words mapped to column indices, fixed at fit time."""

    words: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {w: j for j, w in enumerate(self.words)}
        )
        if len(self._index) != len(self.words):
            raise DataError("vocabulary words must be unique")

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def __iter__(self):
        return iter(self.words)

    def column(self, word):
        return self._index[word]

    def get(self, word, default=None):
        return self._index.get(word, default)

    @classmethod
    def from_word_lists(cls, word_lists):
        """Union of word lists in first-occurrence order."""
        seen = {}
        for wl in word_lists:
            for w in wl:
                seen.setdefault(w, None)
        if not seen:
            raise DataError("no words left after preprocessing; vocabulary is empty")
        return cls(tuple(seen))


def build_vocabulary(word_lists):
    return Vocabulary.from_word_lists(word_lists)
