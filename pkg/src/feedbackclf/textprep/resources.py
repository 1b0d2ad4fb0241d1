"""Per-language lexicon files shipped with the package.

Files live under ``feedbackclf/data/<lang>/``:

* ``lemmas.tsv``     surface<TAB>lemma
* ``pos.tsv``        surface<TAB>tag
* ``stopwords.txt``  one word per line
* ``keywords.txt``   one lemma per line
* ``sentiment.tsv``  lemma<TAB>strength

Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path

from ..corpus import Language
from ..errors import DataError

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def as_language(language) -> Language:
    if isinstance(language, Language):
        return language
    try:
        return Language(str(language).upper())
    except ValueError:
        raise ValueError(f"unsupported language {language!r} (expected EN or IT)") from None


def _lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            yield lineno, line


def read_word_list(path) -> list[str]:
    """Read a one-word-per-line list, preserving order and dropping duplicates."""
    path = Path(path)
    out = []
    seen = set()
    for _, line in _lines(path):
        word = line.strip()
        if word not in seen:
            seen.add(word)
            out.append(word)
    return out


def read_tsv(path, value_type=str) -> dict:
    path = Path(path)
    out = {}
    for lineno, line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError("expected two tab-separated columns", lineno, path)
        key, value = parts[0].strip(), parts[1].strip()
        try:
            out[key] = value_type(value)
        except ValueError:
            raise DataError(f"bad value {value!r}", lineno, path) from None
    return out


@dataclass(frozen=True)
class LanguageResources:
    language: Language
    lemmas: dict
    pos: dict
    stopwords: frozenset
    keywords: tuple
    sentiment: dict

    @functools.cached_property
    def known_words(self) -> frozenset:
        # words the lemmatizer accepts as base forms
        return frozenset(self.pos) | frozenset(self.lemmas.values()) | frozenset(self.keywords) | frozenset(self.sentiment)


@functools.lru_cache(maxsize=None)
def get_resources(language) -> LanguageResources:
    lang = as_language(language)
    base = DATA_DIR / lang.value.lower()
    return LanguageResources(
        language=lang,
        lemmas=read_tsv(base / "lemmas.tsv"),
        pos=read_tsv(base / "pos.tsv"),
        stopwords=frozenset(read_word_list(base / "stopwords.txt")),
        keywords=tuple(read_word_list(base / "keywords.txt")),
        sentiment=read_tsv(base / "sentiment.tsv", int),
    )
