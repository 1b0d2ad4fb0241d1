"""Word embeddings: text-format tables, subword lookup, document vectors,
and a small skip-gram trainer with character n-gram buckets.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Language
from .errors import DataError
from .textprep import ProcessedText

log = logging.getLogger(__name__)

DEFAULT_DIMENSION = 300


def fnv1a_32(data: bytes) -> int:
    h = 2166136261
    for byte in data:
        h ^= byte
        h = (h * 16777619) & 0xFFFFFFFF
    return h


def char_ngrams(word: str, nmin: int = 3, nmax: int = 6) -> list[str]:
    """Character n-grams of ``<word>``, shortest first at each start position."""
    padded = f"<{word}>"
    out = []
    for i in range(len(padded)):
        for n in range(nmin, nmax + 1):
            if i + n > len(padded):
                break
            out.append(padded[i:i + n])
    return out


def ngram_buckets(word: str, n_buckets: int, nmin: int = 3, nmax: int = 6) -> list[int]:
    return [fnv1a_32(g.encode("utf-8")) % n_buckets for g in char_ngrams(word, nmin, nmax)]


@dataclass
class EmbeddingTable:
    words: tuple
    vectors: np.ndarray
    language: Language | None = None
    subword_buckets: np.ndarray | None = None
    ngram_range: tuple = (3, 6)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.words = tuple(self.words)
        self.vectors = np.asarray(self.vectors, dtype=float).reshape(len(self.words), -1)
        self._index = {}
        for i, w in enumerate(self.words):
            if w in self._index:
                raise DataError(f"duplicate word {w!r} in embedding table")
            self._index[w] = i
        if self.subword_buckets is not None and self.subword_buckets.shape[1] != self.dimension:
            raise DataError("subword bucket dimension differs from word vector dimension")
        self.vectors.flags.writeable = False

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def index(self, word) -> int | None:
        return self._index.get(word)

    def checksum(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.vectors).tobytes()).hexdigest()


def vector_for_word(t: EmbeddingTable, word: str) -> np.ndarray:
    """Stored vector; for unknown words the mean of n-gram bucket vectors, else zeros."""
    i = t.index(word)
    if i is not None:
        return t.vectors[i].copy()
    if t.subword_buckets is not None and len(t.subword_buckets):
        ids = ngram_buckets(word, len(t.subword_buckets), *t.ngram_range)
        return t.subword_buckets[ids].mean(axis=0)
    return np.zeros(t.dimension)


def document_vector(t: EmbeddingTable, p) -> np.ndarray:
    """Arithmetic mean of the document's word vectors (zeros when it has none)."""
    words = [tok.surface for tok in p.tokens if tok.is_word] if isinstance(p, ProcessedText) else list(p)
    if not words:
        return np.zeros(t.dimension)
    return np.mean([vector_for_word(t, w) for w in words], axis=0)


# ---------------------------------------------------------------- text format

def load_embeddings(path, dimension: int | None = DEFAULT_DIMENSION, language=None) -> EmbeddingTable:
    """Read the standard word-vector text format (``N D`` header, then ``word v1 .. vD``).

    ``dimension`` is the required vector size; pass ``None`` to accept the header's.
    A sibling ``<path>.subwords.npz`` written by :func:`save_embeddings` restores
    n-gram buckets.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such embedding file: {path}")
    words, rows = [], []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or not all(h.isdigit() for h in header):
            raise DataError("header must be '<count> <dimension>'", 1, path)
        count, dim = int(header[0]), int(header[1])
        if dimension is not None and dim != dimension:
            raise DataError(f"embedding dimension {dim} does not match required {dimension}", 1, path)
        for lineno, raw in enumerate(fh, start=2):
            parts = raw.rstrip("\n").rstrip(" ").split(" ")
            if parts == [""]:
                continue
            if len(parts) != dim + 1:
                raise DataError(f"expected word and {dim} values, got {len(parts) - 1} values", lineno, path)
            word = parts[0]
            if word in seen:
                raise DataError(f"duplicate word {word!r}", lineno, path)
            try:
                rows.append([float(x) for x in parts[1:]])
            except ValueError:
                raise DataError("non-numeric vector component", lineno, path) from None
            seen.add(word)
            words.append(word)
    if len(words) != count:
        raise DataError(f"header declares {count} words but file has {len(words)}", path=path)
    vectors = np.array(rows, dtype=float).reshape(len(words), dim)
    buckets, ngram_range = None, (3, 6)
    side = path.with_name(path.name + ".subwords.npz")
    if side.exists():
        with np.load(side) as z:
            buckets = z["buckets"]
            ngram_range = tuple(int(v) for v in z["ngram_range"])
    lang = Language(language) if language else None
    return EmbeddingTable(tuple(words), vectors, lang, buckets, ngram_range)


def save_embeddings(t: EmbeddingTable, path) -> None:
    """Write ``t`` in text format; floats use repr() so reloading is bit-exact."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(t)} {t.dimension}\n")
        for word, vec in zip(t.words, t.vectors):
            fh.write(word + " " + " ".join(repr(float(x)) for x in vec) + "\n")
    if t.subword_buckets is not None:
        np.savez(path.with_name(path.name + ".subwords.npz"), buckets=t.subword_buckets,
                 ngram_range=np.array(t.ngram_range))


# ---------------------------------------------------------------- training

@dataclass(frozen=True)
class SkipgramConfig:
    dimension: int = DEFAULT_DIMENSION
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.05
    min_count: int = 2
    ngram_range: tuple = (3, 6)
    buckets: int = 10000
    batch_size: int = 128

    def __post_init__(self):
        for name in ("dimension", "window", "negatives", "epochs", "min_count", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"skip-gram {name} must be positive")
        if self.learning_rate <= 0:
            raise ValueError("skip-gram learning_rate must be positive")
        if self.buckets < 0:
            raise ValueError("skip-gram buckets must be non-negative")
        lo, hi = self.ngram_range
        if not 1 <= lo <= hi:
            raise ValueError("ngram_range must satisfy 1 <= min <= max")


MIN_CORPUS_TOKENS = 100


def _corpus_words(corpus) -> list[list[str]]:
    out = []
    for doc in corpus:
        if isinstance(doc, ProcessedText):
            out.append([t.surface for t in doc.tokens if t.is_word])
        else:
            out.append(list(doc))
    return out


def train_skipgram(corpus, cfg: SkipgramConfig = SkipgramConfig(), seed: int = 42, language=None,
                   return_history: bool = False):
    """Skip-gram with negative sampling; input words are the mean of the word
    vector and its character n-gram bucket vectors.

    Returns the table (and the per-epoch mean loss when ``return_history``).
    """
    sentences = _corpus_words(corpus)
    total = sum(len(s) for s in sentences)
    if total < MIN_CORPUS_TOKENS:
        raise DataError(f"skip-gram training needs at least {MIN_CORPUS_TOKENS} tokens, corpus has {total}")
    counts = Counter(w for s in sentences for w in s)
    vocab = sorted((w for w, c in counts.items() if c >= cfg.min_count), key=lambda w: (-counts[w], w))
    if len(vocab) < 2:
        raise DataError("skip-gram vocabulary has fewer than 2 words after min_count filtering")
    index = {w: i for i, w in enumerate(vocab)}
    V, D, B = len(vocab), cfg.dimension, cfg.buckets
    rng = np.random.default_rng(seed)

    # components of each word: its own row, then bucket rows; padded with a dummy zero row
    dummy = V + B
    comps = [[i] + ([V + b for b in ngram_buckets(w, B, *cfg.ngram_range)] if B else []) for i, w in enumerate(vocab)]
    width = max(len(c) for c in comps)
    comp = np.full((V, width), dummy, dtype=np.int64)
    for i, c in enumerate(comps):
        comp[i, :len(c)] = c
    n_comp = np.array([len(c) for c in comps], dtype=float)

    theta = rng.uniform(-0.5 / D, 0.5 / D, size=(V + B + 1, D))
    theta[dummy] = 0.0
    out_vecs = np.zeros((V, D))

    freq = np.array([counts[w] for w in vocab], dtype=float) ** 0.75
    neg_cdf = np.cumsum(freq / freq.sum())

    pairs = []
    for s in sentences:
        ids = [index[w] for w in s if w in index]
        for i, c in enumerate(ids):
            lo, hi = max(0, i - cfg.window), min(len(ids), i + cfg.window + 1)
            pairs.extend((c, ids[j]) for j in range(lo, hi) if j != i)
    if not pairs:
        raise DataError("skip-gram corpus yields no (center, context) pairs")
    pairs = np.array(pairs, dtype=np.int64)
    n_pairs = len(pairs)
    n_steps = cfg.epochs * ((n_pairs + cfg.batch_size - 1) // cfg.batch_size)
    step = 0
    history = []
    K = cfg.negatives
    for epoch in range(cfg.epochs):
        order = rng.permutation(n_pairs)
        epoch_loss = 0.0
        for start in range(0, n_pairs, cfg.batch_size):
            lr = cfg.learning_rate * max(1e-4, 1.0 - step / n_steps)
            step += 1
            batch = pairs[order[start:start + cfg.batch_size]]
            centers, contexts = batch[:, 0], batch[:, 1]
            negs = np.searchsorted(neg_cdf, rng.random((len(batch), K)), side="right").clip(max=V - 1)
            targets = np.concatenate([contexts[:, None], negs], axis=1)
            labels = np.zeros(targets.shape)
            labels[:, 0] = 1.0

            cidx = comp[centers]
            h = theta[cidx].sum(axis=1) / n_comp[centers, None]
            w_out = out_vecs[targets]
            scores = np.einsum("bd,bkd->bk", h, w_out)
            sig = 1.0 / (1.0 + np.exp(-scores))
            eps = 1e-12
            loss = -(labels * np.log(sig + eps) + (1 - labels) * np.log(1 - sig + eps)).sum(axis=1)
            epoch_loss += loss.sum()

            g = sig - labels
            dh = np.einsum("bk,bkd->bd", g, w_out)
            np.add.at(out_vecs, targets, -lr * g[:, :, None] * h[:, None, :])
            share = (-lr * dh / n_comp[centers, None])[:, None, :]
            np.add.at(theta, cidx, np.broadcast_to(share, cidx.shape + (D,)))
            theta[dummy] = 0.0
        history.append(float(epoch_loss / n_pairs))
        log.debug("skip-gram epoch %d loss %.5f", epoch + 1, history[-1])

    word_vecs = theta[comp].sum(axis=1) / n_comp[:, None]
    buckets = theta[V:V + B].copy() if B else None
    table = EmbeddingTable(tuple(vocab), word_vecs, Language(language) if language else None, buckets, tuple(cfg.ngram_range))
    return (table, history) if return_history else table
