"""Small text CNN in numpy: frozen embedding, 1D convolution, global max
pooling, dense layer, two-unit softmax.

All arithmetic is float64 and single-threaded per model so a given seed
always produces the same weights.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .embeddings import EmbeddingTable
from .errors import DataError
from .textprep import ProcessedText

PAD = 0
OOV = 1
FORMAT_VERSION = 1


@dataclass(frozen=True)
class CnnConfig:
    input_length: int = 200
    embedding_dim: int = 300
    number_filters: int = 16
    kernel_size: int = 3
    dense_units: int = 32
    epochs: int = 7
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 42

    def __post_init__(self):
        for name in ("input_length", "embedding_dim", "number_filters", "kernel_size", "dense_units",
                     "epochs", "batch_size"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")
        if self.kernel_size > self.input_length:
            raise ValueError("kernel_size must not exceed input_length")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CnnConfig":
        return cls(**d)


def count_trainable_params(cfg: CnnConfig) -> int:
    """Conv, dense and output weights plus biases; the frozen embedding is excluded."""
    k, d, f, u = cfg.kernel_size, cfg.embedding_dim, cfg.number_filters, cfg.dense_units
    return k * d * f + f + f * u + u + u * 2 + 2


# ------------------------------------------------------------------ encoding

def build_vocab_index(table: EmbeddingTable) -> dict:
    """Word to row index; rows 0 and 1 are reserved for padding and unknown words."""
    return {w: i + 2 for i, w in enumerate(table.words)}


def embedding_matrix(table: EmbeddingTable) -> np.ndarray:
    E = np.zeros((len(table) + 2, table.dimension))
    E[2:] = table.vectors
    E.flags.writeable = False
    return E


def _words(p) -> list[str]:
    if isinstance(p, ProcessedText):
        return [t.surface for t in p.tokens if t.is_word]
    return list(p)


def encode_tokens(p, vocab: dict, input_length: int = 200) -> np.ndarray:
    """Fixed-length index sequence: keep the first ``input_length`` words, pad at the end."""
    ids = [vocab.get(w, OOV) for w in _words(p)[:input_length]]
    out = np.full(input_length, PAD, dtype=np.int64)
    out[:len(ids)] = ids
    return out


def encode_many(docs, vocab: dict, input_length: int = 200) -> np.ndarray:
    return np.vstack([encode_tokens(p, vocab, input_length) for p in docs]) if len(docs) else \
        np.zeros((0, input_length), dtype=np.int64)


# --------------------------------------------------------------------- model

def _glorot(rng, shape, fan_in, fan_out):
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


@dataclass
class CnnModel:
    config: CnnConfig
    vocab: dict
    embedding: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.embedding = np.asarray(self.embedding, dtype=float)
        self.embedding.flags.writeable = False
        if self.embedding.shape[1] != self.config.embedding_dim:
            raise ValueError(f"embedding dimension {self.embedding.shape[1]} differs from "
                             f"config embedding_dim {self.config.embedding_dim}")

    def embedding_checksum(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.embedding).tobytes()).hexdigest()

    def vocab_fingerprint(self) -> str:
        words = sorted(self.vocab, key=self.vocab.get)
        return hashlib.sha256("\n".join(words).encode("utf-8")).hexdigest()[:16]

    def copy(self) -> "CnnModel":
        return CnnModel(self.config, self.vocab, self.embedding, {k: v.copy() for k, v in self.params.items()})

    def to_dict(self) -> dict:
        words = sorted(self.vocab, key=self.vocab.get)
        return {
            "format_version": FORMAT_VERSION,
            "config": self.config.to_dict(),
            "vocab": words,
            "vocab_fingerprint": self.vocab_fingerprint(),
            "embedding": self.embedding[2:].tolist(),
            "params": {k: {"shape": list(v.shape), "values": v.ravel().tolist()} for k, v in self.params.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CnnModel":
        if d.get("format_version") != FORMAT_VERSION:
            raise DataError(f"unsupported CNN model format version {d.get('format_version')!r}")
        cfg = CnnConfig.from_dict(d["config"])
        vocab = {w: i + 2 for i, w in enumerate(d["vocab"])}
        E = np.zeros((len(vocab) + 2, cfg.embedding_dim))
        if vocab:
            E[2:] = np.array(d["embedding"], dtype=float)
        params = {k: np.array(v["values"], dtype=float).reshape(v["shape"]) for k, v in d["params"].items()}
        m = cls(cfg, vocab, E, params)
        if m.vocab_fingerprint() != d["vocab_fingerprint"]:
            raise DataError("vocabulary fingerprint mismatch in model file")
        return m


def init_model(cfg: CnnConfig, table: EmbeddingTable, seed: int | None = None) -> CnnModel:
    if table.dimension != cfg.embedding_dim:
        cfg = replace(cfg, embedding_dim=table.dimension)
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    k, d, f, u = cfg.kernel_size, cfg.embedding_dim, cfg.number_filters, cfg.dense_units
    params = {
        "conv_w": _glorot(rng, (k, d, f), k * d, k * f),
        "conv_b": np.zeros(f),
        "dense_w": _glorot(rng, (f, u), f, u),
        "dense_b": np.zeros(u),
        "out_w": _glorot(rng, (u, 2), u, 2),
        "out_b": np.zeros(2),
    }
    return CnnModel(cfg, build_vocab_index(table), embedding_matrix(table), params)


# ------------------------------------------------------------------- forward

def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _check_indices(m: CnnModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    if X.size and (X.min() < 0 or X.max() >= len(m.embedding)):
        raise IndexError(f"token index out of range [0, {len(m.embedding)})")
    if X.shape[1] < m.config.kernel_size:
        raise ValueError("sequence shorter than the convolution kernel")
    return X


def _forward(m: CnnModel, X):
    p = m.params
    k = p["conv_w"].shape[0]
    f = p["conv_w"].shape[2]
    n_pos = X.shape[1] - k + 1
    uniq, inv = np.unique(X, return_inverse=True)
    inv = inv.reshape(X.shape)
    Eu = m.embedding[uniq]
    # project every distinct token through each kernel offset once
    proj = (Eu @ p["conv_w"].transpose(1, 0, 2).reshape(Eu.shape[1], k * f)).reshape(len(uniq), k, f)
    Z = np.zeros((X.shape[0], n_pos, f))
    for j in range(k):
        Z += proj[inv[:, j:j + n_pos], j, :]
    Z += p["conv_b"]
    arg = Z.argmax(axis=1)
    pooled = np.tanh(np.take_along_axis(Z, arg[:, None, :], axis=1)[:, 0, :])
    hidden = np.tanh(pooled @ p["dense_w"] + p["dense_b"])
    probs = _softmax(hidden @ p["out_w"] + p["out_b"])
    cache = {"uniq": uniq, "inv": inv, "Eu": Eu, "arg": arg, "pooled": pooled, "hidden": hidden}
    return probs, cache


def forward(m: CnnModel, X, check: bool = False) -> np.ndarray:
    """Class probabilities, shape (n, 2); column 1 is the positive class."""
    X = _check_indices(m, X)
    probs, cache = _forward(m, X)
    if check:
        assert np.all(np.abs(probs.sum(axis=1) - 1.0) < 1e-9)
        assert np.all(np.abs(cache["pooled"]) <= 1.0) and np.all(np.abs(cache["hidden"]) <= 1.0)
    return probs


def pooled_activations(m: CnnModel, X) -> np.ndarray:
    return _forward(m, _check_indices(m, X))[1]["pooled"]


def _loss(probs, y) -> float:
    return float(-np.mean(np.log(np.maximum(probs[np.arange(len(y)), y], 1e-300))))


def loss(m: CnnModel, X, y) -> float:
    X = _check_indices(m, X)
    return _loss(_forward(m, X)[0], np.asarray(y, dtype=np.int64))


def gradients(m: CnnModel, X, y) -> tuple[float, dict]:
    """Mean cross-entropy and its gradient for every trainable tensor."""
    X = _check_indices(m, X)
    y = np.asarray(y, dtype=np.int64)
    p = m.params
    probs, c = _forward(m, X)
    n = len(y)
    k, _, f = p["conv_w"].shape
    d_logits = probs.copy()
    d_logits[np.arange(n), y] -= 1.0
    d_logits /= n
    g = {"out_w": c["hidden"].T @ d_logits, "out_b": d_logits.sum(axis=0)}
    d_hidden = (d_logits @ p["out_w"].T) * (1.0 - c["hidden"] ** 2)
    g["dense_w"] = c["pooled"].T @ d_hidden
    g["dense_b"] = d_hidden.sum(axis=0)
    d_pre = (d_hidden @ p["dense_w"].T) * (1.0 - c["pooled"] ** 2)
    g["conv_b"] = d_pre.sum(axis=0)
    # only the arg-max position of each filter receives gradient
    d_proj = np.zeros((len(c["uniq"]), k, f))
    rows = np.repeat(np.arange(n), f)
    filt = np.tile(np.arange(f), n)
    starts = c["arg"].ravel()
    vals = d_pre.ravel()
    for j in range(k):
        np.add.at(d_proj, (c["inv"][rows, starts + j], j, filt), vals)
    dW = c["Eu"].T @ d_proj.reshape(len(c["uniq"]), k * f)
    g["conv_w"] = dW.reshape(-1, k, f).transpose(1, 0, 2)
    return _loss(probs, y), g


# ------------------------------------------------------------------ training

class Adam:
    def __init__(self, params: dict, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params: dict, grads: dict):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        corr = math.sqrt(1.0 - b2 ** self.t) / (1.0 - b1 ** self.t)
        for k in sorted(params):
            self.m[k] = b1 * self.m[k] + (1.0 - b1) * grads[k]
            self.v[k] = b2 * self.v[k] + (1.0 - b2) * grads[k] ** 2
            params[k] -= self.lr * corr * self.m[k] / (np.sqrt(self.v[k]) + self.eps)


def train_step(m: CnnModel, opt: Adam, X, y) -> float:
    value, g = gradients(m, X, y)
    opt.step(m.params, g)
    return value


def train(m: CnnModel, X, y, cfg: CnnConfig | None = None, seed: int | None = None,
          epochs: int | None = None) -> tuple[CnnModel, list]:
    """Mini-batch Adam on a copy of ``m``; returns the trained copy and per-batch losses.

    The embedding is never touched; its checksum is verified after training.
    """
    cfg = cfg or m.config
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise DataError("empty training set")
    if len(X) != len(y):
        raise ValueError(f"{len(X)} sequences vs {len(y)} labels")
    if len(np.unique(y)) < 2:
        raise DataError("training labels contain a single class; both classes are required")
    before = m.embedding_checksum()
    out = m.copy()
    opt = Adam(out.params, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_eps)
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    history = []
    for _ in range(cfg.epochs if epochs is None else epochs):
        order = rng.permutation(len(y))
        for s in range(0, len(y), cfg.batch_size):
            batch = order[s:s + cfg.batch_size]
            history.append(train_step(out, opt, X[batch], y[batch]))
    assert out.embedding_checksum() == before, "embedding changed during training"
    return out, history


def predict_proba(m: CnnModel, docs) -> np.ndarray:
    """Positive-class probability per document (ProcessedText, word list, or index rows)."""
    if isinstance(docs, np.ndarray) and docs.dtype.kind in "iu":
        X = docs
    else:
        X = encode_many(list(docs), m.vocab, m.config.input_length)
    if len(X) == 0:
        return np.zeros(0)
    return forward(m, X)[:, 1]


def write_loss_history(history, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "loss"])
        for i, v in enumerate(history):
            w.writerow([i, repr(float(v))])


# ------------------------------------------------------------ gradient check

def gradient_check(m: CnnModel, example, epsilon: float = 1e-5, samples_per_tensor: int = 5,
                   seed: int = 0) -> float:
    """Max relative error between backprop and central differences.

    ``example`` is ``(X, y)``. A few entries of every tensor are sampled, so
    conv, dense and output weights are always covered. Relative error uses
    ``max(|a|, |n|, 1e-8)`` as denominator.
    """
    X, y = example
    X = _check_indices(m, X)
    y = np.atleast_1d(np.asarray(y, dtype=np.int64))
    _, g = gradients(m, X, y)
    rng = np.random.default_rng(seed)
    worst = 0.0
    probe = m.copy()
    for name in sorted(probe.params):
        w = probe.params[name]
        flat = w.reshape(-1)
        picks = rng.choice(flat.size, size=min(samples_per_tensor, flat.size), replace=False)
        for i in picks:
            orig = flat[i]
            flat[i] = orig + epsilon
            up = loss(probe, X, y)
            flat[i] = orig - epsilon
            down = loss(probe, X, y)
            flat[i] = orig
            numeric = (up - down) / (2.0 * epsilon)
            analytic = g[name].reshape(-1)[i]
            err = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
            worst = max(worst, err)
    return worst
