"""Fitted end-to-end pipelines (text in, positive-class score out) and their
JSON persistence."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import classifiers, neuralnet
from ..corpus import FeedbackDocument, LabelClass, LabeledDataset, Language, fingerprint_ids, undersample_indices
from ..embeddings import EmbeddingTable, load_embeddings
from ..errors import DataError
from ..features import (FeatureContext, GroupCache, Scaler, TfidfModel, fit_scaler, fit_tfidf, normalize_spec,
                        scale, transform_many)
from ..neuralnet import CnnConfig, CnnModel
from ..textprep import ProcessedText, preprocess

FORMAT_VERSION = 1


def preprocess_all(docs, language=None) -> list[ProcessedText]:
    out = []
    for d in docs:
        if isinstance(d, ProcessedText):
            out.append(d)
        else:
            out.append(preprocess(d.text, language or d.language))
    return out


def feature_matrix(features, rows, processed, cache: GroupCache, tfidf: TfidfModel | None) -> np.ndarray:
    """Rows of the requested groups, in canonical order, from cached values
    plus a freshly applied tf-idf model."""
    parts = []
    for g in normalize_spec(features):
        if g == "tfidf":
            if tfidf is None:
                raise DataError("feature group 'tfidf' needs a fitted tf-idf model")
            parts.append(transform_many(tfidf, [processed[i] for i in rows]))
        else:
            if g not in cache.matrices:
                raise DataError(f"feature group {g!r} is unavailable (no embedding table?)")
            parts.append(cache.matrices[g][rows])
    return np.hstack(parts)


@dataclass
class TraditionalPipeline:
    language: Language
    positive: LabelClass
    features: tuple
    scaling: bool
    sampling: bool
    algorithm: str
    params: dict
    seed: int
    classifier: classifiers.TrainedClassifier
    tfidf: TfidfModel | None = None
    scaler: Scaler | None = None
    embeddings: EmbeddingTable | None = None
    embeddings_ref: dict | None = None
    fitted_ids: tuple = field(default=(), repr=False)

    kind = "traditional"

    def transform(self, docs) -> np.ndarray:
        processed = preprocess_all(docs, self.language)
        ctx = FeatureContext(self.language, self.tfidf, self.embeddings)
        groups = [g for g in self.features if g != "tfidf"]
        cache = GroupCache.build(processed, ctx, groups)
        X = feature_matrix(self.features, np.arange(len(processed)), processed, cache, self.tfidf)
        return scale(self.scaler, X) if self.scaler is not None else X

    def scores(self, docs) -> np.ndarray:
        docs = list(docs)
        if not docs:
            return np.zeros(0)
        return np.asarray(classifiers.predict_score(self.classifier, self.transform(docs)), dtype=float)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": self.kind,
            "language": self.language.value,
            "positive": self.positive.value,
            "features": list(self.features),
            "scaling": self.scaling,
            "sampling": self.sampling,
            "algorithm": self.algorithm,
            "params": self.params,
            "seed": self.seed,
            "train_fingerprint": fingerprint_ids(self.fitted_ids),
            "tfidf": self.tfidf.to_dict() if self.tfidf is not None else None,
            "scaler": self.scaler.to_dict() if self.scaler is not None else None,
            "embeddings": self.embeddings_ref,
            "classifier": self.classifier.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict, base_dir=None, embeddings: EmbeddingTable | None = None) -> "TraditionalPipeline":
        ref = d.get("embeddings")
        if ref and embeddings is None:
            path = Path(ref["path"])
            if not path.is_absolute() and base_dir is not None:
                path = Path(base_dir) / path
            if not path.exists():
                raise DataError(f"model needs embedding table {path}, which does not exist")
            embeddings = load_embeddings(path, dimension=None)
        if ref and embeddings is not None and ref.get("checksum") and embeddings.checksum() != ref["checksum"]:
            raise DataError("embedding table checksum differs from the one the model was trained with")
        return cls(
            Language(d["language"]), LabelClass(d["positive"]), tuple(d["features"]), d["scaling"], d["sampling"],
            d["algorithm"], d["params"], d["seed"], classifiers.TrainedClassifier.from_dict(d["classifier"]),
            TfidfModel.from_dict(d["tfidf"]) if d.get("tfidf") else None,
            Scaler.from_dict(d["scaler"]) if d.get("scaler") else None,
            embeddings, ref,
        )


@dataclass
class DeepPipeline:
    language: Language
    positive: LabelClass
    sampling: bool
    scaling: bool
    seed: int
    model: CnnModel
    fitted_ids: tuple = field(default=(), repr=False)
    history: list = field(default_factory=list, repr=False)

    kind = "deep"

    def scores(self, docs) -> np.ndarray:
        docs = list(docs)
        if not docs:
            return np.zeros(0)
        return neuralnet.predict_proba(self.model, preprocess_all(docs, self.language))

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": self.kind,
            "language": self.language.value,
            "positive": self.positive.value,
            "sampling": self.sampling,
            "scaling": self.scaling,
            "seed": self.seed,
            "train_fingerprint": fingerprint_ids(self.fitted_ids),
            "cnn": self.model.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict, base_dir=None, embeddings=None) -> "DeepPipeline":
        return cls(Language(d["language"]), LabelClass(d["positive"]), d["sampling"], d["scaling"], d["seed"],
                   CnnModel.from_dict(d["cnn"]))


def _sample(ds: LabeledDataset, positive, sampling: bool, seed: int) -> LabeledDataset:
    if not sampling:
        return ds
    keep = undersample_indices(ds.binary_labels(positive), seed)
    return LabeledDataset(tuple(ds.documents[i] for i in keep))


def fit_traditional(train: LabeledDataset, positive, features, scaling: bool, sampling: bool, algorithm: str,
                    params: dict, seed: int = 42, embeddings: EmbeddingTable | None = None,
                    embeddings_ref: dict | None = None, processed: dict | None = None,
                    df_bounds=(2, 0.8)) -> TraditionalPipeline:
    """Sample, fit tf-idf and scaler, then the classifier, all on ``train`` only.

    ``processed`` optionally maps document id to an already preprocessed text.
    """
    positive = LabelClass(positive)
    features = normalize_spec(features)
    algorithm = classifiers.normalize_algorithm(algorithm)
    fit_ds = _sample(train, positive, sampling, seed)
    language = fit_ds.documents[0].language
    docs = [processed[d.id] for d in fit_ds] if processed else preprocess_all(fit_ds.documents)
    ids = fit_ds.ids
    tfidf = fit_tfidf(docs, df_bounds, ids=ids) if "tfidf" in features else None
    if "fasttext" in features and embeddings is None:
        raise DataError("feature group 'fasttext' needs an embedding table")
    ctx = FeatureContext(language, tfidf, embeddings)
    cache = GroupCache.build(docs, ctx, [g for g in features if g != "tfidf"])
    X = feature_matrix(features, np.arange(len(docs)), docs, cache, tfidf)
    scaler = None
    if scaling:
        scaler = fit_scaler(X, ids=ids)
        X = scale(scaler, X)
    y = fit_ds.binary_labels(positive)
    clf = classifiers.fit(algorithm, classifiers.make_params(algorithm, params), X, y, seed=seed,
                          positive_class=positive)
    return TraditionalPipeline(language, positive, features, scaling, sampling, algorithm, dict(params), seed, clf,
                               tfidf, scaler, embeddings, embeddings_ref, tuple(ids))


def fit_deep(train: LabeledDataset, positive, cfg: CnnConfig, table: EmbeddingTable, sampling: bool = True,
             scaling: bool = True, seed: int = 42, processed: dict | None = None,
             extra_epochs: int = 0) -> DeepPipeline:
    """Train the CNN on ``train`` (under-sampled when ``sampling``).

    ``scaling`` is recorded for reporting only: the network sees token indices.
    """
    positive = LabelClass(positive)
    fit_ds = _sample(train, positive, sampling, seed)
    language = fit_ds.documents[0].language
    docs = [processed[d.id] for d in fit_ds] if processed else preprocess_all(fit_ds.documents)
    model = neuralnet.init_model(cfg, table, seed)
    X = neuralnet.encode_many(docs, model.vocab, model.config.input_length)
    y = fit_ds.binary_labels(positive)
    trained, history = neuralnet.train(model, X, y, model.config, seed, epochs=model.config.epochs + extra_epochs)
    return DeepPipeline(language, positive, sampling, scaling, seed, trained, tuple(fit_ds.ids), history)


def write_json_atomic(obj, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True)
            fh.write("\n")
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_model(pipeline, path) -> None:
    write_json_atomic(pipeline.to_dict(), path)


def load_model(path, embeddings: EmbeddingTable | None = None):
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"model file is not valid JSON: {exc}", path=path) from None
    if d.get("format_version") != FORMAT_VERSION:
        raise DataError(f"unsupported model format version {d.get('format_version')!r}", path=path)
    kind = d.get("kind")
    if kind == "traditional":
        return TraditionalPipeline.from_dict(d, path.parent, embeddings)
    if kind == "deep":
        return DeepPipeline.from_dict(d, path.parent, embeddings)
    raise DataError(f"unknown model kind {kind!r}", path=path)


def label_name(positive: LabelClass, predicted: int) -> str:
    return positive.value if predicted else f"not_{positive.value}"


def as_documents(ds) -> list[FeedbackDocument]:
    return list(ds.documents) if isinstance(ds, LabeledDataset) else list(ds)
