"""Feedback documents, labeled datasets, annotation aggregation and sampling."""

from __future__ import annotations

import csv
import enum
import hashlib
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError


class LabelClass(str, enum.Enum):
    PROBLEM_REPORT = "problem_report"
    INQUIRY = "inquiry"
    IRRELEVANT = "irrelevant"


class Language(str, enum.Enum):
    EN = "EN"
    IT = "IT"


class Source(str, enum.Enum):
    APP_REVIEW = "app_review"
    TWEET = "tweet"


NEEDS_ADJUDICATION = "needs_adjudication"

CSV_HEADER = ["id", "text", "language", "source", "label"]


def _parse_enum(enum_cls, value, what, line=None, path=None):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise DataError(f"unknown {what} {value!r} (expected one of: {allowed})", line, path) from None


@dataclass(frozen=True)
class FeedbackDocument:
    id: str
    text: str
    language: Language
    source: Source
    label: LabelClass | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise DataError(f"document {self.id!r} has empty text")

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "language": self.language.value,
            "source": self.source.value,
            "label": self.label.value if self.label is not None else None,
        }


@dataclass(frozen=True)
class LabeledDataset:
    """An immutable collection of labeled documents with unique ids."""

    documents: tuple[FeedbackDocument, ...]
    class_counts: dict = field(init=False, compare=False)

    def __post_init__(self):
        docs = tuple(self.documents)
        object.__setattr__(self, "documents", docs)
        seen = set()
        for doc in docs:
            if doc.label is None:
                raise DataError(f"document {doc.id!r} has no label")
            if doc.id in seen:
                raise DataError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        counts = Counter(doc.label for doc in docs)
        object.__setattr__(self, "class_counts", {c: counts.get(c, 0) for c in LabelClass})

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def labels(self) -> list[LabelClass]:
        return [d.label for d in self.documents]

    def binary_labels(self, positive: LabelClass) -> np.ndarray:
        return np.array([1 if d.label == positive else 0 for d in self.documents], dtype=np.int64)

    def subset(self, ids: Iterable[str]) -> "LabeledDataset":
        keep = set(ids)
        return LabeledDataset(tuple(d for d in self.documents if d.id in keep))

    def fingerprint(self) -> str:
        return fingerprint_ids(self.ids)


@dataclass(frozen=True)
class AnnotationRecord:
    doc_id: str
    annotator_id: str
    label: LabelClass


@dataclass(frozen=True)
class DataSplit:
    train: LabeledDataset
    test: LabeledDataset
    seed: int
    ratio: float


def fingerprint_ids(ids: Iterable[str]) -> str:
    """Order-independent digest of a set of document ids."""
    h = hashlib.sha256()
    for i in sorted(ids):
        h.update(i.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()[:16]


def _record_to_document(rec, line, path, require_label):
    if not isinstance(rec, dict):
        raise DataError("record is not an object", line, path)
    for key in ("id", "text", "language", "source"):
        if rec.get(key) in (None, ""):
            raise DataError(f"missing field {key!r}", line, path)
    label = rec.get("label")
    if label in (None, ""):
        if require_label:
            raise DataError(f"document {rec['id']!r} has no label", line, path)
        label = None
    else:
        label = _parse_enum(LabelClass, label, "label", line, path)
    text = str(rec["text"])
    if not text.strip():
        raise DataError(f"document {rec['id']!r} has empty text", line, path)
    return FeedbackDocument(
        id=str(rec["id"]),
        text=text,
        language=_parse_enum(Language, rec["language"], "language", line, path),
        source=_parse_enum(Source, rec["source"], "source", line, path),
        label=label,
    )


def _iter_records(path: Path, fmt: str):
    if fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                if not raw.strip():
                    continue
                try:
                    yield lineno, json.loads(raw)
                except json.JSONDecodeError as exc:
                    raise DataError(f"invalid JSON: {exc.msg}", lineno, path) from None
    elif fmt == "csv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                return
            if header != CSV_HEADER:
                raise DataError(f"CSV header must be {','.join(CSV_HEADER)}", 1, path)
            for row in reader:
                lineno = reader.line_num
                if not row:
                    continue
                if len(row) != len(CSV_HEADER):
                    raise DataError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", lineno, path)
                yield lineno, dict(zip(CSV_HEADER, row))
    else:
        raise DataError(f"unsupported format {fmt!r} (use jsonl or csv)")


def _infer_format(path: Path) -> str:
    return "csv" if path.suffix.lower() == ".csv" else "jsonl"


def load_documents(path, format: str | None = None, require_labels: bool = False) -> list[FeedbackDocument]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    fmt = format or _infer_format(path)
    docs = []
    seen = set()
    for lineno, rec in _iter_records(path, fmt):
        doc = _record_to_document(rec, lineno, path, require_labels)
        if doc.id in seen:
            raise DataError(f"duplicate document id {doc.id!r}", lineno, path)
        seen.add(doc.id)
        docs.append(doc)
    if not docs:
        raise DataError("empty dataset", path=path)
    return docs


def load_dataset(path, format: str | None = None) -> LabeledDataset:
    """Load a labeled dataset from JSONL (canonical) or CSV."""
    return LabeledDataset(tuple(load_documents(path, format, require_labels=True)))


def save_documents(documents: Iterable[FeedbackDocument], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in documents:
            fh.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")


def load_annotations(path) -> list[AnnotationRecord]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    out = []
    seen = set()
    for lineno, rec in _iter_records(path, "jsonl"):
        if not isinstance(rec, dict):
            raise DataError("record is not an object", lineno, path)
        for key in ("doc_id", "annotator_id", "label"):
            if rec.get(key) in (None, ""):
                raise DataError(f"missing field {key!r}", lineno, path)
        ann = AnnotationRecord(
            str(rec["doc_id"]),
            str(rec["annotator_id"]),
            _parse_enum(LabelClass, rec["label"], "label", lineno, path),
        )
        key = (ann.doc_id, ann.annotator_id)
        if key in seen:
            raise DataError(f"annotator {ann.annotator_id!r} labeled {ann.doc_id!r} twice", lineno, path)
        seen.add(key)
        out.append(ann)
    return out


def aggregate_annotations(annotations: Sequence[AnnotationRecord]) -> dict:
    """Resolve each document's label by strict majority.

    Documents with fewer than two annotations, or without a strict majority
    (a 1-1 split between two annotators, or any tie among more), map to
    ``NEEDS_ADJUDICATION``.
    """
    by_doc = defaultdict(list)
    seen = set()
    for ann in annotations:
        key = (ann.doc_id, ann.annotator_id)
        if key in seen:
            raise DataError(f"annotator {ann.annotator_id!r} labeled {ann.doc_id!r} twice")
        seen.add(key)
        by_doc[ann.doc_id].append(ann.label)
    result = {}
    for doc_id in sorted(by_doc):
        labels = by_doc[doc_id]
        if len(labels) < 2:
            result[doc_id] = NEEDS_ADJUDICATION
            continue
        label, count = max(Counter(labels).items(), key=lambda kv: (kv[1], kv[0].value))
        result[doc_id] = label if 2 * count > len(labels) else NEEDS_ADJUDICATION
    return result


def stratified_split(ds: LabeledDataset, ratio: float = 0.8, seed: int = 42) -> DataSplit:
    """Split per class so every class keeps ``ratio`` of its documents in train."""
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    rng = np.random.default_rng(seed)
    train_ids = set()
    for cls in LabelClass:
        ids = sorted(d.id for d in ds.documents if d.label == cls)
        if not ids:
            continue
        if len(ids) < 2:
            raise DataError(f"class {cls.value!r} has fewer than 2 documents; cannot split")
        n_train = min(max(int(round(ratio * len(ids))), 1), len(ids) - 1)
        perm = rng.permutation(len(ids))
        train_ids.update(ids[i] for i in perm[:n_train])
    train = LabeledDataset(tuple(d for d in ds.documents if d.id in train_ids))
    test = LabeledDataset(tuple(d for d in ds.documents if d.id not in train_ids))
    return DataSplit(train=train, test=test, seed=seed, ratio=ratio)


def undersample_indices(y: Sequence[int], seed: int) -> np.ndarray:
    """Indices (ascending) that keep the minority group and an equally sized
    random subset of the majority group of a binary label vector."""
    y = np.asarray(y)
    pos = np.flatnonzero(y == 1)
    neg = np.flatnonzero(y != 1)
    if len(pos) == 0 or len(neg) == 0:
        raise DataError("under-sampling needs both positive and negative examples")
    if len(pos) == len(neg):
        return np.arange(len(y))
    minority, majority = (pos, neg) if len(pos) < len(neg) else (neg, pos)
    rng = np.random.default_rng(seed)
    kept = rng.choice(majority, size=len(minority), replace=False)
    return np.sort(np.concatenate([minority, kept]))


def undersample_majority(ds: LabeledDataset, positive: LabelClass, seed: int = 42) -> LabeledDataset:
    """Randomly drop majority-group documents (positive vs rest) until balanced."""
    keep = undersample_indices(ds.binary_labels(positive), seed)
    return LabeledDataset(tuple(ds.documents[i] for i in keep))
