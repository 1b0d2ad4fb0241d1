"""Binary classification metrics for the positive class."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricReport:
    precision: float
    recall: float
    f1: float
    roc_auc: float | None
    pr_auc: float | None
    support_positive: int
    support_negative: int
    flags: tuple = field(default=())

    CSV_FIELDS = ("precision", "recall", "f1", "roc_auc", "pr_auc", "support_positive", "support_negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = list(self.flags)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self) -> list[str]:
        return [_fmt(getattr(self, k)) for k in self.CSV_FIELDS]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_FIELDS)
        w.writerow(self.csv_row())
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _binary(y, name):
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not set(np.unique(y)) <= {0, 1}:
        raise ValueError(f"{name} must contain only 0/1 values")
    return y.astype(np.int64)


def confusion(y_true, y_pred) -> ConfusionCounts:
    yt, yp = _binary(y_true, "y_true"), _binary(y_pred, "y_pred")
    if len(yt) != len(yp):
        raise ValueError(f"length mismatch: {len(yt)} labels vs {len(yp)} predictions")
    if len(yt) == 0:
        raise ValueError("no examples to evaluate")
    tp = int(np.sum((yt == 1) & (yp == 1)))
    fp = int(np.sum((yt == 0) & (yp == 1)))
    tn = int(np.sum((yt == 0) & (yp == 0)))
    fn = int(np.sum((yt == 1) & (yp == 0)))
    return ConfusionCounts(tp, fp, tn, fn)


def precision_recall_f1(c: ConfusionCounts) -> tuple[float, float, float]:
    """Zero denominators give 0 rather than an error."""
    p = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    r = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    return p, r, f1_from(p, r)


def f1_from(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _scores(y_true, scores):
    yt = _binary(y_true, "y_true")
    s = np.asarray(scores, dtype=float)
    if s.shape != yt.shape:
        raise ValueError(f"length mismatch: {len(yt)} labels vs {len(s)} scores")
    return yt, s


def roc_auc(y_true, scores) -> float:
    """Probability that a random positive outscores a random negative (ties 1/2),
    computed from average ranks."""
    yt, s = _scores(y_true, scores)
    n_pos = int(yt.sum())
    n_neg = len(yt) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs both positive and negative examples")
    order = np.argsort(s, kind="mergesort")
    sorted_s = s[order]
    ranks = np.empty(len(s))
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_s[j + 1] == sorted_s[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    u = ranks[yt == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def roc_curve(y_true, scores):
    """False/true positive rates at every distinct threshold, descending."""
    yt, s = _scores(y_true, scores)
    order = np.argsort(-s, kind="mergesort")
    ys, ss = yt[order], s[order]
    distinct = np.flatnonzero(np.diff(ss)) if len(ss) > 1 else np.array([], dtype=int)
    ends = np.concatenate([distinct, [len(ss) - 1]])
    tps = np.cumsum(ys)[ends]
    fps = (ends + 1) - tps
    tpr = np.concatenate([[0.0], tps / max(yt.sum(), 1)])
    fpr = np.concatenate([[0.0], fps / max(len(yt) - yt.sum(), 1)])
    return fpr, tpr


def roc_auc_trapezoid(y_true, scores) -> float:
    """Area under the ROC curve by the trapezoid rule (agrees with :func:`roc_auc`)."""
    yt, _ = _scores(y_true, scores)
    if yt.sum() == 0 or yt.sum() == len(yt):
        raise ValueError("roc_auc needs both positive and negative examples")
    fpr, tpr = roc_curve(y_true, scores)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def pr_auc(y_true, scores) -> float:
    """Average precision: sum over thresholds of precision times recall gain."""
    yt, s = _scores(y_true, scores)
    n_pos = int(yt.sum())
    if n_pos == 0:
        raise ValueError("pr_auc needs at least one positive example")
    order = np.argsort(-s, kind="mergesort")
    ys, ss = yt[order], s[order]
    distinct = np.flatnonzero(np.diff(ss)) if len(ss) > 1 else np.array([], dtype=int)
    ends = np.concatenate([distinct, [len(ss) - 1]])
    tps = np.cumsum(ys)[ends].astype(float)
    precision = tps / (ends + 1)
    recall = tps / n_pos
    prev_recall = np.concatenate([[0.0], recall[:-1]])
    return float(np.sum((recall - prev_recall) * precision))


def evaluate(y_true, scores, threshold: float = 0.5) -> MetricReport:
    """Full report from positive-class scores; AUCs are None when undefined."""
    yt, s = _scores(y_true, scores)
    c = confusion(yt, (s >= threshold).astype(np.int64))
    p, r, f = precision_recall_f1(c)
    flags = []
    if c.tp + c.fp == 0:
        flags.append("precision_zero_denominator")
    if c.tp + c.fn == 0:
        flags.append("recall_zero_denominator")
    n_pos = int(yt.sum())
    n_neg = len(yt) - n_pos
    ra = roc_auc(yt, s) if n_pos and n_neg else None
    pa = pr_auc(yt, s) if n_pos else None
    return MetricReport(p, r, f, ra, pa, n_pos, n_neg, tuple(flags))
