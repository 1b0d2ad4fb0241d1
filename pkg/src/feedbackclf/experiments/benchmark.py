"""Benchmark runner: split, search, refit on train, evaluate once on test."""

from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import LabelClass, LabeledDataset, load_dataset, stratified_split
from ..embeddings import EmbeddingTable, load_embeddings, save_embeddings, train_skipgram
from ..errors import FeedbackError
from ..metrics import MetricReport, evaluate
from ..synthetic import synthetic_dataset
from .config import DatasetSpec, ExperimentConfig
from .pipeline import fit_deep, fit_traditional, preprocess_all, save_model, write_json_atomic
from .search import run_cnn_search, run_grid_search

log = logging.getLogger(__name__)

CSV_COLUMNS = ("dataset", "class", "approach", "precision", "recall", "f1", "roc_auc", "pr_auc", "support_positive",
               "support_negative", "best_f1", "cv_mean_f1", "n_cells", "configuration")


class ExperimentError(FeedbackError):
    """Failure inside one (dataset, class, approach) run; ``cause`` is the original error."""

    def __init__(self, context: str, cause: Exception):
        self.context = context
        self.cause = cause
        super().__init__(f"[{context}] {cause}")


@dataclass
class BenchmarkResult:
    dataset: str
    positive: LabelClass
    approach: str
    report: MetricReport
    configuration: str
    cv_mean_f1: float
    n_cells: int
    wall_clock: float
    best_f1: bool = False
    score_table: list = field(default_factory=list, repr=False)
    config: dict = field(default_factory=dict)
    model_path: str | None = None

    def csv_row(self) -> list[str]:
        r = self.report.csv_row()
        return [self.dataset, self.positive.value, self.approach, *r, str(self.best_f1).lower(),
                f"{self.cv_mean_f1:.6f}", str(self.n_cells), self.configuration]

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "class": self.positive.value,
            "approach": self.approach,
            "metrics": self.report.to_dict(),
            "configuration": self.configuration,
            "config": self.config,
            "cv_mean_f1": self.cv_mean_f1,
            "n_cells": self.n_cells,
            "best_f1": self.best_f1,
            "wall_clock_seconds": self.wall_clock,
            "model_path": self.model_path,
            "score_table": self.score_table,
        }


def load_spec_dataset(spec: DatasetSpec, seed: int) -> LabeledDataset:
    if spec.synthetic is not None:
        s = spec.synthetic
        return synthetic_dataset(int(s.get("n", 200)), spec.language, int(s.get("seed", seed)), spec.source,
                                 noise=float(s.get("noise", 0.0)))
    ds = load_dataset(spec.path)
    if spec.language is not None:
        other = {d.language for d in ds} - {spec.language}
        if other:
            raise ValueError(f"dataset {spec.name!r} declares language {spec.language.value} but contains "
                             f"{', '.join(sorted(o.value for o in other))}")
    return ds


def resolve_embeddings(spec: DatasetSpec, cfg: ExperimentConfig, train: LabeledDataset, processed: dict,
                       out_dir: Path) -> tuple[EmbeddingTable, dict]:
    """External table when configured, otherwise skip-gram trained on the training split only."""
    if spec.embeddings is not None:
        if not spec.embeddings.exists():
            raise FileNotFoundError(f"embedding table {spec.embeddings} not found; fix datasets[].embeddings "
                                    "or remove it to train embeddings on the training split")
        table = load_embeddings(spec.embeddings, dimension=None)
        return table, {"path": str(spec.embeddings.resolve()), "checksum": table.checksum()}
    docs = [processed[i] for i in train.ids]
    table = train_skipgram(docs, cfg.embedding_training, cfg.seed, train.documents[0].language)
    path = out_dir / "embeddings" / f"{spec.name}.vec"
    path.parent.mkdir(parents=True, exist_ok=True)
    save_embeddings(table, path)
    return table, {"path": str(Path("..") / "embeddings" / path.name), "checksum": table.checksum()}


def _flag_best(results: list[BenchmarkResult]):
    groups: dict = {}
    for r in results:
        groups.setdefault((r.dataset, r.positive), []).append(r)
    for rs in groups.values():
        top = max(r.report.f1 for r in rs)
        for r in rs:
            r.best_f1 = r.report.f1 == top


def check_no_leakage(pipeline, test: LabeledDataset):
    leaked = set(pipeline.fitted_ids) & set(test.ids)
    if leaked:
        raise RuntimeError(f"test documents used in fitting: {sorted(leaked)[:5]}")
    tf = getattr(pipeline, "tfidf", None)
    if tf is not None and set(tf.fitted_ids) & set(test.ids):
        raise RuntimeError("tf-idf model saw test documents")
    sc = getattr(pipeline, "scaler", None)
    if sc is not None and set(sc.fitted_ids) & set(test.ids):
        raise RuntimeError("scaler saw test documents")


def run_benchmark(cfg: ExperimentConfig, out_dir=None, jobs: int = 1) -> list[BenchmarkResult]:
    """Run every (dataset, class, approach) combination and write reports to ``out_dir``."""
    out_dir = Path(out_dir or cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for spec in cfg.datasets:
        ds = load_spec_dataset(spec, cfg.seed)
        split = stratified_split(ds, cfg.split_ratio, cfg.seed)
        processed = dict(zip(ds.ids, preprocess_all(ds.documents)))
        table = ref = None
        if cfg.needs_embeddings():
            table, ref = resolve_embeddings(spec, cfg, split.train, processed, out_dir)
        for positive in cfg.classes:
            for approach in cfg.approaches:
                context = f"{spec.name}/{positive.value}/{approach}"
                log.info("benchmark %s", context)
                try:
                    results.append(_run_one(spec, split, positive, approach, cfg, processed, table, ref,
                                            out_dir, jobs))
                except Exception as exc:  # noqa: BLE001 - re-raised with context
                    raise ExperimentError(context, exc) from exc
    _flag_best(results)
    write_reports(results, out_dir)
    return results


def _run_one(spec, split, positive, approach, cfg, processed, table, ref, out_dir, jobs) -> BenchmarkResult:
    start = time.perf_counter()
    if approach == "traditional":
        search = run_grid_search(split.train, positive, cfg.grid, cfg.cv, cfg.seed, table, jobs, processed,
                                 df_bounds=cfg.df_bounds)
        best = search.best
        pipe = fit_traditional(split.train, positive, best["features"], best["scaling"], best["sampling"],
                               best["algorithm"], best["params"], cfg.seed, table if "fasttext" in best["features"]
                               else None, ref if "fasttext" in best["features"] else None, processed, cfg.df_bounds)
    else:
        search = run_cnn_search(split.train, positive, cfg.cnn_grid, table, cfg.cnn_cv, cfg.seed, jobs, processed)
        best = search.best
        cell = best["params"]
        pipe = fit_deep(split.train, positive, cfg.cnn_grid.config_for(cell, table.dimension), table,
                        cell["sampling"], cell["scaling"], cfg.seed, processed)
    check_no_leakage(pipe, split.test)
    scores = pipe.scores([processed[i] for i in split.test.ids])
    report = evaluate(split.test.binary_labels(positive), scores)
    model_path = out_dir / "models" / f"{spec.name}__{positive.value}__{approach}.json"
    save_model(pipe, model_path)
    elapsed = time.perf_counter() - start
    return BenchmarkResult(spec.name, positive, approach, report, best["cell_id"], best["mean_f1"], len(search.table),
                           elapsed, score_table=search.table,
                           config={k: best[k] for k in ("algorithm", "params", "features", "scaling", "sampling")},
                           model_path=str(model_path.relative_to(out_dir)))


def results_csv(results: list[BenchmarkResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        w.writerow(r.csv_row())
    return buf.getvalue()


def write_reports(results: list[BenchmarkResult], out_dir) -> None:
    out_dir = Path(out_dir)
    tmp = out_dir / ".results.csv.tmp"
    tmp.write_text(results_csv(results), encoding="utf-8")
    tmp.replace(out_dir / "results.csv")
    write_json_atomic({"results": [r.to_dict() for r in results]}, out_dir / "results.json")
