"""Exhaustive cross-validated grid search for the classical and the CNN arm."""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import classifiers, neuralnet
from ..corpus import LabelClass, LabeledDataset, undersample_indices
from ..embeddings import EmbeddingTable
from ..features import FeatureContext, GroupCache, fit_scaler, fit_tfidf, scale
from ..metrics import confusion, precision_recall_f1
from ..neuralnet import CnnConfig
from .grid import CNN_CV, CvConfig, ExperimentGrid, GridCell, cell_seed, check_fold, select_best, stratified_kfold
from .pipeline import feature_matrix, preprocess_all

log = logging.getLogger(__name__)


@dataclass
class SearchResult:
    best: dict
    table: list
    folds: list = field(default_factory=list)
    fitted: dict = field(default_factory=dict, repr=False)

    @property
    def n_evaluated(self) -> int:
        return len(self.table)


def f1_score(y_true, y_pred) -> float:
    return precision_recall_f1(confusion(y_true, y_pred))[2]


# ------------------------------------------------------------ shared context

@dataclass
class _Context:
    ids: list
    y: np.ndarray
    processed: list
    folds: list
    seed: int
    cache: GroupCache | None = None
    encoded: np.ndarray | None = None
    table: EmbeddingTable | None = None
    df_bounds: tuple = (2, 0.8)
    keep_fitted: bool = False
    _tfidf: dict = field(default_factory=dict)

    def fold_train(self, k: int, sampling: bool) -> np.ndarray:
        tr = self.folds[k][0]
        if not sampling:
            return tr
        kept = undersample_indices(self.y[tr], cell_seed(self.seed, f"fold{k}:sampling"))
        return tr[kept]

    def tfidf(self, k: int, sampling: bool):
        key = (k, sampling)
        if key not in self._tfidf:
            rows = self.fold_train(k, sampling)
            self._tfidf[key] = fit_tfidf([self.processed[i] for i in rows], self.df_bounds,
                                         ids=[self.ids[i] for i in rows])
        return self._tfidf[key]


_WORKER: _Context | None = None


def _init_worker(ctx):
    global _WORKER
    _WORKER = ctx


def _run_cells(ctx: _Context, cells, fn, jobs: int, order: list) -> list:
    """Evaluate cells inline or in a process pool; rows come back in ``order``."""
    if jobs <= 1 or len(cells) <= 1:
        rows = [fn(ctx, c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(ctx,)) as pool:
            chunk = max(1, len(cells) // (4 * jobs))
            rows = list(pool.map(_in_worker, [(fn, c) for c in cells], chunksize=chunk))
    by_id = {r["cell_id"]: r for r in rows}
    return [by_id[cid] for cid in order]


def _in_worker(arg):
    fn, cell = arg
    return fn(_WORKER, cell)


# ------------------------------------------------------------------ classical

def _evaluate_cell(ctx: _Context, cell: GridCell) -> dict:
    seed = cell_seed(ctx.seed, cell.cell_id)
    params = classifiers.make_params(cell.algorithm, cell.params)
    fold_f1, audit, fitted = [], [], []
    for k, (tr_all, va) in enumerate(ctx.folds):
        tr = ctx.fold_train(k, cell.sampling)
        y_tr, y_va = ctx.y[tr], ctx.y[va]
        check_fold(y_tr, y_va, k)
        fold_ids = {ctx.ids[i] for i in tr_all}
        tfidf = ctx.tfidf(k, cell.sampling) if "tfidf" in cell.features else None
        X_tr = feature_matrix(cell.features, tr, ctx.processed, ctx.cache, tfidf)
        X_va = feature_matrix(cell.features, va, ctx.processed, ctx.cache, tfidf)
        scaler = None
        if cell.scaling:
            scaler = fit_scaler(X_tr, ids=[ctx.ids[i] for i in tr])
            X_tr, X_va = scale(scaler, X_tr), scale(scaler, X_va)
        model = classifiers.fit(cell.algorithm, params, X_tr, y_tr, seed=seed)
        fold_f1.append(f1_score(y_va, classifiers.predict(model, X_va)))
        sampler_ids = tuple(ctx.ids[i] for i in tr)
        seen = {"sampler": sampler_ids}
        if tfidf is not None:
            seen["tfidf"] = tfidf.fitted_ids
        if scaler is not None:
            seen["scaler"] = scaler.fitted_ids
        audit.append({
            "fold": k,
            "subset_ok": all(set(v) <= fold_ids for v in seen.values()),
            "balanced": (not cell.sampling) or int(y_tr.sum()) * 2 == len(y_tr),
            "n_train": len(tr),
        })
        if ctx.keep_fitted:
            fitted.append(seen)
    row = {
        "cell_id": cell.cell_id,
        **cell.to_dict(),
        "n_groups": cell.n_groups,
        "complexity": cell.complexity(),
        "fold_f1": fold_f1,
        "mean_f1": float(np.mean(fold_f1)),
        "audit": audit,
    }
    if ctx.keep_fitted:
        row["fitted"] = fitted
    return row


def _folds(y, cv: CvConfig, seed: int) -> list:
    folds = stratified_kfold(y, cv.folds, seed if cv.seed is None else cv.seed, cv.stratified)
    for k, (tr, va) in enumerate(folds):
        check_fold(y[tr], y[va], k)
    return folds


def run_grid_search(train: LabeledDataset, positive, grid: ExperimentGrid, cv: CvConfig = CvConfig(), seed: int = 42,
                    embeddings: EmbeddingTable | None = None, jobs: int = 1, processed: dict | None = None,
                    keep_fitted: bool = False, df_bounds=(2, 0.8)) -> SearchResult:
    """Evaluate every grid cell with k-fold CV on ``train`` and pick the best mean f1.

    Sampling, tf-idf and scaling are fitted inside each training fold only.
    """
    positive = LabelClass(positive)
    y = train.binary_labels(positive)
    if len(np.unique(y)) < 2:
        raise ValueError(f"training data has no examples on one side of {positive.value!r} vs rest")
    docs = [processed[d.id] for d in train] if processed else preprocess_all(train.documents)
    language = train.documents[0].language
    groups = grid.groups_used() - {"tfidf"}
    if "fasttext" in groups and embeddings is None:
        raise ValueError("grid uses the fasttext group but no embedding table was given")
    cache = GroupCache.build(docs, FeatureContext(language, None, embeddings), sorted(groups))
    folds = _folds(y, cv, seed)
    ctx = _Context(train.ids, y, docs, folds, seed, cache=cache, df_bounds=df_bounds, keep_fitted=keep_fitted)
    cells = grid.cells()
    log.info("grid search: %d cells x %d folds for %s", len(cells), len(folds), positive.value)
    table = _run_cells(ctx, cells, _evaluate_cell, jobs, [c.cell_id for c in cells])
    if len(table) != grid.size():
        raise RuntimeError(f"evaluated {len(table)} cells, grid has {grid.size()}")
    fitted = {r["cell_id"]: r.pop("fitted") for r in table if "fitted" in r}
    return SearchResult(select_best(table), table, [(tr.tolist(), va.tolist()) for tr, va in folds], fitted)


def audit_passed(result: SearchResult) -> bool:
    return all(a["subset_ok"] and a["balanced"] for r in result.table for a in r["audit"])


# ------------------------------------------------------------------------ CNN

@dataclass(frozen=True)
class CnnGrid:
    kernel_size: tuple = (3, 5)
    dense_units: tuple = (16, 32)
    number_filters: tuple = (16,)
    sampling: tuple = (True,)
    scaling: tuple = (True,)
    base: CnnConfig = CnnConfig()

    def __post_init__(self):
        for name in ("kernel_size", "dense_units", "number_filters", "sampling", "scaling"):
            if not tuple(getattr(self, name)):
                raise ValueError(f"CNN grid dimension {name!r} is empty")
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def cells(self) -> list[dict]:
        out = []
        for k, u, f, sa, sc in itertools.product(self.kernel_size, self.dense_units, self.number_filters,
                                                 self.sampling, self.scaling):
            out.append({"kernel_size": k, "dense_units": u, "number_filters": f, "sampling": bool(sa),
                        "scaling": bool(sc)})
        return out

    def size(self) -> int:
        return len(self.cells())

    def config_for(self, cell: dict, embedding_dim: int) -> CnnConfig:
        return replace(self.base, kernel_size=cell["kernel_size"], dense_units=cell["dense_units"],
                       number_filters=cell["number_filters"], embedding_dim=embedding_dim)


def cnn_cell_id(cell: dict) -> str:
    return (f"cnn(dense_units={cell['dense_units']},kernel_size={cell['kernel_size']},"
            f"number_filters={cell['number_filters']})|scaling={str(cell['scaling']).lower()}"
            f"|sampling={str(cell['sampling']).lower()}")


def _evaluate_cnn_cell(ctx: _Context, cell: dict) -> dict:
    cid = cnn_cell_id(cell)
    seed = cell_seed(ctx.seed, cid)
    cfg = cell["config"]
    fold_f1, audit = [], []
    for k, (tr_all, va) in enumerate(ctx.folds):
        tr = ctx.fold_train(k, cell["sampling"])
        check_fold(ctx.y[tr], ctx.y[va], k)
        model = neuralnet.init_model(cfg, ctx.table, seed)
        trained, _ = neuralnet.train(model, ctx.encoded[tr], ctx.y[tr], cfg, seed)
        pred = (neuralnet.predict_proba(trained, ctx.encoded[va]) >= 0.5).astype(np.int64)
        fold_f1.append(f1_score(ctx.y[va], pred))
        audit.append({"fold": k, "subset_ok": set(tr) <= set(tr_all),
                      "balanced": (not cell["sampling"]) or int(ctx.y[tr].sum()) * 2 == len(tr),
                      "n_train": len(tr)})
    public = {k: v for k, v in cell.items() if k != "config"}
    return {"cell_id": cid, "algorithm": "cnn", "params": public, "sampling": cell["sampling"],
            "scaling": cell["scaling"], "features": [], "n_groups": 0,
            "complexity": float(neuralnet.count_trainable_params(cfg)), "fold_f1": fold_f1,
            "mean_f1": float(np.mean(fold_f1)), "audit": audit}


def run_cnn_search(train: LabeledDataset, positive, grid: CnnGrid, table: EmbeddingTable, cv: CvConfig = CNN_CV,
                   seed: int = 42, jobs: int = 1, processed: dict | None = None) -> SearchResult:
    """Same contract as :func:`run_grid_search` over CNN architecture cells."""
    positive = LabelClass(positive)
    y = train.binary_labels(positive)
    if len(np.unique(y)) < 2:
        raise ValueError(f"training data has no examples on one side of {positive.value!r} vs rest")
    docs = [processed[d.id] for d in train] if processed else preprocess_all(train.documents)
    vocab = neuralnet.build_vocab_index(table)
    encoded = neuralnet.encode_many(docs, vocab, grid.base.input_length)
    folds = _folds(y, cv, seed)
    ctx = _Context(train.ids, y, docs, folds, seed, encoded=encoded, table=table)
    cells = [dict(c, config=grid.config_for(c, table.dimension)) for c in grid.cells()]
    log.info("CNN search: %d cells x %d folds for %s", len(cells), len(folds), positive.value)
    rows = _run_cells(ctx, cells, _evaluate_cnn_cell, jobs, [cnn_cell_id(c) for c in cells])
    return SearchResult(select_best(rows), rows, [(tr.tolist(), va.tolist()) for tr, va in folds])
