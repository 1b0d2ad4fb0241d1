"""Experiment configuration files (YAML) and their validation."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from ..classifiers import make_params, normalize_algorithm
from ..corpus import LabelClass, Language, Source
from ..embeddings import SkipgramConfig
from ..errors import ConfigError
from ..features import normalize_spec
from ..neuralnet import CnnConfig
from .grid import DEFAULT_FEATURE_COMBINATIONS, DEFAULT_PARAM_GRIDS, CvConfig, ExperimentGrid, expand_param_grid
from .search import CnnGrid

APPROACHES = ("traditional", "deep")


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: Path | None = None
    synthetic: dict | None = None
    language: Language | None = None
    source: Source | None = None
    embeddings: Path | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple
    classes: tuple = tuple(LabelClass)
    approaches: tuple = APPROACHES
    seed: int = 42
    out_dir: Path = Path("results")
    split_ratio: float = 0.8
    grid: ExperimentGrid = field(default_factory=ExperimentGrid)
    cv: CvConfig = CvConfig(folds=5)
    cnn_grid: CnnGrid = CnnGrid()
    cnn_cv: CvConfig = CvConfig(folds=3)
    embedding_training: SkipgramConfig = SkipgramConfig()
    df_bounds: tuple = (2, 0.8)
    path: Path | None = None

    def needs_embeddings(self) -> bool:
        return "deep" in self.approaches or "fasttext" in self.grid.groups_used()


def _expect(value, types, key):
    if not isinstance(value, types):
        names = types.__name__ if isinstance(types, type) else " or ".join(t.__name__ for t in types)
        raise ConfigError(key, f"expected {names}, got {type(value).__name__}")
    return value


def _as_list(value, key) -> list:
    if not isinstance(value, list) or not value:
        raise ConfigError(key, "expected a non-empty list")
    return value


def _enum(cls, value, key):
    try:
        return cls(value)
    except ValueError:
        raise ConfigError(key, f"unknown value {value!r} (expected one of: {', '.join(m.value for m in cls)})") from None


def _reject_unknown(d: dict, allowed, prefix: str):
    for k in d:
        if k not in allowed:
            where = f"{prefix}.{k}" if prefix else str(k)
            raise ConfigError(where, f"unknown key (allowed: {', '.join(sorted(allowed))})")


def _resolve(base: Path | None, p) -> Path:
    p = Path(p)
    return p if p.is_absolute() or base is None else base / p


def _dataset(d, i, base) -> DatasetSpec:
    key = f"datasets[{i}]"
    _expect(d, dict, key)
    _reject_unknown(d, {"name", "path", "synthetic", "language", "source", "embeddings"}, key)
    name = _expect(d.get("name"), str, f"{key}.name")
    if ("path" in d) == ("synthetic" in d):
        raise ConfigError(key, "give exactly one of 'path' or 'synthetic'")
    synthetic = None
    if "synthetic" in d:
        synthetic = dict(_expect(d["synthetic"], dict, f"{key}.synthetic"))
        _reject_unknown(synthetic, {"n", "seed", "noise"}, f"{key}.synthetic")
    lang = _enum(Language, d["language"], f"{key}.language") if "language" in d else None
    if synthetic is not None and lang is None:
        raise ConfigError(f"{key}.language", "required for synthetic datasets")
    source = _enum(Source, d["source"], f"{key}.source") if "source" in d else None
    return DatasetSpec(name, _resolve(base, d["path"]) if "path" in d else None, synthetic, lang, source,
                       _resolve(base, d["embeddings"]) if d.get("embeddings") else None)


def _traditional(d: dict) -> tuple[ExperimentGrid, CvConfig, tuple]:
    key = "traditional"
    _reject_unknown(d, {"feature_combinations", "scaling", "sampling", "algorithms", "folds", "df_bounds"}, key)
    combos = DEFAULT_FEATURE_COMBINATIONS
    if "feature_combinations" in d:
        combos = []
        for i, c in enumerate(_as_list(d["feature_combinations"], f"{key}.feature_combinations")):
            try:
                combos.append(normalize_spec(_as_list(c, f"{key}.feature_combinations[{i}]")))
            except ValueError as exc:
                raise ConfigError(f"{key}.feature_combinations[{i}]", str(exc)) from None
    scaling = [bool(_expect(v, bool, f"{key}.scaling")) for v in _as_list(d.get("scaling", [True, False]),
                                                                          f"{key}.scaling")]
    sampling = [bool(_expect(v, bool, f"{key}.sampling")) for v in _as_list(d.get("sampling", [True, False]),
                                                                            f"{key}.sampling")]
    algos = DEFAULT_PARAM_GRIDS
    if "algorithms" in d:
        algos = {}
        for name, grid in _expect(d["algorithms"], dict, f"{key}.algorithms").items():
            akey = f"{key}.algorithms.{name}"
            try:
                algo = normalize_algorithm(name)
            except ValueError as exc:
                raise ConfigError(akey, str(exc)) from None
            grid = grid or {}
            _expect(grid, dict, akey)
            grid = {k: (v if isinstance(v, list) else [v]) for k, v in grid.items()}
            try:
                for p in expand_param_grid(grid):
                    make_params(algo, p)
            except (ValueError, TypeError) as exc:
                raise ConfigError(akey, str(exc)) from None
            algos[algo] = grid
    folds = _expect(d.get("folds", 5), int, f"{key}.folds")
    if folds < 2:
        raise ConfigError(f"{key}.folds", "must be >= 2")
    bounds = tuple(d.get("df_bounds", (2, 0.8)))
    if len(bounds) != 2:
        raise ConfigError(f"{key}.df_bounds", "expected [min_df, max_df]")
    return ExperimentGrid(tuple(combos), tuple(scaling), tuple(sampling), algos), CvConfig(folds=folds), bounds


def _deep(d: dict) -> tuple[CnnGrid, CvConfig]:
    key = "deep"
    grid_keys = ("kernel_size", "dense_units", "number_filters", "sampling", "scaling")
    base_keys = {f.name for f in fields(CnnConfig)} - {"kernel_size", "dense_units", "number_filters", "seed",
                                                        "embedding_dim"}
    _reject_unknown(d, set(grid_keys) | base_keys | {"folds"}, key)
    dims = {}
    for k in grid_keys:
        if k in d:
            v = d[k] if isinstance(d[k], list) else [d[k]]
            dims[k] = tuple(_as_list(v, f"{key}.{k}"))
    try:
        base = replace(CnnConfig(), **{k: d[k] for k in base_keys if k in d})
        grid = CnnGrid(base=base, **dims)
        for c in grid.cells():
            grid.config_for(c, base.embedding_dim)
    except (ValueError, TypeError) as exc:
        raise ConfigError(key, str(exc)) from None
    folds = _expect(d.get("folds", 3), int, f"{key}.folds")
    if folds < 2:
        raise ConfigError(f"{key}.folds", "must be >= 2")
    return grid, CvConfig(folds=folds)


def parse_config(raw: dict, base_dir=None, path=None) -> ExperimentConfig:
    _expect(raw, dict, "<root>")
    _reject_unknown(raw, {"seed", "out_dir", "split_ratio", "datasets", "classes", "approaches", "traditional",
                          "deep", "embedding_training"}, "")
    base = Path(base_dir) if base_dir is not None else None
    datasets = tuple(_dataset(d, i, base) for i, d in enumerate(_as_list(raw.get("datasets"), "datasets")))
    names = [d.name for d in datasets]
    if len(set(names)) != len(names):
        raise ConfigError("datasets", "dataset names must be unique")
    classes = tuple(_enum(LabelClass, c, "classes") for c in _as_list(raw.get("classes", [c.value for c in LabelClass]),
                                                                      "classes"))
    approaches = tuple(_as_list(raw.get("approaches", list(APPROACHES)), "approaches"))
    for a in approaches:
        if a not in APPROACHES:
            raise ConfigError("approaches", f"unknown approach {a!r} (expected traditional or deep)")
    seed = _expect(raw.get("seed", 42), int, "seed")
    ratio = _expect(raw.get("split_ratio", 0.8), (int, float), "split_ratio")
    if not 0 < ratio < 1:
        raise ConfigError("split_ratio", "must be in (0, 1)")
    grid, cv, bounds = _traditional(_expect(raw.get("traditional", {}) or {}, dict, "traditional"))
    cnn_grid, cnn_cv = _deep(_expect(raw.get("deep", {}) or {}, dict, "deep"))
    emb = _expect(raw.get("embedding_training", {}) or {}, dict, "embedding_training")
    _reject_unknown(emb, {f.name for f in fields(SkipgramConfig)}, "embedding_training")
    try:
        if "ngram_range" in emb:
            emb["ngram_range"] = tuple(emb["ngram_range"])
        skipgram = SkipgramConfig(**emb)
    except (ValueError, TypeError) as exc:
        raise ConfigError("embedding_training", str(exc)) from None
    out_dir = Path(raw.get("out_dir", "results"))
    return ExperimentConfig(datasets, classes, approaches, seed, out_dir, float(ratio), grid, cv, cnn_grid, cnn_cv,
                            skipgram, bounds, Path(path) if path else None)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(str(path), "config file does not exist")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from None
    return parse_config(raw, path.parent, path)
