"""Grid search, cross-validation, benchmark runs and shipped presets."""

from .benchmark import (CSV_COLUMNS, BenchmarkResult, ExperimentError, check_no_leakage, load_spec_dataset,
                        results_csv, run_benchmark, write_reports)
from .config import DatasetSpec, ExperimentConfig, load_config, parse_config
from .grid import (CNN_CV, DEFAULT_FEATURE_COMBINATIONS, DEFAULT_PARAM_GRIDS, CvConfig, ExperimentGrid, GridCell,
                   cell_seed, expand_param_grid, select_best, stratified_kfold)
from .pipeline import (DeepPipeline, TraditionalPipeline, fit_deep, fit_traditional, label_name, load_model,
                       preprocess_all, save_model, write_json_atomic)
from .presets import PRESETS, Preset, list_presets, load_preset
from .search import CnnGrid, SearchResult, audit_passed, cnn_cell_id, run_cnn_search, run_grid_search

__all__ = [
    "BenchmarkResult", "CNN_CV", "CSV_COLUMNS", "CnnGrid", "CvConfig", "DEFAULT_FEATURE_COMBINATIONS",
    "DEFAULT_PARAM_GRIDS", "DatasetSpec", "DeepPipeline", "ExperimentConfig", "ExperimentError", "ExperimentGrid",
    "GridCell", "PRESETS", "Preset", "SearchResult", "TraditionalPipeline", "audit_passed", "cell_seed",
    "check_no_leakage", "cnn_cell_id", "expand_param_grid", "fit_deep", "fit_traditional", "label_name",
    "list_presets", "load_config", "load_model", "load_preset", "load_spec_dataset", "parse_config",
    "preprocess_all", "results_csv", "run_benchmark", "run_cnn_search", "run_grid_search", "save_model",
    "select_best", "stratified_kfold", "write_json_atomic", "write_reports",
]
