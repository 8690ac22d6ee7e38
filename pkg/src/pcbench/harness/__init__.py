"""Benchmark orchestration: datasets, prompts, adapters, scoring and reports."""

from .adapters import (
    Adapter,
    AdapterError,
    ExecAdapter,
    GenerationRequest,
    HttpAdapter,
    ReferenceAdapter,
    ReplayAdapter,
    parse_adapter_spec,
)
from .dataset import (
    DATASET_ENV,
    DatasetError,
    ProjectBundle,
    bundled_root,
    default_root,
    load_dataset,
    load_dataset_lenient,
    load_project,
)
from .evaluate import SampleResult, evaluate_sample, extract_artifact
from .mutants import dropped_connection_circuit, mutant_artifact, wrong_pin_firmware
from .prompts import PromptOptions, build_prompt, fill_template, load_template
from .report import (
    AggregateReport,
    FilterRates,
    RateTable,
    aggregate,
    dataset_metrics_csv,
    error_stats,
    project_metrics,
    success_breakdown,
    write_reports,
)
from .tasks import CIRCUIT_TASKS, CODE_TASKS, TASKS, TaskKind
from .trials import (
    DEFAULT_TRIALS,
    TrialConfig,
    collect_trials,
    refine_loop,
    run_sample,
    run_trials,
    success_rate,
)

__all__ = [
    "Adapter", "AdapterError", "AggregateReport", "CIRCUIT_TASKS", "CODE_TASKS",
    "DATASET_ENV", "DEFAULT_TRIALS", "DatasetError", "ExecAdapter", "FilterRates",
    "GenerationRequest", "HttpAdapter", "ProjectBundle", "PromptOptions", "RateTable",
    "ReferenceAdapter", "ReplayAdapter", "SampleResult", "TASKS", "TaskKind", "TrialConfig",
    "aggregate", "build_prompt", "bundled_root", "collect_trials", "dataset_metrics_csv",
    "default_root", "dropped_connection_circuit", "error_stats", "evaluate_sample", "extract_artifact", "fill_template",
    "load_dataset", "load_dataset_lenient", "load_project", "load_template", "mutant_artifact",
    "parse_adapter_spec", "project_metrics", "refine_loop", "run_sample", "run_trials",
    "success_breakdown", "success_rate", "write_reports", "wrong_pin_firmware",
]
