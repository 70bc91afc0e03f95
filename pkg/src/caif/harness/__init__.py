"""Evaluation harness: dataset generation, baseline vs. guarded-pipeline
runs, accuracy/CI reporting."""

from caif.harness.dataset import (
    DatasetInstance,
    generate_dataset,
    load_dataset,
    save_dataset,
)
from caif.harness.reporting import (
    ModeReport,
    format_report,
    report,
    write_per_shot_csv,
    write_report_json,
)
from caif.harness.runner import (
    FailureKind,
    FaultCase,
    MatrixOutcome,
    RunMode,
    RunRecord,
    fault_matrix,
    run_baseline,
    run_caif,
    run_fault_matrix,
)
from caif.harness.stats import CiResult, InvalidCounts, wilson_ci

__all__ = [
    "CiResult",
    "DatasetInstance",
    "FailureKind",
    "FaultCase",
    "InvalidCounts",
    "MatrixOutcome",
    "ModeReport",
    "RunMode",
    "RunRecord",
    "fault_matrix",
    "format_report",
    "generate_dataset",
    "load_dataset",
    "report",
    "run_baseline",
    "run_caif",
    "run_fault_matrix",
    "save_dataset",
    "wilson_ci",
    "write_per_shot_csv",
    "write_report_json",
]
