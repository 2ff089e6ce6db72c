from .trajectory import (
    SCHEMA,
    StepRecord,
    Trajectory,
    TrajectoryFormatError,
    load_external_trace,
    load_trajectory,
    loads_trajectory,
    save_trajectory,
)
from .metrics import (
    DEFAULT_FALLBACK,
    Interval,
    MetricReport,
    OptimizationCurve,
    aggregate,
    auc,
    best_at,
    best_so_far_curve,
    bootstrap_ci,
    hold_fixed_auc,
    hold_fixed_extend,
    pad_or_truncate,
    run_metrics,
    topk_curve,
)

__all__ = [
    "aggregate",
    "auc",
    "best_at",
    "best_so_far_curve",
    "bootstrap_ci",
    "DEFAULT_FALLBACK",
    "hold_fixed_auc",
    "hold_fixed_extend",
    "Interval",
    "load_external_trace",
    "load_trajectory",
    "loads_trajectory",
    "MetricReport",
    "OptimizationCurve",
    "pad_or_truncate",
    "run_metrics",
    "save_trajectory",
    "SCHEMA",
    "StepRecord",
    "topk_curve",
    "Trajectory",
    "TrajectoryFormatError",
]
