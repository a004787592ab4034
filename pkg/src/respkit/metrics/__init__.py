"""Response evaluation metrics: controllability, discourse, facts, quality, statistics."""

from .control import (
    LenControl,
    PlanMatch,
    batch_len_control,
    len_control,
    match_generated_to_plan,
    order_fidelity,
    plan_labels_prf,
)
from .discourse import StanceProfile, stance_profile, transition_flow
from .facts import FactVerdicts, gfp, icr
from .quality import AnnotationResult, LabeledSpan, QualityBlock, annotate_response, judge_quality
from .report import EvalReport, aggregate_reports, evaluate_response, write_report_csv
from .stats import cliffs_delta, consistency_stats, icc_2_1, paired_t_one_sided, robustness_harness

__all__ = [
    "AnnotationResult",
    "EvalReport",
    "FactVerdicts",
    "LabeledSpan",
    "LenControl",
    "PlanMatch",
    "QualityBlock",
    "StanceProfile",
    "aggregate_reports",
    "annotate_response",
    "batch_len_control",
    "cliffs_delta",
    "consistency_stats",
    "evaluate_response",
    "gfp",
    "icc_2_1",
    "icr",
    "judge_quality",
    "len_control",
    "match_generated_to_plan",
    "order_fidelity",
    "paired_t_one_sided",
    "plan_labels_prf",
    "robustness_harness",
    "stance_profile",
    "transition_flow",
    "write_report_csv",
]
