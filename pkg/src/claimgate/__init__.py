"""Abstention-aware scientific claim verification.

A library and CLI that audits decomposed conditions against evidence,
aggregates audits under conservatively asymmetric rules, derives
margin-based confidence with an abstention threshold, and evaluates
selective behavior through risk-coverage analysis.
"""

__version__ = "0.1.0"

from .audit import AuditThresholds, assign_status, audit_instance, score_condition
from .confidence import (
    apply_abstention,
    confidence_max,
    confidence_mean,
    confidence_min,
)
from .decide import (
    AggregationMode,
    aggregate_claim,
    aggregate_qa,
    bayes_consistency_report,
    bayes_odds_threshold,
    naive_bayes_posterior_odds,
    predict,
)
from .model import (
    AuditStatus,
    ClaimLabel,
    Condition,
    ConditionAudit,
    EvidenceScores,
    Instance,
    LossSpec,
    Prediction,
    QALabel,
    RCCurve,
    RCPoint,
    Task,
    validate_instance,
)
from .riskcov import (
    EvalRecord,
    aurc,
    concentration_bound,
    concentration_experiment,
    monotonicity_check,
    rank_calibration_report,
    risk_at_coverage,
    risk_coverage_at,
    sweep,
)
from .synth import OracleConfig, Regime, generate_instances, generate_records

__all__ = [
    "AggregationMode",
    "AuditStatus",
    "AuditThresholds",
    "ClaimLabel",
    "Condition",
    "ConditionAudit",
    "EvalRecord",
    "EvidenceScores",
    "Instance",
    "LossSpec",
    "OracleConfig",
    "Prediction",
    "QALabel",
    "RCCurve",
    "RCPoint",
    "Regime",
    "Task",
    "aggregate_claim",
    "aggregate_qa",
    "apply_abstention",
    "assign_status",
    "audit_instance",
    "aurc",
    "bayes_consistency_report",
    "bayes_odds_threshold",
    "concentration_bound",
    "concentration_experiment",
    "confidence_max",
    "confidence_mean",
    "confidence_min",
    "generate_instances",
    "generate_records",
    "monotonicity_check",
    "naive_bayes_posterior_odds",
    "predict",
    "rank_calibration_report",
    "risk_at_coverage",
    "risk_coverage_at",
    "score_condition",
    "sweep",
    "validate_instance",
]
