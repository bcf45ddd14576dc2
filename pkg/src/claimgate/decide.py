"""Aggregation of audited conditions into task labels.

The rules are conservatively asymmetric: one contradicted critical
condition is enough to refute, while support demands unanimity (claim
verification) or at least one supported critical condition with none
contradicted (question answering). Non-critical conditions never
influence the label; they exist for inspection only.

Also provides the decision-theoretic analysis helpers: the posterior-odds
threshold implied by an asymmetric loss, naive-Bayes odds accumulation,
and a consistency report comparing the rule-based label against the
Bayes decision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .confidence import CONFIDENCE_AGGREGATORS, apply_abstention
from .errors import ModeInstanceMismatch, NoCriticalCondition, NonPositiveInput
from .model import (
    EPISTEMIC_DEFAULT,
    AuditStatus,
    ClaimLabel,
    ConditionAudit,
    Instance,
    Label,
    LossSpec,
    Prediction,
    QALabel,
    Task,
)


class AggregationMode(str, enum.Enum):
    FULL = "full"
    NO_DECOMPOSE = "no_decompose"
    NO_AUDIT = "no_audit"


def _critical(audits: Iterable[ConditionAudit]) -> list[ConditionAudit]:
    critical = [a for a in audits if a.condition.critical]
    if not critical:
        raise NoCriticalCondition("audit list contains no critical condition")
    return critical


def aggregate_claim(audits: Sequence[ConditionAudit]) -> ClaimLabel:
    """Claim-verification rule: any critical CON refutes; unanimous
    critical SUP supports; everything else is NEI."""
    critical = _critical(audits)
    if any(a.status is AuditStatus.CON for a in critical):
        return ClaimLabel.REFUTES
    if all(a.status is AuditStatus.SUP for a in critical):
        return ClaimLabel.SUPPORTS
    return ClaimLabel.NEI


def aggregate_qa(audits: Sequence[ConditionAudit]) -> QALabel:
    """QA rule: any critical CON answers no; otherwise one supported
    critical condition suffices for yes; everything else is maybe."""
    critical = _critical(audits)
    if any(a.status is AuditStatus.CON for a in critical):
        return QALabel.NO
    if any(a.status is AuditStatus.SUP for a in critical):
        return QALabel.YES
    return QALabel.MAYBE


_AGGREGATORS = {
    Task.CLAIM_VERIFICATION: aggregate_claim,
    Task.QUESTION_ANSWERING: aggregate_qa,
}


def aggregate(task: Task, audits: Sequence[ConditionAudit]) -> Label:
    return _AGGREGATORS[task](audits)


def predict(
    instance: Instance,
    audits: Optional[Sequence[ConditionAudit]],
    mode: AggregationMode = AggregationMode.FULL,
    confidence: str = "max",
    tau: float = 0.0,
) -> Prediction:
    """Turn audits into a Prediction under the given pipeline mode.

    full          -- task-appropriate aggregation plus margin confidence.
    no_decompose  -- same path, but the instance must hold exactly the
                     single whole-input condition (k = 1).
    no_audit      -- auditing bypassed: the epistemic default label with
                     confidence 0, so the prediction abstains at any
                     tau > 0.
    """
    if mode is AggregationMode.NO_AUDIT:
        decision = apply_abstention(EPISTEMIC_DEFAULT[instance.task], 0.0, tau)
        return Prediction(
            instance_id=instance.id,
            task=instance.task,
            label=decision.label,
            confidence=decision.confidence,
            abstained=decision.abstained,
            audits=(),
            tau=tau,
        )

    if mode is AggregationMode.NO_DECOMPOSE and instance.k != 1:
        raise ModeInstanceMismatch(
            f"no_decompose requires k = 1, instance {instance.id!r} has k = {instance.k}"
        )

    if audits is None:
        raise ValueError("audits are required unless mode is no_audit")

    label = aggregate(instance.task, audits)
    conf = CONFIDENCE_AGGREGATORS[confidence](audits)
    decision = apply_abstention(label, conf, tau)
    return Prediction(
        instance_id=instance.id,
        task=instance.task,
        label=decision.label,
        confidence=decision.confidence,
        abstained=decision.abstained,
        audits=tuple(audits),
        tau=tau,
    )


# --- decision-theoretic analysis -------------------------------------------


def bayes_odds_threshold(loss: LossSpec) -> float:
    """Posterior-odds cutoff above which predicting support is
    Bayes-optimal under the asymmetric loss."""
    return loss.loss_fs / loss.loss_fr


def naive_bayes_posterior_odds(
    prior_odds: float, likelihood_ratios: Sequence[float]
) -> float:
    """Accumulate posterior odds as prior times the product of per-audit
    likelihood ratios (conditional-independence reading)."""
    if not (prior_odds > 0.0 and math.isfinite(prior_odds)):
        raise NonPositiveInput(f"prior odds must be positive and finite, got {prior_odds}")
    odds = prior_odds
    for ratio in likelihood_ratios:
        if not (ratio > 0.0 and math.isfinite(ratio)):
            raise NonPositiveInput(f"likelihood ratio must be positive and finite, got {ratio}")
        odds *= ratio
    return odds


@dataclass(frozen=True)
class BayesRatios:
    """Likelihood ratios P(a | support) / P(a | refute) per audit status,
    split by condition criticality. These are interpretive configuration,
    not estimates from data."""

    critical: Mapping[AuditStatus, float]
    non_critical: Mapping[AuditStatus, float] = field(
        default_factory=lambda: {s: 1.0 for s in AuditStatus}
    )

    def ratio_for(self, audit: ConditionAudit) -> float:
        table = self.critical if audit.condition.critical else self.non_critical
        return table[audit.status]


@dataclass(frozen=True)
class BayesConsistencyReport:
    rule_label: ClaimLabel
    posterior_odds: float
    odds_threshold: float
    bayes_supports: bool
    agree: bool
    conservative_disagreement: bool
    anti_conservative: bool


def bayes_consistency_report(
    prior_odds: float,
    ratios: BayesRatios,
    loss: LossSpec,
    audits: Sequence[ConditionAudit],
) -> BayesConsistencyReport:
    """Compare the rule-based label against the Bayes decision.

    The rule is meant to err only in the conservative direction: it may
    abstain or refute where Bayes would support, but must never support
    where Bayes would not. ``anti_conservative`` flags the latter.
    """
    rule_label = aggregate_claim(audits)
    odds = naive_bayes_posterior_odds(prior_odds, [ratios.ratio_for(a) for a in audits])
    threshold = bayes_odds_threshold(loss)
    bayes_supports = odds > threshold
    rule_supports = rule_label is ClaimLabel.SUPPORTS
    return BayesConsistencyReport(
        rule_label=rule_label,
        posterior_odds=odds,
        odds_threshold=threshold,
        bayes_supports=bayes_supports,
        agree=(rule_supports == bayes_supports),
        conservative_disagreement=(bayes_supports and not rule_supports),
        anti_conservative=(rule_supports and not bayes_supports),
    )
