"""Condition-level evidence auditing.

For each (condition, evidence sentence) pair a scorer backend supplies a
probability triple (entail, contradict, neutral). The best entailment and
best contradiction scores are taken independently over the evidence set,
then discretized into an audit status under fixed thresholds, with
contradiction taking priority when both thresholds are met. Neutral mass
is treated as absence of evidence and never consulted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

from .errors import MalformedProbability, ScorerError
from .model import AuditStatus, Condition, ConditionAudit, EvidenceScores, Instance

# A backend triple may deviate from summing to 1 by at most this much
# before it is rejected as corrupt.
TRIPLE_SUM_TOLERANCE = 1e-3

DEFAULT_THETA_ENT = 0.7
DEFAULT_THETA_CON = 0.7


@dataclass(frozen=True)
class AuditThresholds:
    """Entailment/contradiction cutoffs, fixed for an entire run."""

    theta_ent: float = DEFAULT_THETA_ENT
    theta_con: float = DEFAULT_THETA_CON

    def __post_init__(self):
        if not (0.0 < self.theta_ent < 1.0 and 0.0 < self.theta_con < 1.0):
            raise ValueError(
                f"thresholds must lie strictly in (0, 1), got "
                f"({self.theta_ent}, {self.theta_con})"
            )


class ScorerBackend(Protocol):
    """Anything that can score a single (condition, evidence) pair.

    ``instance_id`` identifies the pair for backends keyed by record ids
    (the precomputed-file backend); content-based backends ignore it.
    """

    def score_pair(
        self,
        instance_id: Optional[str],
        condition: Condition,
        evidence_index: int,
        evidence_text: str,
    ) -> tuple[float, float, float]:
        ...


@dataclass(frozen=True)
class ConstantStubBackend:
    """Returns one fixed triple for every pair. Test/diagnostic backend."""

    p_entail: float = 0.0
    p_contradict: float = 0.0
    p_neutral: float = 1.0

    def score_pair(self, instance_id, condition, evidence_index, evidence_text):
        return (self.p_entail, self.p_contradict, self.p_neutral)


def check_triple(triple, context: str = "") -> tuple[float, float, float]:
    """Validate a probability triple from a backend.

    Raises MalformedProbability when the triple is missing a component,
    has a component outside [0, 1], or sums to something further than
    TRIPLE_SUM_TOLERANCE from 1. Triples within tolerance are passed
    through unchanged, never renormalized.
    """
    try:
        p_ent, p_con, p_neu = (float(x) for x in triple)
    except (TypeError, ValueError) as exc:
        raise MalformedProbability(f"{context}: triple absent or malformed: {triple!r}") from exc
    for name, p in (("entail", p_ent), ("contradict", p_con), ("neutral", p_neu)):
        if not (0.0 <= p <= 1.0):
            raise MalformedProbability(f"{context}: {name} probability {p} outside [0, 1]")
    total = p_ent + p_con + p_neu
    if abs(total - 1.0) > TRIPLE_SUM_TOLERANCE:
        raise MalformedProbability(f"{context}: triple sums to {total}, expected 1")
    return (p_ent, p_con, p_neu)


def score_condition(
    condition: Condition,
    evidence: Sequence[str],
    backend: ScorerBackend,
    instance_id: Optional[str] = None,
) -> EvidenceScores:
    """Best entailment and contradiction scores over the evidence set.

    The maxima are independent, so the two argmax positions may differ.
    Ties keep the first occurrence, which makes results deterministic.
    An empty evidence set yields (0, 0) with no argmax: absence of
    evidence must not read as support.
    """
    if not evidence:
        return EvidenceScores(s_ent=0.0, s_con=0.0)

    s_ent, s_con = -1.0, -1.0
    ent_argmax, con_argmax = 0, 0
    for j, sentence in enumerate(evidence):
        triple = backend.score_pair(instance_id, condition, j, sentence)
        p_ent, p_con, _ = check_triple(
            triple, context=f"condition {condition.index}, evidence {j}"
        )
        if p_ent > s_ent:
            s_ent, ent_argmax = p_ent, j
        if p_con > s_con:
            s_con, con_argmax = p_con, j

    return EvidenceScores(s_ent=s_ent, s_con=s_con, ent_argmax=ent_argmax, con_argmax=con_argmax)


def assign_status(scores: EvidenceScores, thresholds: AuditThresholds) -> AuditStatus:
    """Discretize evidence scores; contradiction outranks support."""
    if scores.s_con >= thresholds.theta_con:
        return AuditStatus.CON
    if scores.s_ent >= thresholds.theta_ent:
        return AuditStatus.SUP
    return AuditStatus.MIS


def audit_instance(
    instance: Instance,
    backend: ScorerBackend,
    thresholds: AuditThresholds,
) -> list[ConditionAudit]:
    """Audit every condition of an instance, in condition order.

    Invokes the backend exactly k*n times, condition-major and
    evidence-minor. Scorer failures are re-raised annotated with the
    condition index they occurred on.
    """
    audits = []
    for condition in instance.conditions:
        try:
            scores = score_condition(condition, instance.evidence, backend, instance.id)
        except ScorerError as exc:
            raise type(exc)(
                f"instance {instance.id!r}, condition {condition.index}: {exc}"
            ) from exc
        audits.append(
            ConditionAudit(
                condition=condition,
                scores=scores,
                status=assign_status(scores, thresholds),
                margin=scores.s_ent - scores.s_con,
            )
        )
    return audits
