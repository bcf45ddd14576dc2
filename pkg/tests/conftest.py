"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import pytest

from claimgate.audit import AuditThresholds
from claimgate.model import (
    AuditStatus,
    Condition,
    ConditionAudit,
    EvidenceScores,
    Instance,
    Task,
)

# Score pairs realizing each status under the default 0.7 thresholds.
STATUS_SCORES = {
    AuditStatus.SUP: (0.9, 0.05),
    AuditStatus.CON: (0.05, 0.9),
    AuditStatus.MIS: (0.3, 0.2),
}


def make_audit(
    index: int,
    status: AuditStatus,
    critical: bool = True,
    s_ent: float | None = None,
    s_con: float | None = None,
) -> ConditionAudit:
    if s_ent is None or s_con is None:
        s_ent, s_con = STATUS_SCORES[status]
    return ConditionAudit(
        condition=Condition(index=index, text=f"condition {index}", critical=critical),
        scores=EvidenceScores(s_ent=s_ent, s_con=s_con),
        status=status,
        margin=s_ent - s_con,
    )


def make_margin_audit(index: int, margin: float, critical: bool = True) -> ConditionAudit:
    """An audit with a specific margin; scores chosen to match."""
    if margin >= 0:
        s_ent, s_con = margin, 0.0
    else:
        s_ent, s_con = 0.0, -margin
    return ConditionAudit(
        condition=Condition(index=index, text=f"condition {index}", critical=critical),
        scores=EvidenceScores(s_ent=s_ent, s_con=s_con),
        status=AuditStatus.MIS,
        margin=s_ent - s_con,
    )


@pytest.fixture
def thresholds() -> AuditThresholds:
    return AuditThresholds(theta_ent=0.7, theta_con=0.7)


@pytest.fixture
def claim_instance() -> Instance:
    return Instance(
        id="inst-1",
        task=Task.CLAIM_VERIFICATION,
        text="Drug X reduces mortality in adults.",
        evidence=(
            "Trial A found drug X reduced mortality by 20%.",
            "Trial B found no effect of drug X on mortality.",
        ),
        conditions=(
            Condition(index=1, text="Drug X was tested in adults.", critical=True),
            Condition(index=2, text="Drug X reduced mortality.", critical=True),
            Condition(index=3, text="The trials were randomized.", critical=False),
        ),
    )


class RecordingBackend:
    """Stub backend that records invocation order and serves triples from
    a (condition_index, evidence_index) table."""

    def __init__(self, table=None, default=(0.1, 0.1, 0.8)):
        self.table = table or {}
        self.default = default
        self.calls: list[tuple[int, int]] = []

    def score_pair(self, instance_id, condition, evidence_index, evidence_text):
        self.calls.append((condition.index, evidence_index))
        return self.table.get((condition.index, evidence_index), self.default)
