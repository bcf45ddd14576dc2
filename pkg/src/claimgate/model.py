"""Shared domain types for the verification pipeline.

Everything downstream operates on the types defined here: an input
:class:`Instance` carrying evidence sentences and decomposed conditions,
per-condition audit results (:class:`ConditionAudit`), aggregated
:class:`Prediction` objects, and the risk-coverage operating points used
during evaluation. All types are immutable value objects after
construction and safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Optional, Union

from .errors import (
    DuplicateConditionIndex,
    EmptyConditions,
    LabelTaskMismatch,
    NoCriticalCondition,
    ValidationError,
)


class Task(str, enum.Enum):
    CLAIM_VERIFICATION = "claim_verification"
    QUESTION_ANSWERING = "question_answering"


class ClaimLabel(str, enum.Enum):
    SUPPORTS = "SUPPORTS"
    REFUTES = "REFUTES"
    NEI = "NEI"


class QALabel(str, enum.Enum):
    YES = "yes"
    NO = "no"
    MAYBE = "maybe"


Label = Union[ClaimLabel, QALabel]

LABELS_BY_TASK = {
    Task.CLAIM_VERIFICATION: ClaimLabel,
    Task.QUESTION_ANSWERING: QALabel,
}

# The label a task falls back to when evidence cannot be assessed at all.
EPISTEMIC_DEFAULT = {
    Task.CLAIM_VERIFICATION: ClaimLabel.NEI,
    Task.QUESTION_ANSWERING: QALabel.MAYBE,
}


class AuditStatus(str, enum.Enum):
    SUP = "SUP"
    CON = "CON"
    MIS = "MIS"


@dataclass(frozen=True)
class Condition:
    """One atomic, testable sub-statement of the input.

    Indices are 1-based and contiguous within an instance. A critical
    condition is individually necessary for a valid conclusion.
    """

    index: int
    text: str
    critical: bool


@dataclass(frozen=True)
class Instance:
    id: str
    task: Task
    text: str
    evidence: tuple[str, ...]
    conditions: tuple[Condition, ...]
    gold_label: Optional[Label] = None

    @property
    def k(self) -> int:
        return len(self.conditions)

    @property
    def critical_conditions(self) -> tuple[Condition, ...]:
        return tuple(c for c in self.conditions if c.critical)


@dataclass(frozen=True)
class EvidenceScores:
    """Best entailment/contradiction scores for one condition.

    The two maxima are taken independently over the evidence set, so
    ``ent_argmax`` and ``con_argmax`` may point at different sentences.
    Argmax fields are 0-based positions into the instance's evidence list
    and are absent when the evidence set is empty.
    """

    s_ent: float
    s_con: float
    ent_argmax: Optional[int] = None
    con_argmax: Optional[int] = None

    def __post_init__(self):
        if not (0.0 <= self.s_ent <= 1.0 and 0.0 <= self.s_con <= 1.0):
            raise ValidationError(
                f"scores out of range: s_ent={self.s_ent}, s_con={self.s_con}"
            )


@dataclass(frozen=True)
class ConditionAudit:
    """Audit outcome for one condition: scores, status, and margin."""

    condition: Condition
    scores: EvidenceScores
    status: AuditStatus
    margin: float

    def __post_init__(self):
        expected = self.scores.s_ent - self.scores.s_con
        if not math.isclose(self.margin, expected, abs_tol=1e-12):
            raise ValidationError(
                f"margin {self.margin} inconsistent with scores "
                f"({self.scores.s_ent} - {self.scores.s_con})"
            )


@dataclass(frozen=True)
class Prediction:
    instance_id: str
    task: Task
    label: Label
    confidence: float
    abstained: bool
    audits: tuple[ConditionAudit, ...]
    tau: float = 0.0


@dataclass(frozen=True)
class LossSpec:
    """Asymmetric error costs: false support > false refutation > abstain."""

    loss_fs: float
    loss_fr: float
    loss_abstain: float = 0.0

    def __post_init__(self):
        from .errors import InvalidLoss

        if not (self.loss_fs > self.loss_fr > 0.0):
            raise InvalidLoss(
                f"requires loss_fs > loss_fr > 0, got ({self.loss_fs}, {self.loss_fr})"
            )
        if self.loss_abstain != 0.0:
            raise InvalidLoss("abstention cost is fixed at 0")


@dataclass(frozen=True)
class RCPoint:
    """One operating point of the threshold sweep.

    ``risk`` is None when no instance is selected at this threshold; such
    points are dropped from curves.
    """

    tau: float
    coverage: float
    risk: Optional[float]
    n_selected: int


@dataclass(frozen=True)
class RCCurve:
    """Operating points sorted by coverage ascending, ties by tau descending."""

    points: tuple[RCPoint, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def validate_instance(raw: dict[str, Any]) -> Instance:
    """Build a validated :class:`Instance` from a decoded record.

    Enforces: non-empty condition list, unique and contiguous 1-based
    condition indices, at least one critical condition, non-empty evidence
    sentences, and a gold label drawn from the task's own label set.
    """
    try:
        instance_id = str(raw["id"])
        task = Task(raw["task"])
        text = str(raw["text"])
        raw_evidence = raw.get("evidence", [])
        raw_conditions = raw["conditions"]
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"malformed record: {exc}") from exc

    evidence = []
    for sentence in raw_evidence:
        if not isinstance(sentence, str) or not sentence:
            raise ValidationError(f"evidence sentences must be non-empty strings, got {sentence!r}")
        evidence.append(sentence)

    if not raw_conditions:
        raise EmptyConditions(f"instance {instance_id!r} has no conditions")

    conditions = []
    for entry in raw_conditions:
        try:
            conditions.append(
                Condition(
                    index=int(entry["index"]),
                    text=str(entry["text"]),
                    critical=bool(entry["critical"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed condition in instance {instance_id!r}: {exc}") from exc

    indices = [c.index for c in conditions]
    if len(set(indices)) != len(indices):
        raise DuplicateConditionIndex(f"instance {instance_id!r}: duplicate condition indices {indices}")
    if sorted(indices) != list(range(1, len(conditions) + 1)):
        raise ValidationError(
            f"instance {instance_id!r}: condition indices must be contiguous from 1, got {indices}"
        )

    if not any(c.critical for c in conditions):
        raise NoCriticalCondition(f"instance {instance_id!r} has no critical condition")

    gold_label: Optional[Label] = None
    raw_gold = raw.get("gold_label")
    if raw_gold is not None:
        label_enum = LABELS_BY_TASK[task]
        try:
            gold_label = label_enum(raw_gold)
        except ValueError:
            raise LabelTaskMismatch(
                f"instance {instance_id!r}: label {raw_gold!r} is not valid for task {task.value}"
            ) from None

    return Instance(
        id=instance_id,
        task=task,
        text=text,
        evidence=tuple(evidence),
        conditions=tuple(sorted(conditions, key=lambda c: c.index)),
        gold_label=gold_label,
    )


def instance_to_record(instance: Instance) -> dict[str, Any]:
    """Inverse of :func:`validate_instance`; round-trips exactly."""
    return {
        "id": instance.id,
        "task": instance.task.value,
        "text": instance.text,
        "evidence": list(instance.evidence),
        "conditions": [
            {"index": c.index, "text": c.text, "critical": c.critical}
            for c in instance.conditions
        ],
        "gold_label": instance.gold_label.value if instance.gold_label is not None else None,
    }


def label_from_value(task: Task, value: str) -> Label:
    """Parse a label string in the context of a task."""
    try:
        return LABELS_BY_TASK[task](value)
    except ValueError:
        raise LabelTaskMismatch(f"label {value!r} is not valid for task {task.value}") from None
