"""Instance-level confidence from condition margins, and the abstention rule.

Only critical conditions contribute. The default aggregator takes the
maximum absolute margin (decisive-evidence reading); min (weakest link)
and mean (smoothing) are selectable alternatives. Note that a margin near
zero conflates two distinct situations -- no evidence at all and strong
conflicting evidence -- both of which are treated as low confidence here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NoCriticalCondition, OutOfRange
from .model import ConditionAudit, Label


def _critical_abs_margins(audits: Sequence[ConditionAudit]) -> list[float]:
    margins = [abs(a.margin) for a in audits if a.condition.critical]
    if not margins:
        raise NoCriticalCondition("confidence requires at least one critical condition")
    return margins


def confidence_max(audits: Sequence[ConditionAudit]) -> float:
    """Largest absolute margin over critical conditions (the default)."""
    return max(_critical_abs_margins(audits))


def confidence_min(audits: Sequence[ConditionAudit]) -> float:
    """Smallest absolute margin over critical conditions (weakest link)."""
    return min(_critical_abs_margins(audits))


def confidence_mean(audits: Sequence[ConditionAudit]) -> float:
    """Arithmetic mean of absolute margins over critical conditions."""
    margins = _critical_abs_margins(audits)
    return sum(margins) / len(margins)


CONFIDENCE_AGGREGATORS = {
    "max": confidence_max,
    "min": confidence_min,
    "mean": confidence_mean,
}


@dataclass(frozen=True)
class Decision:
    """Outcome of the abstention rule. The would-be label is retained even
    when abstaining, so threshold sweeps can be replayed post hoc from a
    single inference pass."""

    label: Label
    confidence: float
    abstained: bool


def apply_abstention(label: Label, conf: float, tau: float) -> Decision:
    """Answer iff conf >= tau (boundary answers); otherwise abstain."""
    if not 0.0 <= conf <= 1.0:
        raise OutOfRange(f"confidence {conf} outside [0, 1]")
    if not 0.0 <= tau <= 1.0:
        raise OutOfRange(f"threshold {tau} outside [0, 1]")
    return Decision(label=label, confidence=conf, abstained=conf < tau)
