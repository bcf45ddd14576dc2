"""Risk-coverage evaluation: operating points, curves, AURC, and the
theory-check suite (rank-calibration, monotonicity, concentration).

The empirical risk-coverage curve is a step function that changes only at
observed confidence values, so sweeping the distinct confidences plus 0 is
a lossless threshold grid. Floating-point sums use a fixed left-to-right
reduction so results are bitwise stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import EmptyCurve, EmptyRecords, OutOfRange
from .model import RCCurve, RCPoint


@dataclass(frozen=True)
class EvalRecord:
    """One evaluated instance: its confidence and whether the non-abstained
    label matches gold (0-1 loss)."""

    instance_id: str
    confidence: float
    correct: bool
    gold_label: str
    predicted_label: str


def risk_coverage_at(records: Sequence[EvalRecord], tau: float) -> RCPoint:
    """Empirical selective risk and coverage at a single threshold.

    Risk is the error rate among records with confidence >= tau; it is
    undefined (None) when nothing is selected.
    """
    if not records:
        raise EmptyRecords("cannot evaluate an empty record set")
    selected = [r for r in records if r.confidence >= tau]
    n_selected = len(selected)
    coverage = n_selected / len(records)
    if n_selected == 0:
        return RCPoint(tau=tau, coverage=0.0, risk=None, n_selected=0)
    errors = sum(1 for r in selected if not r.correct)
    return RCPoint(tau=tau, coverage=coverage, risk=errors / n_selected, n_selected=n_selected)


def sweep(records: Sequence[EvalRecord]) -> RCCurve:
    """Evaluate every distinct confidence value plus 0 as a threshold.

    Risk-undefined points are dropped; the result is sorted by coverage
    ascending with ties broken by tau descending.
    """
    if not records:
        raise EmptyRecords("cannot sweep an empty record set")
    taus = sorted({r.confidence for r in records} | {0.0})
    points = [risk_coverage_at(records, tau) for tau in taus]
    defined = [p for p in points if p.risk is not None]
    defined.sort(key=lambda p: (p.coverage, -p.tau))
    return RCCurve(points=tuple(defined))


def aurc(curve: RCCurve) -> float:
    """Trapezoidal area under the risk-coverage curve.

    The curve is extended to coverage 0 at constant risk equal to the
    lowest-coverage point's risk, matching the generalized-inverse
    convention; if the curve stops short of coverage 1 it is likewise
    extended right at the highest-coverage point's risk.
    """
    if not curve.points:
        raise EmptyCurve("AURC of an empty curve")
    pts = curve.points
    area = pts[0].coverage * pts[0].risk
    for left, right in zip(pts, pts[1:]):
        area += (right.coverage - left.coverage) * (left.risk + right.risk) / 2.0
    if pts[-1].coverage < 1.0:
        area += (1.0 - pts[-1].coverage) * pts[-1].risk
    return area


def risk_at_coverage(curve: RCCurve, phi: float) -> float:
    """Risk at a target coverage, linearly interpolated between the
    adjacent operating points; constant extension beyond the achievable
    coverage range."""
    if not curve.points:
        raise EmptyCurve("risk_at_coverage of an empty curve")
    if not 0.0 < phi <= 1.0:
        raise OutOfRange(f"coverage level {phi} outside (0, 1]")
    pts = curve.points
    if phi <= pts[0].coverage:
        return pts[0].risk
    if phi >= pts[-1].coverage:
        return pts[-1].risk
    for left, right in zip(pts, pts[1:]):
        if left.coverage <= phi <= right.coverage:
            if right.coverage == left.coverage:
                continue
            frac = (phi - left.coverage) / (right.coverage - left.coverage)
            return left.risk + frac * (right.risk - left.risk)
    # phi < max coverage, so some segment must bracket it.
    raise AssertionError("unreachable: no bracketing segment found")


def default_slack(n_selected: int) -> float:
    """Hoeffding-derived tolerance for empirical-risk comparisons: the
    95% two-sided deviation bound sqrt(ln(2/0.05) / (2n))."""
    if n_selected < 1:
        raise OutOfRange(f"n_selected must be >= 1, got {n_selected}")
    return math.sqrt(math.log(2.0 / 0.05) / (2.0 * n_selected))


@dataclass(frozen=True)
class BandReport:
    lo: float
    hi: float
    n: int
    risk: Optional[float]  # None when the band is empty
    tail_n: int
    tail_risk: Optional[float]  # risk of {conf >= hi}; None when that set is empty


@dataclass(frozen=True)
class RankCalibrationViolation:
    band: BandReport
    excess: float  # how far tail_risk exceeds band risk beyond the slack


@dataclass(frozen=True)
class RankCalibrationReport:
    bands: tuple[BandReport, ...]
    violations: tuple[RankCalibrationViolation, ...]
    slack: Optional[float]


def rank_calibration_report(
    records: Sequence[EvalRecord],
    band_edges: Sequence[float],
    slack: Optional[float] = None,
) -> RankCalibrationReport:
    """Per-band conditional risks plus rank-calibration violations.

    Bands are [e_i, e_i+1), except the last which includes its upper
    edge so confidence 1.0 is not orphaned. A band violates
    rank-calibration when its risk is lower than the risk of everything
    at or above its upper edge by more than the slack: a lower-confidence
    stratum should never be safer than the higher-confidence tail.
    Empty bands are reported but cannot violate. When ``slack`` is None,
    each comparison uses the Hoeffding default for the smaller of the two
    sample counts involved.
    """
    if not records:
        raise EmptyRecords("cannot band an empty record set")
    edges = list(band_edges)
    if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise OutOfRange(f"band edges must be strictly increasing, got {edges}")
    if edges[0] < 0.0 or edges[-1] > 1.0:
        raise OutOfRange(f"band edges must lie within [0, 1], got {edges}")

    bands = []
    violations = []
    for i, (lo, hi) in enumerate(zip(edges, edges[1:])):
        last = i == len(edges) - 2
        if last:
            in_band = [r for r in records if lo <= r.confidence <= hi]
        else:
            in_band = [r for r in records if lo <= r.confidence < hi]
        tail = [r for r in records if r.confidence >= hi]
        band_risk = (
            sum(1 for r in in_band if not r.correct) / len(in_band) if in_band else None
        )
        tail_risk = sum(1 for r in tail if not r.correct) / len(tail) if tail else None
        report = BandReport(
            lo=lo, hi=hi, n=len(in_band), risk=band_risk,
            tail_n=len(tail), tail_risk=tail_risk,
        )
        bands.append(report)
        if band_risk is None or tail_risk is None:
            continue
        delta = slack if slack is not None else default_slack(min(len(in_band), len(tail)))
        if band_risk < tail_risk - delta:
            violations.append(
                RankCalibrationViolation(band=report, excess=tail_risk - delta - band_risk)
            )
    return RankCalibrationReport(
        bands=tuple(bands), violations=tuple(violations), slack=slack
    )


@dataclass(frozen=True)
class MonotonicityViolation:
    lower: RCPoint
    higher: RCPoint
    excess: float


def monotonicity_check(
    curve: RCCurve, slack: Optional[float] = None
) -> list[MonotonicityViolation]:
    """Adjacent-pair check that risk does not drop as coverage shrinks.

    Under rank-calibration, tightening the threshold cannot increase risk,
    so risk along the curve should be non-decreasing in coverage. Flags
    every adjacent pair where the lower-coverage risk exceeds the
    higher-coverage risk by more than the slack. With ``slack`` None the
    tolerance is the sum of the two points' Hoeffding bounds.
    """
    violations = []
    for lower, higher in zip(curve.points, curve.points[1:]):
        if lower.risk is None or higher.risk is None:
            continue
        delta = (
            slack
            if slack is not None
            else default_slack(lower.n_selected) + default_slack(higher.n_selected)
        )
        if lower.risk > higher.risk + delta:
            violations.append(
                MonotonicityViolation(
                    lower=lower, higher=higher, excess=lower.risk - higher.risk - delta
                )
            )
    return violations


def total_expectation_residual(
    records: Sequence[EvalRecord], tau1: float, tau2: float
) -> float:
    """Residual of the law-of-total-expectation decomposition used in the
    monotonicity proof:

        R(tau1) * phi(tau1) - R(tau2) * phi(tau2) - R_mid * (phi(tau1) - phi(tau2))

    where R_mid is the risk of the band tau1 <= conf < tau2. Terms whose
    selected set is empty contribute zero. Exactly zero up to floating
    rounding for every record set and tau1 < tau2.
    """
    if tau1 >= tau2:
        raise OutOfRange(f"requires tau1 < tau2, got {tau1} >= {tau2}")
    low = risk_coverage_at(records, tau1)
    high = risk_coverage_at(records, tau2)
    mid = [r for r in records if tau1 <= r.confidence < tau2]
    lhs = low.risk * low.coverage if low.risk is not None else 0.0
    rhs = high.risk * high.coverage if high.risk is not None else 0.0
    if mid:
        mid_risk = sum(1 for r in mid if not r.correct) / len(mid)
        rhs += mid_risk * (low.coverage - high.coverage)
    return lhs - rhs


def concentration_bound(n_selected: int, epsilon: float) -> float:
    """Hoeffding bound 2*exp(-2*n*eps^2) on the probability that empirical
    selective risk deviates from its population value by more than eps."""
    if n_selected < 1:
        raise OutOfRange(f"n_selected must be >= 1, got {n_selected}")
    if not epsilon > 0.0:
        raise OutOfRange(f"epsilon must be positive, got {epsilon}")
    return 2.0 * math.exp(-2.0 * n_selected * epsilon * epsilon)


@dataclass(frozen=True)
class ConcentrationResult:
    trials: int
    violations: int
    violation_frequency: float
    epsilon: float
    tau: float
    n_nominal: int
    bound: float
    mc_slack: float

    @property
    def passed(self) -> bool:
        return self.violation_frequency <= self.bound + self.mc_slack


def concentration_experiment(
    config, tau: float, epsilon: float, trials: int
) -> ConcentrationResult:
    """Monte Carlo check of the concentration bound.

    Samples ``trials`` datasets from the synthetic oracle, measures how
    often empirical selective risk at ``tau`` deviates from the analytic
    population risk by more than ``epsilon``, and compares that frequency
    against the Hoeffding bound at the nominal selected count (plus a
    3-sigma Monte Carlo allowance).
    """
    from .synth import population_coverage_at, population_risk_at, records_for_trial

    if trials < 1:
        raise OutOfRange(f"trials must be >= 1, got {trials}")
    true_risk = population_risk_at(config, tau)
    n_nominal = round(config.n_instances * population_coverage_at(config, tau))
    violations = 0
    for trial in range(trials):
        records = records_for_trial(config, trial)
        point = risk_coverage_at(records, tau)
        if point.risk is None or abs(point.risk - true_risk) > epsilon:
            violations += 1
    frequency = violations / trials
    bound = concentration_bound(max(n_nominal, 1), epsilon)
    # the bound exceeds 1 (vacuous) for tiny n*eps^2; clamp for the slack
    p = min(bound, 1.0)
    mc_slack = 3.0 * math.sqrt(p * (1.0 - p) / trials)
    return ConcentrationResult(
        trials=trials,
        violations=violations,
        violation_frequency=frequency,
        epsilon=epsilon,
        tau=tau,
        n_nominal=n_nominal,
        bound=bound,
        mc_slack=mc_slack,
    )


# --- unconditional metrics ---------------------------------------------------


def accuracy(records: Sequence[EvalRecord]) -> float:
    if not records:
        raise EmptyRecords("accuracy of an empty record set")
    return sum(1 for r in records if r.correct) / len(records)


def macro_f1(records: Sequence[EvalRecord], labels: Sequence[str]) -> float:
    """Unweighted mean of per-class F1 over the task's label set; classes
    with no predictions and no gold occurrences score 0."""
    if not records:
        raise EmptyRecords("macro-F1 of an empty record set")
    scores = []
    for label in labels:
        tp = sum(1 for r in records if r.predicted_label == label and r.gold_label == label)
        fp = sum(1 for r in records if r.predicted_label == label and r.gold_label != label)
        fn = sum(1 for r in records if r.predicted_label != label and r.gold_label == label)
        denom = 2 * tp + fp + fn
        scores.append(2 * tp / denom if denom else 0.0)
    return sum(scores) / len(scores)


def summarize(records: Sequence[EvalRecord], labels: Sequence[str]) -> dict:
    """The scalar metric set reported for a run: unconditional accuracy and
    macro-F1 plus the selective metrics AURC, Risk@0.8, and Risk@0.9."""
    curve = sweep(records)
    return {
        "n_records": len(records),
        "accuracy": accuracy(records),
        "macro_f1": macro_f1(records, labels),
        "aurc": aurc(curve),
        "risk_at_0.8": risk_at_coverage(curve, 0.8),
        "risk_at_0.9": risk_at_coverage(curve, 0.9),
    }
