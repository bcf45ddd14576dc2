"""Risk-coverage evaluation against brute-force oracles."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from claimgate.errors import EmptyCurve, EmptyRecords, OutOfRange
from claimgate.model import RCCurve, RCPoint
from claimgate.riskcov import (
    EvalRecord,
    accuracy,
    aurc,
    concentration_bound,
    macro_f1,
    monotonicity_check,
    rank_calibration_report,
    risk_at_coverage,
    risk_coverage_at,
    sweep,
    total_expectation_residual,
)
from claimgate.synth import OracleConfig, Regime, generate_records


def records_from(confidences, corrects):
    return [
        EvalRecord(
            instance_id=f"r{i}",
            confidence=c,
            correct=ok,
            gold_label="pos",
            predicted_label="pos" if ok else "neg",
        )
        for i, (c, ok) in enumerate(zip(confidences, corrects))
    ]


FOUR = records_from([0.9, 0.7, 0.5, 0.3], [True, True, False, True])


# --- brute-force oracles -------------------------------------------------------

def brute_point(records, tau):
    selected = [r for r in records if r.confidence >= tau]
    if not selected:
        return None
    coverage = len(selected) / len(records)
    risk = sum(1 for r in selected if not r.correct) / len(selected)
    return (coverage, risk)


def brute_operating_points(records):
    """Distinct operating points from a dense threshold enumeration:
    observed confidences, midpoints between them, zero, and a fine grid."""
    confs = sorted({r.confidence for r in records})
    taus = set(confs) | {0.0}
    taus |= {(a + b) / 2 for a, b in zip(confs, confs[1:])}
    taus |= {i / 499 for i in range(500)}
    points = {}
    for tau in sorted(taus):
        point = brute_point(records, tau)
        if point is not None:
            points[point[0]] = point[1]
    return sorted(points.items())  # [(coverage, risk)] ascending


def brute_aurc(records):
    pts = brute_operating_points(records)
    area = pts[0][0] * pts[0][1]
    for (c1, r1), (c2, r2) in zip(pts, pts[1:]):
        area += (c2 - c1) * (r1 + r2) / 2.0
    return area


def brute_risk_at(records, phi):
    pts = brute_operating_points(records)
    if phi <= pts[0][0]:
        return pts[0][1]
    if phi >= pts[-1][0]:
        return pts[-1][1]
    for (c1, r1), (c2, r2) in zip(pts, pts[1:]):
        if c1 <= phi <= c2:
            return r1 + (phi - c1) / (c2 - c1) * (r2 - r1)
    raise AssertionError("unreachable")


# --- risk_coverage_at ----------------------------------------------------------

def test_point_at_midrange_threshold():
    point = risk_coverage_at(FOUR, 0.6)
    assert point.coverage == 0.5
    assert point.risk == 0.0
    assert point.n_selected == 2


def test_point_at_zero_reproduces_error_rate():
    point = risk_coverage_at(FOUR, 0.0)
    assert point.coverage == 1.0
    assert point.risk == 0.25
    assert point.risk == pytest.approx(1.0 - accuracy(FOUR))


def test_point_above_all_confidences_is_undefined():
    point = risk_coverage_at(FOUR, 1.0)
    assert point.coverage == 0.0
    assert point.risk is None
    assert point.n_selected == 0


def test_empty_records_rejected():
    with pytest.raises(EmptyRecords):
        risk_coverage_at([], 0.5)
    with pytest.raises(EmptyRecords):
        sweep([])


# --- sweep ----------------------------------------------------------------------

def test_sweep_grid_is_distinct_confidences_plus_zero():
    curve = sweep(FOUR)
    assert len(curve) == 5
    assert sorted({p.tau for p in curve.points}) == [0.0, 0.3, 0.5, 0.7, 0.9]


def test_sweep_sorted_by_coverage_then_tau_descending():
    curve = sweep(FOUR)
    coverages = [p.coverage for p in curve.points]
    assert coverages == sorted(coverages)
    for left, right in zip(curve.points, curve.points[1:]):
        if left.coverage == right.coverage:
            assert left.tau > right.tau


def test_sweep_single_confidence_level():
    curve = sweep(records_from([0.5, 0.5, 0.5], [True, False, True]))
    assert {p.coverage for p in curve.points} == {1.0}


def test_sweep_single_record():
    curve = sweep(records_from([0.4], [True]))
    assert len(curve) >= 1
    assert curve.points[-1].coverage == 1.0
    assert curve.points[-1].risk == 0.0


records_st = st.lists(
    st.tuples(
        st.floats(0, 1, allow_nan=False),
        st.booleans(),
    ),
    min_size=1,
    max_size=60,
).map(lambda pairs: records_from([p[0] for p in pairs], [p[1] for p in pairs]))


@given(records_st)
def test_coverage_non_increasing_in_tau(records):
    curve = sweep(records)
    by_tau = sorted(curve.points, key=lambda p: p.tau)
    for left, right in zip(by_tau, by_tau[1:]):
        assert right.coverage <= left.coverage + 1e-15


@given(records_st)
def test_sweep_matches_brute_force_operating_points(records):
    expected = brute_operating_points(records)
    got = sorted({(p.coverage, p.risk) for p in sweep(records).points})
    assert got == pytest.approx(expected)


# --- AURC -------------------------------------------------------------------------

def test_aurc_hand_trapezoid():
    curve = RCCurve(points=(
        RCPoint(tau=0.8, coverage=0.5, risk=0.0, n_selected=1),
        RCPoint(tau=0.0, coverage=1.0, risk=0.5, n_selected=2),
    ))
    assert aurc(curve) == pytest.approx(0.125)


def test_aurc_constant_risk():
    curve = RCCurve(points=(
        RCPoint(tau=0.9, coverage=0.25, risk=0.3, n_selected=1),
        RCPoint(tau=0.5, coverage=0.5, risk=0.3, n_selected=2),
        RCPoint(tau=0.0, coverage=1.0, risk=0.3, n_selected=4),
    ))
    assert aurc(curve) == pytest.approx(0.3)


def test_aurc_single_point_constant_extension():
    curve = RCCurve(points=(RCPoint(tau=0.0, coverage=1.0, risk=0.25, n_selected=4),))
    assert aurc(curve) == pytest.approx(0.25)


def test_aurc_empty_curve_rejected():
    with pytest.raises(EmptyCurve):
        aurc(RCCurve(points=()))


@given(records_st)
@settings(max_examples=200)
def test_aurc_matches_brute_force(records):
    assert aurc(sweep(records)) == pytest.approx(brute_aurc(records), abs=1e-9)


# --- Risk@phi ----------------------------------------------------------------------

def test_risk_at_coverage_interpolates():
    curve = RCCurve(points=(
        RCPoint(tau=0.8, coverage=0.5, risk=0.0, n_selected=1),
        RCPoint(tau=0.0, coverage=1.0, risk=0.5, n_selected=2),
    ))
    assert risk_at_coverage(curve, 0.8) == pytest.approx(0.3)


def test_risk_at_exact_point():
    curve = sweep(FOUR)
    for point in curve.points:
        assert risk_at_coverage(curve, point.coverage) == pytest.approx(point.risk)


def test_risk_at_coverage_constant_extension():
    single = RCCurve(points=(RCPoint(tau=0.0, coverage=1.0, risk=0.25, n_selected=4),))
    assert risk_at_coverage(single, 0.9) == 0.25


def test_risk_at_coverage_range_checked():
    curve = sweep(FOUR)
    with pytest.raises(OutOfRange):
        risk_at_coverage(curve, 0.0)
    with pytest.raises(OutOfRange):
        risk_at_coverage(curve, 1.1)


@given(records_st, st.floats(0.01, 1.0, allow_nan=False))
def test_risk_at_coverage_matches_brute_force(records, phi):
    got = risk_at_coverage(sweep(records), phi)
    assert got == pytest.approx(brute_risk_at(records, phi), abs=1e-9)


# --- total expectation identity ------------------------------------------------------

@given(records_st)
@settings(max_examples=150)
def test_total_expectation_identity_on_sweeps(records):
    taus = sorted({p.tau for p in sweep(records).points})
    for tau1, tau2 in itertools.combinations(taus, 2):
        assert abs(total_expectation_residual(records, tau1, tau2)) <= 1e-12


def test_total_expectation_requires_ordered_taus():
    with pytest.raises(OutOfRange):
        total_expectation_residual(FOUR, 0.5, 0.5)


# --- rank calibration ------------------------------------------------------------------

def test_rank_calibrated_records_have_zero_violations_at_zero_slack():
    config = OracleConfig(n_instances=10_000, regime=Regime.RANK_CALIBRATED, seed=11)
    records, _ = generate_records(config)
    edges = [0.0, 0.25, 0.5, 0.75, 1.0]
    report = rank_calibration_report(records, edges, slack=0.0)
    assert report.violations == ()


def test_anti_calibrated_records_flag_every_comparable_band():
    config = OracleConfig(n_instances=10_000, regime=Regime.ANTI_CALIBRATED, seed=11)
    records, _ = generate_records(config)
    edges = [0.0, 0.25, 0.5, 0.75, 1.0]
    report = rank_calibration_report(records, edges, slack=0.0)
    # the top band has an empty tail above it and cannot violate
    comparable = [b for b in report.bands if b.n > 0 and b.tail_n > 0]
    assert len(report.violations) == len(comparable) == 3


def test_single_band_cannot_violate():
    report = rank_calibration_report(FOUR, [0.0, 1.0], slack=0.0)
    assert report.violations == ()
    assert len(report.bands) == 1


def test_empty_bands_reported_not_fatal():
    records = records_from([0.9, 0.95], [True, True])
    report = rank_calibration_report(records, [0.0, 0.5, 1.0])
    assert report.bands[0].n == 0
    assert report.bands[0].risk is None


def test_band_edges_validated():
    with pytest.raises(OutOfRange):
        rank_calibration_report(FOUR, [0.5, 0.5])
    with pytest.raises(OutOfRange):
        rank_calibration_report(FOUR, [0.0, 1.2])


# --- monotonicity ------------------------------------------------------------------------

def test_monotonicity_hand_built_violation():
    curve = RCCurve(points=(
        RCPoint(tau=0.8, coverage=0.5, risk=0.6, n_selected=2),
        RCPoint(tau=0.0, coverage=1.0, risk=0.5, n_selected=4),
    ))
    violations = monotonicity_check(curve, slack=0.0)
    assert len(violations) == 1
    assert violations[0].excess == pytest.approx(0.1)


def test_monotonicity_constant_risk_curve_clean():
    curve = RCCurve(points=(
        RCPoint(tau=0.5, coverage=0.5, risk=0.3, n_selected=2),
        RCPoint(tau=0.0, coverage=1.0, risk=0.3, n_selected=4),
    ))
    assert monotonicity_check(curve, slack=0.0) == []


def test_monotonicity_on_calibrated_data_with_flat_slack():
    config = OracleConfig(n_instances=10_000, regime=Regime.RANK_CALIBRATED, seed=23)
    records, _ = generate_records(config)
    assert monotonicity_check(sweep(records), slack=0.02) == []


# --- concentration ------------------------------------------------------------------------

def test_concentration_bound_values():
    expected = 2.0 * math.exp(-2.0)
    assert concentration_bound(100, 0.1) == pytest.approx(expected)
    assert concentration_bound(1, 1.0) == pytest.approx(expected)
    assert concentration_bound(10_000, 0.05) == pytest.approx(2.0 * math.exp(-50.0))


def test_concentration_bound_validates():
    with pytest.raises(OutOfRange):
        concentration_bound(0, 0.1)
    with pytest.raises(OutOfRange):
        concentration_bound(10, 0.0)


def test_vacuous_bound_always_passes():
    from claimgate.riskcov import concentration_experiment

    config = OracleConfig(n_instances=50, seed=1)
    result = concentration_experiment(config, tau=0.5, epsilon=0.001, trials=5)
    assert result.bound >= 1.0
    assert result.passed


def test_single_trial_gives_indicator():
    from claimgate.riskcov import concentration_experiment

    config = OracleConfig(n_instances=200, seed=2)
    result = concentration_experiment(config, tau=0.5, epsilon=0.1, trials=1)
    assert result.violation_frequency in (0.0, 1.0)


# --- metrics ----------------------------------------------------------------------------------

def test_macro_f1_perfect_predictions():
    records = records_from([0.5, 0.6], [True, True])
    assert macro_f1(records, ["pos", "neg"]) == pytest.approx(0.5)  # neg never occurs


def test_macro_f1_balanced_three_class():
    records = [
        EvalRecord("a", 0.5, True, "x", "x"),
        EvalRecord("b", 0.5, True, "y", "y"),
        EvalRecord("c", 0.5, False, "z", "x"),
    ]
    # per-class F1: x: tp=1 fp=1 fn=0 -> 2/3; y: 1; z: tp=0 fn=1 -> 0
    assert macro_f1(records, ["x", "y", "z"]) == pytest.approx((2 / 3 + 1.0 + 0.0) / 3)
