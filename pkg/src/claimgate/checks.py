"""Empirical verification of the pipeline's formal properties.

Each check pits an implementation against behavior that is provable under
stated assumptions: monotone selective risk under rank-calibration, the
law-of-total-expectation decomposition behind it, Hoeffding concentration
of empirical risk, and conservatism of the aggregation rules relative to
the Bayes decision. Used by the ``check`` CLI subcommand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .decide import BayesRatios, bayes_consistency_report
from .model import (
    AuditStatus,
    Condition,
    ConditionAudit,
    EvidenceScores,
    LossSpec,
)
from .riskcov import (
    concentration_experiment,
    monotonicity_check,
    rank_calibration_report,
    sweep,
    total_expectation_residual,
)
from .synth import OracleConfig, Regime, generate_records


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


# Score pairs that realize each status under the default 0.7 thresholds.
_STATUS_SCORES = {
    AuditStatus.SUP: (0.9, 0.05),
    AuditStatus.CON: (0.05, 0.9),
    AuditStatus.MIS: (0.3, 0.2),
}


def audit_with_status(index: int, status: AuditStatus, critical: bool) -> ConditionAudit:
    """A synthetic audit carrying the given status; used for exhaustive
    rule enumeration where only (status, criticality) matter."""
    s_ent, s_con = _STATUS_SCORES[status]
    return ConditionAudit(
        condition=Condition(index=index, text=f"condition {index}", critical=critical),
        scores=EvidenceScores(s_ent=s_ent, s_con=s_con),
        status=status,
        margin=s_ent - s_con,
    )


def enumerate_audit_vectors(max_k: int):
    """All audit vectors over statuses x criticalities for k <= max_k with
    at least one critical condition."""
    for k in range(1, max_k + 1):
        for statuses in itertools.product(AuditStatus, repeat=k):
            for criticals in itertools.product((False, True), repeat=k):
                if not any(criticals):
                    continue
                yield [
                    audit_with_status(i + 1, statuses[i], criticals[i]) for i in range(k)
                ]


def check_rank_calibration(seed: int = 0, n: int = 10_000) -> list[CheckResult]:
    results = []
    for regime, expect_violations in (
        (Regime.RANK_CALIBRATED, False),
        (Regime.ANTI_CALIBRATED, True),
    ):
        config = OracleConfig(n_instances=n, regime=regime, seed=seed)
        records, _ = generate_records(config)
        edges = sorted({b.lo for b in config.profile} | {b.hi for b in config.profile})
        report = rank_calibration_report(records, edges)
        found = len(report.violations) > 0
        results.append(
            CheckResult(
                name=f"rank_calibration[{regime.value}]",
                passed=found == expect_violations,
                detail=f"{len(report.violations)} violation(s) across {len(report.bands)} bands",
            )
        )
    return results


def check_monotonicity(seed: int = 0, n: int = 10_000) -> list[CheckResult]:
    results = []
    for regime, expect_violations in (
        (Regime.RANK_CALIBRATED, False),
        (Regime.ANTI_CALIBRATED, True),
    ):
        config = OracleConfig(n_instances=n, regime=regime, seed=seed)
        records, _ = generate_records(config)
        violations = monotonicity_check(sweep(records))
        found = len(violations) > 0
        results.append(
            CheckResult(
                name=f"monotonicity[{regime.value}]",
                passed=found == expect_violations,
                detail=f"{len(violations)} adjacent-pair violation(s)",
            )
        )
    return results


def check_total_expectation(seed: int = 0, n: int = 2_000, tol: float = 1e-12) -> CheckResult:
    config = OracleConfig(n_instances=n, seed=seed)
    records, _ = generate_records(config)
    taus = sorted({p.tau for p in sweep(records).points})
    worst = 0.0
    for tau1, tau2 in itertools.combinations(taus, 2):
        worst = max(worst, abs(total_expectation_residual(records, tau1, tau2)))
    return CheckResult(
        name="total_expectation_identity",
        passed=worst <= tol,
        detail=f"max residual {worst:.3e} over {len(taus)} thresholds",
    )


def check_concentration(
    seed: int = 0, n: int = 1_000, tau: float = 0.5, epsilon: float = 0.1, trials: int = 200
) -> CheckResult:
    config = OracleConfig(n_instances=n, seed=seed)
    result = concentration_experiment(config, tau=tau, epsilon=epsilon, trials=trials)
    return CheckResult(
        name="concentration_bound",
        passed=result.passed,
        detail=(
            f"violation frequency {result.violation_frequency:.4f} vs bound "
            f"{result.bound:.3e} (+{result.mc_slack:.3e} MC) at n~{result.n_nominal}"
        ),
    )


def check_bayes_conservatism(max_k: int = 3) -> CheckResult:
    """The rule may abstain or refute where Bayes supports, never the
    reverse, for SUP ratios above the loss threshold and CON ratios
    below one."""
    ratios = BayesRatios(
        critical={AuditStatus.SUP: 3.0, AuditStatus.CON: 0.1, AuditStatus.MIS: 1.0}
    )
    loss = LossSpec(loss_fs=2.0, loss_fr=1.0)
    anti = 0
    total = 0
    for audits in enumerate_audit_vectors(max_k):
        report = bayes_consistency_report(1.0, ratios, loss, audits)
        total += 1
        if report.anti_conservative:
            anti += 1
    return CheckResult(
        name="bayes_conservatism",
        passed=anti == 0,
        detail=f"{anti} anti-conservative case(s) over {total} audit vectors",
    )


def run_theory_checks(seed: int = 0, n: int = 10_000, trials: int = 200) -> list[CheckResult]:
    results = []
    results.extend(check_rank_calibration(seed=seed, n=n))
    results.extend(check_monotonicity(seed=seed, n=n))
    results.append(check_total_expectation(seed=seed))
    results.append(check_concentration(seed=seed, trials=trials))
    results.append(check_bayes_conservatism())
    return results
