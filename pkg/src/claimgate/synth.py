"""Synthetic data with analytically known ground truth.

Two generators: ``generate_records`` produces evaluation records whose
population risk-coverage behavior is known exactly (the oracle for the
monotonicity, rank-calibration, and concentration checks), and
``generate_instances`` produces full instances plus a pair-score file
planted so the pipeline must reproduce the intended labels.

All randomness flows through numpy's PCG64 generator seeded from a
SeedSequence, so output is reproducible byte-for-byte for a given seed;
per-trial streams are derived with SeedSequence spawn keys. No attempt is
made to mimic real NLI score distributions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .audit import AuditThresholds
from .errors import InvalidProfile
from .model import ClaimLabel, Condition, Instance, Label, QALabel, Task
from .riskcov import EvalRecord
from .schemas import ScoreRecord


class Regime(str, enum.Enum):
    RANK_CALIBRATED = "rank_calibrated"
    ANTI_CALIBRATED = "anti_calibrated"
    UNIFORM_NOISE = "uniform_noise"


@dataclass(frozen=True)
class ProfileBand:
    """Error probability for confidences falling in [lo, hi)."""

    lo: float
    hi: float
    error_rate: float


DEFAULT_PROFILES = {
    Regime.RANK_CALIBRATED: (
        ProfileBand(0.00, 0.25, 0.45),
        ProfileBand(0.25, 0.50, 0.30),
        ProfileBand(0.50, 0.75, 0.15),
        ProfileBand(0.75, 1.00, 0.05),
    ),
    Regime.ANTI_CALIBRATED: (
        ProfileBand(0.00, 0.25, 0.05),
        ProfileBand(0.25, 0.50, 0.15),
        ProfileBand(0.50, 0.75, 0.30),
        ProfileBand(0.75, 1.00, 0.45),
    ),
    Regime.UNIFORM_NOISE: (ProfileBand(0.00, 1.00, 0.30),),
}


@dataclass(frozen=True)
class OracleConfig:
    """Parameters of the synthetic generators.

    Confidences are drawn at ``levels_per_band`` evenly spaced values
    inside each profile band (band mass proportional to width). The
    default of one level per band keeps the RC curve's steps large
    enough for adjacent-point checks to carry statistical weight; raise
    it when a finer-grained curve matters more than step detectability.
    The profile defaults to the regime's canonical shape.
    """

    n_instances: int = 1000
    k_min: int = 2
    k_max: int = 4
    critical_fraction: float = 0.65
    regime: Regime = Regime.RANK_CALIBRATED
    profile: Optional[tuple[ProfileBand, ...]] = None
    seed: int = 0
    levels_per_band: int = 1
    task: Task = Task.CLAIM_VERIFICATION

    def __post_init__(self):
        if self.n_instances < 1:
            raise InvalidProfile(f"n_instances must be >= 1, got {self.n_instances}")
        if not (1 <= self.k_min <= self.k_max):
            raise InvalidProfile(f"bad condition-count range ({self.k_min}, {self.k_max})")
        if not 0.0 <= self.critical_fraction <= 1.0:
            raise InvalidProfile(f"critical_fraction {self.critical_fraction} outside [0, 1]")
        if self.levels_per_band < 1:
            raise InvalidProfile(f"levels_per_band must be >= 1, got {self.levels_per_band}")
        if self.profile is None:
            object.__setattr__(self, "profile", DEFAULT_PROFILES[self.regime])
        _validate_profile(self.profile, self.regime)


def _validate_profile(profile: Sequence[ProfileBand], regime: Regime) -> None:
    if not profile:
        raise InvalidProfile("profile has no bands")
    if abs(profile[0].lo) > 1e-12 or abs(profile[-1].hi - 1.0) > 1e-12:
        raise InvalidProfile("profile bands must span [0, 1]")
    for prev, cur in zip(profile, profile[1:]):
        if abs(prev.hi - cur.lo) > 1e-12:
            raise InvalidProfile(f"bands must be contiguous; gap at {prev.hi} .. {cur.lo}")
    for band in profile:
        if not band.lo < band.hi:
            raise InvalidProfile(f"band [{band.lo}, {band.hi}) is empty")
        if not 0.0 <= band.error_rate <= 1.0:
            raise InvalidProfile(f"error rate {band.error_rate} outside [0, 1]")
    errs = [b.error_rate for b in profile]
    if regime is Regime.RANK_CALIBRATED:
        # error must not increase with confidence
        if any(b > a for a, b in zip(errs, errs[1:])):
            raise InvalidProfile(f"rank-calibrated profile must be non-increasing, got {errs}")
    elif regime is Regime.ANTI_CALIBRATED:
        if any(b < a for a, b in zip(errs, errs[1:])) or not any(
            b > a for a, b in zip(errs, errs[1:])
        ):
            raise InvalidProfile(f"anti-calibrated profile must increase somewhere, got {errs}")
    elif regime is Regime.UNIFORM_NOISE:
        if any(e != errs[0] for e in errs):
            raise InvalidProfile(f"uniform-noise profile must be constant, got {errs}")


@dataclass(frozen=True)
class PopulationPoint:
    """Analytic operating point: exact coverage and risk at threshold tau."""

    tau: float
    coverage: float
    risk: float


def _levels(config: OracleConfig) -> list[tuple[float, float, float]]:
    """(confidence value, probability mass, error rate) per discrete level,
    sorted by confidence ascending. Band mass is proportional to width."""
    levels = []
    total_width = sum(b.hi - b.lo for b in config.profile)
    for band in config.profile:
        width = band.hi - band.lo
        for j in range(config.levels_per_band):
            value = band.lo + width * (j + 0.5) / config.levels_per_band
            mass = width / (config.levels_per_band * total_width)
            levels.append((value, mass, band.error_rate))
    levels.sort(key=lambda t: t[0])
    return levels


def analytic_curve(config: OracleConfig) -> tuple[PopulationPoint, ...]:
    """The exact population RC curve: one point per confidence level,
    sorted by coverage ascending."""
    points = []
    coverage = 0.0
    err_mass = 0.0
    for value, mass, err in reversed(_levels(config)):
        coverage += mass
        err_mass += mass * err
        points.append(PopulationPoint(tau=value, coverage=coverage, risk=err_mass / coverage))
    return tuple(points)


def population_coverage_at(config: OracleConfig, tau: float) -> float:
    return sum(mass for value, mass, _ in _levels(config) if value >= tau)


def population_risk_at(config: OracleConfig, tau: float) -> float:
    selected = [(mass, err) for value, mass, err in _levels(config) if value >= tau]
    total = sum(mass for mass, _ in selected)
    if total == 0.0:
        raise InvalidProfile(f"no population mass at or above tau={tau}")
    return sum(mass * err for mass, err in selected) / total


def _rng(config: OracleConfig, spawn_key: tuple[int, ...] = ()) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=spawn_key)))


def generate_records(
    config: OracleConfig,
) -> tuple[list[EvalRecord], tuple[PopulationPoint, ...]]:
    """Sample evaluation records from the risk profile.

    Each record draws a confidence level (band weighted by width, level
    uniform within band) and is correct with probability one minus the
    band's error rate. Returns the records together with the analytic
    population curve they were drawn from.
    """
    return _sample_records(config, _rng(config)), analytic_curve(config)


def records_for_trial(config: OracleConfig, trial: int) -> list[EvalRecord]:
    """An independent record sample for one Monte Carlo trial; stream
    derived from the config seed by SeedSequence spawn key."""
    return _sample_records(config, _rng(config, spawn_key=(trial,)))


def _sample_records(config: OracleConfig, rng: np.random.Generator) -> list[EvalRecord]:
    levels = _levels(config)
    masses = np.array([mass for _, mass, _ in levels])
    masses = masses / masses.sum()
    choices = rng.choice(len(levels), size=config.n_instances, p=masses)
    uniforms = rng.random(config.n_instances)
    records = []
    for i in range(config.n_instances):
        value, _, err = levels[choices[i]]
        correct = bool(uniforms[i] >= err)
        records.append(
            EvalRecord(
                instance_id=f"synth-{i:05d}",
                confidence=value,
                correct=correct,
                gold_label="pos",
                predicted_label="pos" if correct else "neg",
            )
        )
    return records


# --- planted instances -------------------------------------------------------

_CLAIM_PLANTS = (ClaimLabel.SUPPORTS, ClaimLabel.REFUTES, ClaimLabel.NEI)
_QA_PLANTS = (QALabel.YES, QALabel.NO, QALabel.MAYBE)

# Status codes used during planting; mapped to score targets below.
_SUP, _CON, _MIS = "SUP", "CON", "MIS"


def generate_instances(
    config: OracleConfig,
    thresholds: AuditThresholds = AuditThresholds(),
    margin_gap: float = 0.15,
) -> tuple[list[Instance], list[ScoreRecord]]:
    """Planted instances plus the pair-score file that realizes them.

    Per-condition statuses are chosen to force a known label under the
    aggregation rules, then pair probabilities are sampled with every
    decisive score at least ``margin_gap`` beyond its threshold and every
    suppressed score at least ``margin_gap`` below, so the planted labels
    survive thresholds near the defaults. The instance's gold label is
    the planted label, which is what makes end-to-end accuracy checkable.
    """
    if max(thresholds.theta_ent, thresholds.theta_con) + margin_gap >= 0.98:
        raise InvalidProfile(
            f"thresholds too high to plant a {margin_gap} gap: {thresholds}"
        )
    rng = _rng(config, spawn_key=(0x1B57,))
    instances = []
    scores = []
    for i in range(config.n_instances):
        instance_id = f"planted-{i:05d}"
        k = int(rng.integers(config.k_min, config.k_max + 1))
        critical = [bool(rng.random() < config.critical_fraction) for _ in range(k)]
        if not any(critical):
            critical[int(rng.integers(k))] = True
        planted = _pick_label(config.task, rng)
        statuses = _statuses_for_label(planted, critical, rng)
        n_evidence = int(rng.integers(2, 6))
        evidence = tuple(
            f"Synthetic study {i}.{j} reports finding f{int(rng.integers(1000)):03d}."
            for j in range(n_evidence)
        )
        conditions = tuple(
            Condition(
                index=c + 1,
                text=f"Condition {c + 1} of synthetic input {i} holds.",
                critical=critical[c],
            )
            for c in range(k)
        )
        instances.append(
            Instance(
                id=instance_id,
                task=config.task,
                text=f"Synthetic input {i}.",
                evidence=evidence,
                conditions=conditions,
                gold_label=planted,
            )
        )
        for c in range(k):
            scores.extend(
                _plant_pair_scores(
                    instance_id, c + 1, statuses[c], n_evidence, thresholds, margin_gap, rng
                )
            )
    return instances, scores


def _pick_label(task: Task, rng: np.random.Generator) -> Label:
    plants = _CLAIM_PLANTS if task is Task.CLAIM_VERIFICATION else _QA_PLANTS
    return plants[int(rng.integers(len(plants)))]


def _statuses_for_label(
    label: Label, critical: list[bool], rng: np.random.Generator
) -> list[str]:
    """Per-condition audit statuses consistent with the planted label.

    Non-critical conditions take arbitrary statuses (including CON) since
    they must not influence the outcome.
    """
    k = len(critical)
    crit_idx = [c for c in range(k) if critical[c]]
    statuses = [""] * k
    for c in range(k):
        if not critical[c]:
            statuses[c] = (_SUP, _CON, _MIS)[int(rng.integers(3))]

    def fill(indices, options):
        for c in indices:
            statuses[c] = options[int(rng.integers(len(options)))]

    anchor = crit_idx[int(rng.integers(len(crit_idx)))]
    rest = [c for c in crit_idx if c != anchor]
    if label in (ClaimLabel.SUPPORTS,):
        fill(crit_idx, (_SUP,))
    elif label in (ClaimLabel.REFUTES, QALabel.NO):
        statuses[anchor] = _CON
        fill(rest, (_SUP, _CON, _MIS))
    elif label is ClaimLabel.NEI:
        statuses[anchor] = _MIS
        fill(rest, (_SUP, _MIS))
    elif label is QALabel.YES:
        statuses[anchor] = _SUP
        fill(rest, (_SUP, _MIS))
    elif label is QALabel.MAYBE:
        fill(crit_idx, (_MIS,))
    else:
        raise AssertionError(f"unhandled planted label {label}")
    return statuses


def _plant_pair_scores(
    instance_id: str,
    condition_index: int,
    status: str,
    n_evidence: int,
    thresholds: AuditThresholds,
    margin_gap: float,
    rng: np.random.Generator,
) -> list[ScoreRecord]:
    """Pair probability triples whose independent maxima realize the
    target audit status with the configured safety gap."""
    low_ent = max(thresholds.theta_ent - margin_gap, 0.02)
    low_con = max(thresholds.theta_con - margin_gap, 0.02)
    background = min(low_ent, low_con, 0.40)

    def background_pair():
        p_ent = rng.uniform(0.01, background)
        p_con = rng.uniform(0.01, background)
        return p_ent, p_con

    decisive_j = int(rng.integers(n_evidence))
    records = []
    for j in range(n_evidence):
        if status == _MIS or j != decisive_j:
            p_ent, p_con = background_pair()
        elif status == _SUP:
            p_ent = rng.uniform(thresholds.theta_ent + margin_gap, 0.98)
            p_con = rng.uniform(0.002, min(1.0 - p_ent - 0.001, 0.02))
        else:  # _CON
            p_con = rng.uniform(thresholds.theta_con + margin_gap, 0.98)
            p_ent = rng.uniform(0.002, min(1.0 - p_con - 0.001, 0.02))
        records.append(
            ScoreRecord(
                instance_id=instance_id,
                condition_index=condition_index,
                evidence_index=j,
                p_entail=float(p_ent),
                p_contradict=float(p_con),
                p_neutral=float(1.0 - p_ent - p_con),
            )
        )
    return records
