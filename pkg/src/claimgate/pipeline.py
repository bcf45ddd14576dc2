"""End-to-end run orchestration: audit, aggregate, score confidence,
apply the threshold, and write every artifact a run produces.

Outputs are a pure function of the manifest plus the input files: no
timestamps, sorted JSON keys, repr-formatted floats. Rerunning an
identical manifest must reproduce byte-identical files.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import hashlib
import json

from . import __version__
from .audit import AuditThresholds, audit_instance
from .backends import RemoteBackend, build_backend
from .decide import AggregationMode, predict
from .errors import ClaimgateError
from .model import LABELS_BY_TASK, Instance, Prediction
from .riskcov import EvalRecord, summarize, sweep
from .schemas import (
    content_hash,
    load_instances,
    write_predictions,
    write_rc_csv,
    write_summary,
)


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines a run's outputs."""

    dataset_path: str
    dataset_sha256: str
    theta_ent: float
    theta_con: float
    confidence: str = "max"
    mode: str = "full"
    backend: Optional[dict] = None
    tau: float = 0.0
    seed: int = 0
    strict: bool = True
    max_evidence: int = 30
    tool_version: str = __version__

    @classmethod
    def for_run(cls, dataset_path: str | Path, **kwargs) -> "RunManifest":
        return cls(
            dataset_path=str(dataset_path),
            dataset_sha256=content_hash(dataset_path),
            **kwargs,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(canonical).hexdigest()


@dataclass
class RunResult:
    predictions: list[Prediction]
    records: list[EvalRecord]
    failures: list[tuple[str, str]]  # (instance id, reason)
    predictions_path: Optional[Path] = None
    curve_path: Optional[Path] = None
    summary_path: Optional[Path] = None
    summary: Optional[dict] = None


def eval_records(instances: list[Instance], predictions: list[Prediction]) -> list[EvalRecord]:
    """Pair predictions with gold labels; instances without gold are
    skipped. The stored (would-be) label is scored even when the
    prediction abstained, so threshold sweeps can be replayed post hoc."""
    by_id = {p.instance_id: p for p in predictions}
    records = []
    for instance in instances:
        if instance.gold_label is None:
            continue
        prediction = by_id.get(instance.id)
        if prediction is None:
            continue
        records.append(
            EvalRecord(
                instance_id=instance.id,
                confidence=prediction.confidence,
                correct=prediction.label == instance.gold_label,
                gold_label=instance.gold_label.value,
                predicted_label=prediction.label.value,
            )
        )
    return records


def run_pipeline(manifest: RunManifest, out_dir: str | Path) -> RunResult:
    """Execute a full run and write predictions, the RC curve, and the
    summary (the latter two only when gold labels are present).

    Per-instance failures are collected into the result rather than
    aborting the run; callers decide whether they are fatal (the CLI
    exits non-zero on any failure in strict mode).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mode = AggregationMode(manifest.mode)
    thresholds = AuditThresholds(theta_ent=manifest.theta_ent, theta_con=manifest.theta_con)

    instances, parse_errors = load_instances(
        manifest.dataset_path, strict=manifest.strict, max_evidence=manifest.max_evidence
    )
    failures = [("<parse>", str(err)) for err in parse_errors]

    backend = None
    if mode is not AggregationMode.NO_AUDIT:
        if manifest.backend is None:
            raise ClaimgateError("manifest has no backend but the mode requires auditing")
        backend = build_backend(manifest.backend)
        if isinstance(backend, RemoteBackend):
            backend.prefetch(instances)

    predictions = []
    for instance in instances:
        try:
            if mode is AggregationMode.NO_AUDIT:
                audits = None
            else:
                audits = audit_instance(instance, backend, thresholds)
            predictions.append(
                predict(
                    instance,
                    audits,
                    mode=mode,
                    confidence=manifest.confidence,
                    tau=manifest.tau,
                )
            )
        except ClaimgateError as exc:
            failures.append((instance.id, str(exc)))

    manifest_dict = manifest.to_dict()
    manifest_path = out / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest_dict, fh, indent=2, sort_keys=True)
        fh.write("\n")

    predictions_path = out / "predictions.jsonl"
    write_predictions(predictions, predictions_path, manifest=manifest_dict)

    records = eval_records(instances, predictions)
    result = RunResult(
        predictions=predictions,
        records=records,
        failures=failures,
        predictions_path=predictions_path,
    )
    if records:
        curve = sweep(records)
        task = instances[0].task
        labels = [label.value for label in LABELS_BY_TASK[task]]
        summary = {
            "metrics": summarize(records, labels),
            "task": task.value,
            "manifest": manifest_dict,
            "manifest_hash": manifest.hash(),
            "conventions": {
                "risk_at_coverage": "linear interpolation between operating points",
                "tau_grid": "distinct observed confidences plus zero",
            },
            "n_failures": len(failures),
        }
        result.curve_path = out / "rc_curve.csv"
        result.summary_path = out / "summary.json"
        result.summary = summary
        write_rc_csv(curve, result.curve_path, manifest_hash=manifest.hash())
        write_summary(summary, result.summary_path)
    return result
