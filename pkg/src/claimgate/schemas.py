"""Line-delimited file schemas: instances, pair scores, predictions, and
the RC-curve CSV / summary JSON emitted by evaluation.

All data files are UTF-8 JSON lines so they stream and diff cleanly.
Floats are written with repr fidelity and parse back exactly, which is
what makes byte-identical reruns possible.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import DuplicateId, ParseError, ValidationError
from .model import (
    AuditStatus,
    Condition,
    ConditionAudit,
    EvidenceScores,
    Instance,
    Prediction,
    RCCurve,
    RCPoint,
    Task,
    instance_to_record,
    label_from_value,
    validate_instance,
)

DEFAULT_MAX_EVIDENCE = 30


@dataclass(frozen=True)
class ScoreRecord:
    """One scored (condition, evidence) pair.

    condition_index is the 1-based condition index; evidence_index is the
    0-based position in the instance's evidence list.
    """

    instance_id: str
    condition_index: int
    evidence_index: int
    p_entail: float
    p_contradict: float
    p_neutral: float

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.instance_id, self.condition_index, self.evidence_index)


def load_instances(
    path: str | Path,
    strict: bool = True,
    max_evidence: Optional[int] = DEFAULT_MAX_EVIDENCE,
) -> tuple[list[Instance], list[ParseError]]:
    """Read and validate instances from a JSONL file.

    Evidence lists longer than ``max_evidence`` sentences are truncated
    (set it to None to disable). In strict mode the first bad line raises;
    in lenient mode bad lines are collected with their line numbers and
    the rest still load. Duplicate instance ids are an error in both
    modes.
    """
    instances: list[Instance] = []
    errors: list[ParseError] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                err = ParseError(line_no, f"invalid JSON: {exc}")
                if strict:
                    raise err from exc
                errors.append(err)
                continue
            if max_evidence is not None and isinstance(raw.get("evidence"), list):
                raw = dict(raw, evidence=raw["evidence"][:max_evidence])
            try:
                instance = validate_instance(raw)
            except ValidationError as exc:
                err = ParseError(line_no, str(exc))
                if strict:
                    raise err from exc
                errors.append(err)
                continue
            if instance.id in seen_ids:
                raise DuplicateId(f"line {line_no}: duplicate instance id {instance.id!r}")
            seen_ids.add(instance.id)
            instances.append(instance)
    return instances, errors


def write_instances(instances: Iterable[Instance], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for instance in instances:
            fh.write(json.dumps(instance_to_record(instance), sort_keys=True) + "\n")


def load_scores(path: str | Path) -> dict[tuple[str, int, int], ScoreRecord]:
    """Read a pair-score file into a lookup keyed by
    (instance_id, condition_index, evidence_index). Duplicate keys are an
    error: a score file must be unambiguous."""
    scores: dict[tuple[str, int, int], ScoreRecord] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                record = ScoreRecord(
                    instance_id=str(raw["instance_id"]),
                    condition_index=int(raw["condition_index"]),
                    evidence_index=int(raw["evidence_index"]),
                    p_entail=float(raw["p_entail"]),
                    p_contradict=float(raw["p_contradict"]),
                    p_neutral=float(raw["p_neutral"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(line_no, f"bad score record: {exc}") from exc
            if record.key in scores:
                raise DuplicateId(f"line {line_no}: duplicate score key {record.key}")
            scores[record.key] = record
    return scores


def write_scores(records: Iterable[ScoreRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {
                        "instance_id": r.instance_id,
                        "condition_index": r.condition_index,
                        "evidence_index": r.evidence_index,
                        "p_entail": r.p_entail,
                        "p_contradict": r.p_contradict,
                        "p_neutral": r.p_neutral,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def prediction_to_record(prediction: Prediction) -> dict:
    return {
        "instance_id": prediction.instance_id,
        "task": prediction.task.value,
        "label": prediction.label.value,
        "confidence": prediction.confidence,
        "abstained": prediction.abstained,
        "tau": prediction.tau,
        "audits": [
            {
                "condition_index": a.condition.index,
                "condition_text": a.condition.text,
                "critical": a.condition.critical,
                "s_ent": a.scores.s_ent,
                "s_con": a.scores.s_con,
                "ent_argmax": a.scores.ent_argmax,
                "con_argmax": a.scores.con_argmax,
                "status": a.status.value,
                "margin": a.margin,
            }
            for a in prediction.audits
        ],
    }


def prediction_from_record(raw: dict) -> Prediction:
    task = Task(raw["task"])
    audits = tuple(
        ConditionAudit(
            condition=Condition(
                index=int(a["condition_index"]),
                text=str(a.get("condition_text", "")),
                critical=bool(a["critical"]),
            ),
            scores=EvidenceScores(
                s_ent=float(a["s_ent"]),
                s_con=float(a["s_con"]),
                ent_argmax=a.get("ent_argmax"),
                con_argmax=a.get("con_argmax"),
            ),
            status=AuditStatus(a["status"]),
            margin=float(a["margin"]),
        )
        for a in raw.get("audits", [])
    )
    return Prediction(
        instance_id=str(raw["instance_id"]),
        task=task,
        label=label_from_value(task, raw["label"]),
        confidence=float(raw["confidence"]),
        abstained=bool(raw["abstained"]),
        audits=audits,
        tau=float(raw.get("tau", 0.0)),
    )


def write_predictions(
    predictions: Iterable[Prediction], path: str | Path, manifest: Optional[dict] = None
) -> None:
    """Write predictions as JSONL; when a manifest is given, the first
    line is a type-tagged manifest record so every output file carries
    its provenance."""
    with open(path, "w", encoding="utf-8") as fh:
        if manifest is not None:
            fh.write(json.dumps({"_type": "manifest", **manifest}, sort_keys=True) + "\n")
        for p in predictions:
            fh.write(json.dumps(prediction_to_record(p), sort_keys=True) + "\n")


def load_predictions(path: str | Path) -> tuple[list[Prediction], Optional[dict]]:
    predictions = []
    manifest = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc}") from exc
            if raw.get("_type") == "manifest":
                manifest = {k: v for k, v in raw.items() if k != "_type"}
                continue
            try:
                predictions.append(prediction_from_record(raw))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(line_no, f"bad prediction record: {exc}") from exc
    return predictions, manifest


RC_CSV_COLUMNS = ["tau", "coverage", "risk", "n_selected"]


def write_rc_csv(curve: RCCurve, path: str | Path, manifest_hash: Optional[str] = None) -> None:
    """RC curve as CSV with columns tau, coverage, risk, n_selected. A
    manifest hash, when given, is recorded on a leading comment line."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if manifest_hash is not None:
            fh.write(f"# manifest_hash={manifest_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(RC_CSV_COLUMNS)
        for p in curve.points:
            writer.writerow([repr(p.tau), repr(p.coverage), repr(p.risk), p.n_selected])


def read_rc_csv(path: str | Path) -> RCCurve:
    points = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        content = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(io.StringIO("".join(content)))
    for row in reader:
        points.append(
            RCPoint(
                tau=float(row["tau"]),
                coverage=float(row["coverage"]),
                risk=float(row["risk"]),
                n_selected=int(row["n_selected"]),
            )
        )
    return RCCurve(points=tuple(points))


def write_summary(summary: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_summary(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_eval_records(records, path: str | Path) -> None:
    """Evaluation records as JSONL: confidence, correctness, and labels."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {
                        "instance_id": r.instance_id,
                        "confidence": r.confidence,
                        "correct": r.correct,
                        "gold_label": r.gold_label,
                        "predicted_label": r.predicted_label,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def load_eval_records(path: str | Path):
    from .riskcov import EvalRecord

    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                records.append(
                    EvalRecord(
                        instance_id=str(raw["instance_id"]),
                        confidence=float(raw["confidence"]),
                        correct=bool(raw["correct"]),
                        gold_label=str(raw["gold_label"]),
                        predicted_label=str(raw["predicted_label"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(line_no, f"bad eval record: {exc}") from exc
    return records


def content_hash(path: str | Path) -> str:
    """SHA-256 of a file's bytes; identifies datasets in run manifests."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class PairRecord:
    """One (premise, hypothesis) pair for an external scorer: premise is
    the evidence sentence, hypothesis the condition text."""

    instance_id: str
    condition_index: int
    evidence_index: int
    premise: str
    hypothesis: str


def pairs_for_instances(instances: Sequence[Instance]) -> list[PairRecord]:
    """Every (condition, evidence) pair of every instance, in canonical
    order: instance-major, condition-major, evidence-minor."""
    pairs = []
    for instance in instances:
        for condition in instance.conditions:
            for j, sentence in enumerate(instance.evidence):
                pairs.append(
                    PairRecord(
                        instance_id=instance.id,
                        condition_index=condition.index,
                        evidence_index=j,
                        premise=sentence,
                        hypothesis=condition.text,
                    )
                )
    return pairs


def write_pairs(pairs: Iterable[PairRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write(
                json.dumps(
                    {
                        "instance_id": p.instance_id,
                        "condition_index": p.condition_index,
                        "evidence_index": p.evidence_index,
                        "premise": p.premise,
                        "hypothesis": p.hypothesis,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def load_pairs(path: str | Path) -> list[PairRecord]:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                pairs.append(
                    PairRecord(
                        instance_id=str(raw["instance_id"]),
                        condition_index=int(raw["condition_index"]),
                        evidence_index=int(raw["evidence_index"]),
                        premise=str(raw["premise"]),
                        hypothesis=str(raw["hypothesis"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(line_no, f"bad pair record: {exc}") from exc
    return pairs
