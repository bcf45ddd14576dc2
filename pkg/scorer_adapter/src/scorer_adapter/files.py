"""File mode: pairs JSONL in, scores JSONL out.

Input lines carry {"instance_id", "condition_index", "evidence_index",
"premise", "hypothesis"}; output lines carry the same keys with the
probability triple in place of the texts, which is the score-file schema
the verification pipeline consumes. A sidecar ``<out>.meta.json`` records
the inference settings for reproducibility.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model_runner import AdapterConfig, NLIScorer


def read_pairs(path: str | Path) -> list[dict]:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                pairs.append(
                    {
                        "instance_id": str(raw["instance_id"]),
                        "condition_index": int(raw["condition_index"]),
                        "evidence_index": int(raw["evidence_index"]),
                        "premise": str(raw["premise"]),
                        "hypothesis": str(raw["hypothesis"]),
                    }
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad pair record: {exc}") from exc
    return pairs


def write_score_records(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def score_pairs_file(config: AdapterConfig, scorer: NLIScorer | None = None) -> int:
    """Score every pair in the input file, preserving input order.

    Returns the number of pairs scored. An empty input produces an empty
    (but valid) output file.
    """
    if not config.pairs_path or not config.out_path:
        raise ValueError("file mode needs both pairs_path and out_path")
    pairs = read_pairs(config.pairs_path)
    if not pairs:
        write_score_records([], config.out_path)
        return 0
    scorer = scorer or NLIScorer(config)
    triples = scorer.score_batch([(p["premise"], p["hypothesis"]) for p in pairs])
    rows = [
        {
            "instance_id": pair["instance_id"],
            "condition_index": pair["condition_index"],
            "evidence_index": pair["evidence_index"],
            "p_entail": triple[0],
            "p_contradict": triple[1],
            "p_neutral": triple[2],
        }
        for pair, triple in zip(pairs, triples)
    ]
    write_score_records(rows, config.out_path)
    meta_path = Path(config.out_path).with_suffix(Path(config.out_path).suffix + ".meta.json")
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump({"n_pairs": len(rows), **scorer.metadata}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return len(rows)
