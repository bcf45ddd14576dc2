"""Adapter conformance: score-file schema, softmax sanity, and the
directional smoke checks on the 10-pair set."""

import json

import pytest
from click.testing import CliRunner

from scorer_adapter.cli import main
from scorer_adapter.files import read_pairs, score_pairs_file
from scorer_adapter.model_runner import AdapterConfig, ModelLoadError, resolve_label_order

from conftest import IDENTITY_SENTENCES, SMOKE_PAIRS


def pairs_file(tmp_path, pairs):
    path = tmp_path / "pairs.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for i, (premise, hypothesis) in enumerate(pairs):
            fh.write(
                json.dumps(
                    {
                        "instance_id": f"smoke-{i:02d}",
                        "condition_index": 1,
                        "evidence_index": 0,
                        "premise": premise,
                        "hypothesis": hypothesis,
                    }
                )
                + "\n"
            )
    return path


@pytest.fixture(scope="module")
def smoke_rows(tmp_path_factory, scorer):
    tmp_path = tmp_path_factory.mktemp("smoke")
    pairs_path = pairs_file(tmp_path, SMOKE_PAIRS)
    out_path = tmp_path / "scores.jsonl"
    config = AdapterConfig(pairs_path=str(pairs_path), out_path=str(out_path))
    count = score_pairs_file(config, scorer=scorer)
    assert count == len(SMOKE_PAIRS)
    rows = [json.loads(line) for line in out_path.read_text().splitlines()]
    meta = json.loads((tmp_path / "scores.jsonl.meta.json").read_text())
    return rows, meta


def test_rows_keep_input_order_and_keys(smoke_rows):
    rows, _ = smoke_rows
    assert [r["instance_id"] for r in rows] == [f"smoke-{i:02d}" for i in range(10)]
    for row in rows:
        assert set(row) == {
            "instance_id", "condition_index", "evidence_index",
            "p_entail", "p_contradict", "p_neutral",
        }


def test_triples_are_probabilities_summing_to_one(smoke_rows):
    rows, _ = smoke_rows
    for row in rows:
        triple = (row["p_entail"], row["p_contradict"], row["p_neutral"])
        assert all(0.0 <= p <= 1.0 for p in triple)
        assert abs(sum(triple) - 1.0) <= 1e-4


def test_rows_validate_against_pipeline_score_schema(smoke_rows, tmp_path):
    """The emitted file loads through the verification pipeline's own
    score-file reader."""
    claimgate_schemas = pytest.importorskip("claimgate.schemas")
    rows, _ = smoke_rows
    path = tmp_path / "scores.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    loaded = claimgate_schemas.load_scores(path)
    assert len(loaded) == len(rows)
    for record in loaded.values():
        assert 0.0 <= record.p_entail <= 1.0


def test_identity_pairs_score_entail_highest(smoke_rows):
    rows, _ = smoke_rows
    for row in rows[: len(IDENTITY_SENTENCES)]:
        assert row["p_entail"] > row["p_contradict"]
        assert row["p_entail"] > row["p_neutral"]


def test_negated_pairs_score_contradict_highest(smoke_rows):
    rows, _ = smoke_rows
    for row in rows[len(IDENTITY_SENTENCES):]:
        assert row["p_contradict"] > row["p_entail"]
        assert row["p_contradict"] > row["p_neutral"]


def test_metadata_sidecar_records_settings(smoke_rows):
    _, meta = smoke_rows
    assert meta["n_pairs"] == 10
    assert meta["model"]
    assert "label_index" in meta


def test_scoring_is_deterministic(scorer):
    batch = SMOKE_PAIRS[:4]
    assert scorer.score_batch(batch) == scorer.score_batch(batch)


def test_batch_size_does_not_change_ordering(scorer):
    """Chunked and single-batch scoring agree to float tolerance and rank
    the same class first for this clearly separated smoke set."""
    chunked = scorer.score_batch(SMOKE_PAIRS, batch_size=1)
    whole = scorer.score_batch(SMOKE_PAIRS)
    for a, b in zip(chunked, whole):
        assert max(range(3), key=lambda i: a[i]) == max(range(3), key=lambda i: b[i])
        assert all(abs(x - y) < 1e-4 for x, y in zip(a, b))


def test_empty_pairs_file_gives_empty_scores_exit_zero(tmp_path):
    pairs_path = tmp_path / "empty.jsonl"
    pairs_path.write_text("")
    out_path = tmp_path / "scores.jsonl"
    result = CliRunner().invoke(
        main, ["score", "--pairs", str(pairs_path), "--out", str(out_path)]
    )
    assert result.exit_code == 0, result.output
    assert out_path.read_text() == ""


def test_bad_pairs_file_rejected(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"premise": "p"}\n')
    with pytest.raises(ValueError):
        read_pairs(path)


# --- label-order guard (no model needed) --------------------------------------

def test_label_order_resolved_from_id2label():
    mapping = resolve_label_order({0: "contradiction", 1: "entailment", 2: "neutral"})
    assert mapping == {"contradict": 0, "entail": 1, "neutral": 2}


def test_swapped_label_names_still_map_correctly():
    mapping = resolve_label_order({0: "ENTAILMENT", 1: "NEUTRAL", 2: "CONTRADICTION"})
    assert mapping == {"entail": 0, "neutral": 1, "contradict": 2}


def test_unknown_or_missing_labels_rejected():
    with pytest.raises(ModelLoadError):
        resolve_label_order({0: "positive", 1: "negative", 2: "neutral"})
    with pytest.raises(ModelLoadError):
        resolve_label_order({0: "entailment", 1: "neutral"})
    with pytest.raises(ModelLoadError):
        resolve_label_order({0: "entailment", 1: "entail", 2: "neutral"})
