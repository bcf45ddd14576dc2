"""Scorer backend implementations behind the audit engine.

Three kinds: precomputed score files (the usual offline path), a remote
HTTP scorer reached through the batching client, and the constant stub
from the audit module. ``build_backend`` turns a manifest descriptor into
a live backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .audit import ConstantStubBackend, ScorerBackend
from .client import EndpointConfig, ScoreCache, remote_score_batch
from .errors import MissingPrecomputedScore
from .model import Condition, Instance
from .schemas import ScoreRecord, pairs_for_instances


@dataclass(frozen=True)
class PrecomputedFileBackend:
    """Serves triples from a score file keyed by
    (instance_id, condition_index, evidence_index)."""

    scores: dict[tuple[str, int, int], ScoreRecord]

    def score_pair(self, instance_id, condition: Condition, evidence_index, evidence_text):
        key = (instance_id, condition.index, evidence_index)
        record = self.scores.get(key)
        if record is None:
            raise MissingPrecomputedScore(f"no precomputed score for pair {key}")
        return (record.p_entail, record.p_contradict, record.p_neutral)


class RemoteBackend:
    """Scores pairs through the remote client.

    Call :meth:`prefetch` with the instances about to be audited so all
    pairs go out in batched requests; per-pair lookups during the audit
    are then served from the client cache, keeping the audit engine's
    one-invocation-per-pair contract intact.
    """

    def __init__(self, config: EndpointConfig):
        self.config = config

    def prefetch(self, instances: Sequence[Instance]) -> None:
        pairs = [(p.premise, p.hypothesis) for p in pairs_for_instances(instances)]
        if pairs:
            remote_score_batch(pairs, self.config)

    def score_pair(self, instance_id, condition: Condition, evidence_index, evidence_text):
        (triple,) = remote_score_batch([(evidence_text, condition.text)], self.config)
        return triple


def build_backend(descriptor: dict) -> ScorerBackend:
    """Instantiate a backend from its manifest descriptor.

    Descriptors: {"kind": "precomputed_file", "path": ...},
    {"kind": "remote_http", "url": ..., "batch_size": ..., "cache_path": ...},
    {"kind": "constant_stub", "p_entail": ..., "p_contradict": ..., "p_neutral": ...}.
    """
    kind = descriptor.get("kind")
    if kind == "precomputed_file":
        from .schemas import load_scores

        return PrecomputedFileBackend(scores=load_scores(descriptor["path"]))
    if kind == "remote_http":
        return RemoteBackend(
            EndpointConfig(
                url=descriptor["url"],
                batch_size=int(descriptor.get("batch_size", 32)),
                cache=ScoreCache(descriptor.get("cache_path")),
            )
        )
    if kind == "constant_stub":
        return ConstantStubBackend(
            p_entail=float(descriptor.get("p_entail", 0.0)),
            p_contradict=float(descriptor.get("p_contradict", 0.0)),
            p_neutral=float(descriptor.get("p_neutral", 1.0)),
        )
    raise ValueError(f"unknown backend kind {kind!r}")
