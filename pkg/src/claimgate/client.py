"""HTTP client for a remote scorer endpoint, with batching, retries, and
a content-addressed response cache.

Wire protocol: POST a JSON body {"pairs": [{"premise": ..., "hypothesis":
...}, ...]} and receive {"scores": [{"entail": e, "contradict": c,
"neutral": n}, ...]} with one triple per pair, order preserved. The
premise is the evidence sentence and the hypothesis the condition text.
Credentials come only from the SCORER_API_TOKEN environment variable so
they can never leak into manifests or shell history.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import requests

from .audit import check_triple
from .errors import ProtocolError, ScorerUnavailable

TOKEN_ENV_VAR = "SCORER_API_TOKEN"

Triple = tuple[float, float, float]


def pair_key(premise: str, hypothesis: str) -> str:
    """Content hash identifying a (premise, hypothesis) pair."""
    payload = premise.encode("utf-8") + b"\x1f" + hypothesis.encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


class ScoreCache:
    """Thread-safe in-memory cache of pair scores, optionally persisted as
    JSONL so repeated runs skip the network entirely."""

    def __init__(self, path: Optional[str] = None):
        self._lock = threading.Lock()
        self._entries: dict[str, Triple] = {}
        self._path = path
        if path and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    raw = json.loads(line)
                    self._entries[raw["key"]] = (
                        float(raw["entail"]),
                        float(raw["contradict"]),
                        float(raw["neutral"]),
                    )

    def get(self, key: str) -> Optional[Triple]:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, triple: Triple) -> None:
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = triple
            if self._path:
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(
                        json.dumps(
                            {
                                "key": key,
                                "entail": triple[0],
                                "contradict": triple[1],
                                "neutral": triple[2],
                            },
                            sort_keys=True,
                        )
                        + "\n"
                    )

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


@dataclass
class EndpointConfig:
    url: str
    batch_size: int = 32
    max_attempts: int = 3
    backoff_base: float = 0.25
    timeout: float = 30.0
    cache: ScoreCache = field(default_factory=ScoreCache)
    # injectable for tests
    session: Optional[requests.Session] = None
    sleep: Callable[[float], None] = time.sleep

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")


def _headers() -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    token = os.environ.get(TOKEN_ENV_VAR)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    return headers


def _post_batch(config: EndpointConfig, batch: Sequence[tuple[str, str]]) -> list[Triple]:
    session = config.session or requests
    body = {"pairs": [{"premise": p, "hypothesis": h} for p, h in batch]}
    last_error: Optional[Exception] = None
    for attempt in range(config.max_attempts):
        if attempt:
            config.sleep(config.backoff_base * (2 ** (attempt - 1)))
        try:
            response = session.post(
                config.url, json=body, headers=_headers(), timeout=config.timeout
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code >= 500:
            last_error = ScorerUnavailable(f"server returned {response.status_code}")
            continue
        if response.status_code != 200:
            raise ProtocolError(
                f"scorer returned {response.status_code}: {response.text[:200]}"
            )
        try:
            payload = response.json()
            raw_scores = payload["scores"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProtocolError(f"unparseable scorer response: {exc}") from exc
        if not isinstance(raw_scores, list) or len(raw_scores) != len(batch):
            raise ProtocolError(
                f"expected {len(batch)} scores, got "
                f"{len(raw_scores) if isinstance(raw_scores, list) else type(raw_scores)}"
            )
        triples = []
        for i, entry in enumerate(raw_scores):
            try:
                raw_triple = (entry["entail"], entry["contradict"], entry["neutral"])
            except (KeyError, TypeError) as exc:
                raise ProtocolError(f"score {i} missing components: {entry!r}") from exc
            try:
                triples.append(check_triple(raw_triple, context=f"response pair {i}"))
            except Exception as exc:
                raise ProtocolError(str(exc)) from exc
        return triples
    raise ScorerUnavailable(
        f"scorer at {config.url} failed after {config.max_attempts} attempts: {last_error}"
    )


def remote_score_batch(
    pairs: Sequence[tuple[str, str]], config: EndpointConfig
) -> list[Triple]:
    """Score (premise, hypothesis) pairs against the remote endpoint.

    Returns one triple per pair in input order. Pairs already in the
    cache are served locally; the rest are deduplicated and sent in
    batches of at most ``config.batch_size``.
    """
    keys = [pair_key(p, h) for p, h in pairs]
    missing: dict[str, tuple[str, str]] = {}
    for key, pair in zip(keys, pairs):
        if config.cache.get(key) is None and key not in missing:
            missing[key] = pair
    todo = list(missing.items())
    for start in range(0, len(todo), config.batch_size):
        chunk = todo[start : start + config.batch_size]
        triples = _post_batch(config, [pair for _, pair in chunk])
        for (key, _), triple in zip(chunk, triples):
            config.cache.put(key, triple)
    return [config.cache.get(key) for key in keys]
