"""Cross-encoder NLI inference.

Loads a three-way NLI sequence-classification model and scores
(premise, hypothesis) pairs into (entail, contradict, neutral)
probability triples via the model's softmax. The premise is the evidence
sentence and the hypothesis the condition text.

The model's label order is resolved from its published id2label mapping
at load time and asserted to cover exactly the three NLI classes, so a
checkpoint with swapped entail/contradict indices fails loudly instead of
silently corrupting every score downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import torch

DEFAULT_MODEL = "cross-encoder/nli-deberta-v3-base"

Triple = tuple[float, float, float]

# Aliases seen across published NLI checkpoints.
_LABEL_ALIASES = {
    "entail": "entail",
    "entailment": "entail",
    "contradict": "contradict",
    "contradiction": "contradict",
    "neutral": "neutral",
}


class ModelLoadError(RuntimeError):
    pass


@dataclass
class AdapterConfig:
    model: str = DEFAULT_MODEL
    batch_size: int = 16
    device: str = "cpu"
    max_length: int = 512
    pairs_path: Optional[str] = None
    out_path: Optional[str] = None
    serve: bool = False
    port: int = 8752

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")


def resolve_label_order(id2label: dict) -> dict[str, int]:
    """Map each canonical class to its logit index, from the model config."""
    mapping: dict[str, int] = {}
    for index, label in id2label.items():
        canonical = _LABEL_ALIASES.get(str(label).strip().lower())
        if canonical is None:
            raise ModelLoadError(f"unrecognized NLI label {label!r} in id2label")
        if canonical in mapping:
            raise ModelLoadError(f"duplicate NLI label {label!r} in id2label")
        mapping[canonical] = int(index)
    missing = {"entail", "contradict", "neutral"} - set(mapping)
    if missing:
        raise ModelLoadError(f"model labels missing NLI classes: {sorted(missing)}")
    return mapping


class NLIScorer:
    """Batched, deterministic scoring with a fixed-weights cross-encoder."""

    def __init__(self, config: AdapterConfig):
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self.config = config
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(config.model)
            self.model = AutoModelForSequenceClassification.from_pretrained(config.model)
        except Exception as exc:
            raise ModelLoadError(f"could not load {config.model!r}: {exc}") from exc
        self.label_index = resolve_label_order(self.model.config.id2label)
        self.model.to(config.device)
        self.model.eval()

    @property
    def metadata(self) -> dict:
        return {
            "model": self.config.model,
            "device": self.config.device,
            "batch_size": self.config.batch_size,
            "max_length": self.config.max_length,
            "label_index": self.label_index,
            "dtype": str(next(self.model.parameters()).dtype),
            "sampling": "none (argmax-free softmax probabilities)",
        }

    def score_batch(
        self, pairs: Sequence[tuple[str, str]], batch_size: Optional[int] = None
    ) -> list[Triple]:
        """One (entail, contradict, neutral) triple per pair, in order."""
        size = batch_size or self.config.batch_size
        triples: list[Triple] = []
        for start in range(0, len(pairs), size):
            chunk = pairs[start : start + size]
            triples.extend(self._score_chunk(chunk))
        return triples

    def _score_chunk(self, chunk: Sequence[tuple[str, str]]) -> list[Triple]:
        premises = [p for p, _ in chunk]
        hypotheses = [h for _, h in chunk]
        encoded = self.tokenizer(
            premises,
            hypotheses,
            padding=True,
            truncation=True,
            max_length=self.config.max_length,
            return_tensors="pt",
        ).to(self.config.device)
        try:
            with torch.no_grad():
                logits = self.model(**encoded).logits
        except RuntimeError as exc:
            if "out of memory" in str(exc).lower():
                raise RuntimeError(
                    f"scoring ran out of memory at batch size "
                    f"{self.config.batch_size}; retry with a smaller --batch-size"
                ) from exc
            raise
        probs = torch.softmax(logits.float(), dim=-1).cpu()
        e, c, n = (
            self.label_index["entail"],
            self.label_index["contradict"],
            self.label_index["neutral"],
        )
        return [
            (float(row[e]), float(row[c]), float(row[n]))
            for row in probs
        ]
