"""Adapter test fixtures.

The real cross-encoder must be present in the local HuggingFace cache (or
reachable on the network); otherwise the model-dependent tests skip with
an explanation rather than fail. Offline mode is forced so a populated
cache never triggers network round-trips.
"""

from __future__ import annotations

import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

import pytest

from scorer_adapter.model_runner import AdapterConfig, ModelLoadError, NLIScorer

# Identity pairs: the premise entails itself.
IDENTITY_SENTENCES = [
    "Aspirin reduces the risk of heart attack.",
    "The enzyme catalyzes the hydrolysis of ATP.",
    "Vitamin D supplementation improves bone density.",
    "The vaccine produced a strong antibody response.",
    "Exercise lowers resting heart rate.",
]

# Directionally negated pairs: the premise contradicts the hypothesis.
NEGATED_PAIRS = [
    ("Drug X increases blood pressure.", "Drug X decreases blood pressure."),
    ("The mutation increases protein stability.", "The mutation decreases protein stability."),
    ("The treatment raised survival rates.", "The treatment lowered survival rates."),
    ("The gene is upregulated in tumor tissue.", "The gene is downregulated in tumor tissue."),
    ("Caffeine increases reaction speed.", "Caffeine decreases reaction speed."),
]

SMOKE_PAIRS = [(s, s) for s in IDENTITY_SENTENCES] + NEGATED_PAIRS


@pytest.fixture(scope="session")
def scorer() -> NLIScorer:
    config = AdapterConfig(batch_size=16)
    try:
        return NLIScorer(config)
    except ModelLoadError as exc:
        pytest.skip(
            f"NLI model {config.model!r} is not available locally and could not "
            f"be downloaded; populate the HuggingFace cache to run this test ({exc})"
        )
