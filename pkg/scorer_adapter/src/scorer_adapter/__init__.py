"""Reference NLI scorer for the verification pipeline: file converter and
HTTP service producing (entail, contradict, neutral) triples."""

__version__ = "0.1.0"

from .model_runner import AdapterConfig, ModelLoadError, NLIScorer, resolve_label_order
from .files import read_pairs, score_pairs_file
from .server import build_server, serve

__all__ = [
    "AdapterConfig",
    "ModelLoadError",
    "NLIScorer",
    "build_server",
    "read_pairs",
    "resolve_label_order",
    "score_pairs_file",
    "serve",
]
