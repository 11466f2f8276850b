"""Zero-shot predictor contract and backends."""

from .backends import EmbedFileBackend, HttpServiceBackend, ToyBackend, make_backend
from .core import LabelSet, PredictorBackend, cosine_sim, predict

__all__ = [
    "LabelSet",
    "PredictorBackend",
    "cosine_sim",
    "predict",
    "ToyBackend",
    "EmbedFileBackend",
    "HttpServiceBackend",
    "make_backend",
]
