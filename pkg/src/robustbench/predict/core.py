"""Contrastive zero-shot prediction: cosine argmax over prompted labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, ZeroVector


@dataclass(frozen=True)
class LabelSet:
    """Ordered class names plus the prompt template they are rendered with.

    Order is load-bearing: prediction ties break toward the lowest index.
    """

    labels: tuple[str, ...]
    prompt_template: str = "a photo of a {label}"

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("label set must not be empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("label names must be unique")
        if "{label}" not in self.prompt_template:
            raise ValueError("prompt template needs a {label} slot")
        object.__setattr__(self, "labels", tuple(self.labels))

    def prompted(self) -> list[str]:
        return [self.prompt_template.format(label=name) for name in self.labels]


def cosine_sim(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"cannot compare shapes {a.shape} and {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity undefined for a zero vector")
    return float(np.dot(a, b) / (na * nb))


class PredictorBackend:
    """Embedding-producing backend; subclasses fill in the encoders.

    Subclasses set `kind`, `model_id`, and `dim`, and implement
    `embed_images` and `embed_texts` returning one vector per input, all of
    dimension `dim`. Label-text embeddings are cached per label set, since a
    run re-uses them for every sample.
    """

    kind: str = "abstract"
    model_id: str = "abstract"
    dim: int = 0

    def __init__(self) -> None:
        self._text_cache: dict[tuple, list[np.ndarray]] = {}

    def embed_images(self, images: list[np.ndarray]) -> list[np.ndarray]:
        raise NotImplementedError

    def embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        raise NotImplementedError

    def label_embeddings(self, label_set: LabelSet) -> list[np.ndarray]:
        key = (label_set.prompt_template, label_set.labels)
        if key not in self._text_cache:
            self._text_cache[key] = self.embed_texts(label_set.prompted())
        return self._text_cache[key]


def predict(backend: PredictorBackend, image: np.ndarray, label_set: LabelSet) -> tuple[int, list[float]]:
    """Predicted label index and the per-label similarity scores.

    The index maximizes cosine similarity between the image embedding and
    each prompted label embedding; bit-equal ties go to the lowest index.
    """
    image_embedding = backend.embed_images([image])[0]
    scores = [cosine_sim(image_embedding, t) for t in backend.label_embeddings(label_set)]
    best = int(np.argmax(scores))
    return best, scores
