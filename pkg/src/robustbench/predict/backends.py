"""Predictor backends: deterministic toy model, embedding replay, HTTP client."""

from __future__ import annotations

import base64
import json
from pathlib import Path

import cv2
import numpy as np

from ..errors import BackendUnavailable, DimensionMismatch, EmbeddingFailure
from ..image import content_hash, png_bytes, validate_image
from ..rng import derive_seed, generator
from .core import PredictorBackend

TOY_DIM = 32
_TOY_PATCH = 16  # toy feature = flattened grayscale downsample of this size


class ToyBackend(PredictorBackend):
    """Self-contained deterministic predictor for label-free CI.

    Text side: rows of a seeded random orthonormal matrix, one per label.
    Image side: a fixed seeded linear projection of the 16x16 grayscale
    downsample (plus a constant feature so uniform images stay nonzero).
    No semantics, but fully reproducible in (seed, input).
    """

    kind = "toy"

    def __init__(self, seed: int = 0, dim: int = TOY_DIM) -> None:
        super().__init__()
        if dim < 2:
            raise ValueError("toy dimension must be >= 2")
        self.seed = seed
        self.dim = dim
        self.model_id = f"toy-d{dim}-s{seed}"
        n_features = _TOY_PATCH * _TOY_PATCH + 2
        proj_rng = generator(derive_seed("toy-image-projection", seed, dim))
        self._projection = proj_rng.standard_normal((dim, n_features))
        text_rng = generator(derive_seed("toy-text-basis", seed, dim))
        q, _ = np.linalg.qr(text_rng.standard_normal((dim, dim)))
        self._text_basis = q.T

    def embed_images(self, images: list[np.ndarray]) -> list[np.ndarray]:
        out = []
        for img in images:
            validate_image(img)
            gray = img.astype(np.float32).mean(axis=2)
            patch = cv2.resize(gray, (_TOY_PATCH, _TOY_PATCH), interpolation=cv2.INTER_AREA)
            flat = patch.astype(np.float64).ravel() / 255.0
            mean = flat.mean()
            # Mean-centered texture plus explicit brightness and bias
            # features: structure drives the embedding, uniform images stay
            # apart, and nothing maps to the zero vector.
            features = np.concatenate([flat - mean, [mean, 1.0]])
            out.append(self._projection @ features)
        return out

    def embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        if len(texts) > self.dim:
            raise EmbeddingFailure(
                f"toy backend supports at most {self.dim} labels, got {len(texts)}"
            )
        # Label identity is positional: the i-th distinct text gets basis row i.
        return [self._text_basis[i].copy() for i in range(len(texts))]


class EmbedFileBackend(PredictorBackend):
    """Replays embeddings recorded in a JSONL file.

    Records are {key, kind: "image"|"text", dim, values}. Image keys are
    content hashes of the raw pixel buffer (see image.content_hash), text
    keys are the prompted strings verbatim, so replay is exact per
    corrupted variant.
    """

    kind = "embed_file"

    def __init__(self, path: str | Path) -> None:
        super().__init__()
        self.path = Path(path)
        self.model_id = f"embed-file:{self.path.name}"
        self._images: dict[str, np.ndarray] = {}
        self._texts: dict[str, np.ndarray] = {}
        self.dim = 0
        try:
            lines = self.path.read_text().splitlines()
        except OSError as exc:
            raise BackendUnavailable(f"cannot read embedding file {path}: {exc}") from exc
        for lineno, line in enumerate(lines, 1):
            if not line.strip():
                continue
            record = json.loads(line)
            values = np.asarray(record["values"], dtype=np.float64)
            if int(record["dim"]) != values.shape[0]:
                raise BackendUnavailable(f"{path}:{lineno}: dim field disagrees with values")
            if self.dim == 0:
                self.dim = values.shape[0]
            elif values.shape[0] != self.dim:
                raise DimensionMismatch(f"{path}:{lineno}: mixed embedding dimensions")
            table = self._images if record["kind"] == "image" else self._texts
            table[record["key"]] = values
        if self.dim == 0:
            raise BackendUnavailable(f"embedding file {path} holds no records")

    def embed_images(self, images: list[np.ndarray]) -> list[np.ndarray]:
        out = []
        for img in images:
            key = content_hash(img)
            if key not in self._images:
                raise EmbeddingFailure(f"no stored embedding for image {key[:16]}…")
            out.append(self._images[key].copy())
        return out

    def embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        out = []
        for text in texts:
            if text not in self._texts:
                raise EmbeddingFailure(f"no stored embedding for text {text!r}")
            out.append(self._texts[text].copy())
        return out


class HttpServiceBackend(PredictorBackend):
    """Client for the embedding-service protocol.

    POST /v1/embed/image {model, images: [base64 PNG]} -> {dim, embeddings}
    POST /v1/embed/text  {model, texts}               -> {dim, embeddings}
    GET  /v1/health                                    -> {status, model, dim}
    """

    kind = "http_service"

    def __init__(self, url: str, model: str | None = None, timeout: float = 60.0) -> None:
        super().__init__()
        import httpx

        self.url = url.rstrip("/")
        self.timeout = timeout
        self._client = httpx.Client(base_url=self.url, timeout=timeout)
        try:
            health = self._client.get("/v1/health")
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"embedding service unreachable at {url}: {exc}") from exc
        if health.status_code != 200:
            raise BackendUnavailable(f"embedding service not ready: HTTP {health.status_code}")
        info = health.json()
        self.model = model or info["model"]
        self.dim = int(info["dim"])
        self.resolution = info.get("resolution")
        self.model_id = f"http:{self.model}"

    def _post(self, endpoint: str, payload: dict) -> list[np.ndarray]:
        import httpx

        try:
            response = self._client.post(endpoint, json=payload)
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"embedding request failed: {exc}") from exc
        if response.status_code != 200:
            raise EmbeddingFailure(f"{endpoint} -> HTTP {response.status_code}: {response.text[:200]}")
        body = response.json()
        if int(body["dim"]) != self.dim:
            raise DimensionMismatch(
                f"service reported dim {body['dim']}, health said {self.dim}"
            )
        return [np.asarray(vec, dtype=np.float64) for vec in body["embeddings"]]

    def embed_images(self, images: list[np.ndarray]) -> list[np.ndarray]:
        encoded = [base64.b64encode(png_bytes(img)).decode("ascii") for img in images]
        return self._post("/v1/embed/image", {"model": self.model, "images": encoded})

    def embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        return self._post("/v1/embed/text", {"model": self.model, "texts": texts})

    def close(self) -> None:
        self._client.close()


def make_backend(descriptor: dict) -> PredictorBackend:
    """Build a backend from a config descriptor {kind, ...}."""
    kind = descriptor.get("kind")
    if kind == "toy":
        return ToyBackend(seed=int(descriptor.get("seed", 0)), dim=int(descriptor.get("d", TOY_DIM)))
    if kind == "embed_file":
        return EmbedFileBackend(descriptor["path"])
    if kind == "http_service":
        import os

        url = descriptor.get("url") or os.environ.get("RB_EMBED_URL")
        if not url:
            raise BackendUnavailable("http_service backend needs a url (or RB_EMBED_URL)")
        return HttpServiceBackend(url, model=descriptor.get("model"))
    raise BackendUnavailable(f"unknown backend kind: {kind!r}")
