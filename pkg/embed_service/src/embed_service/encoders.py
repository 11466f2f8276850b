"""Embedding encoders behind the service.

Two families: `dev-hash-<dim>` is a dependency-free deterministic encoder
for protocol testing and local development; anything else is treated as a
contrastive VLM checkpoint id loaded through `transformers` (CLIP-style
models with separate image/text towers projecting into one space).
"""

from __future__ import annotations

import hashlib
import re

import numpy as np
from PIL import Image


class EncoderError(Exception):
    pass


class Encoder:
    """One loaded model: fixed name, embedding dim, and input resolution."""

    name: str = ""
    dim: int = 0
    resolution: int = 0

    def load(self) -> None:
        """Heavyweight initialization; runs once before serving."""

    def embed_images(self, images: list[Image.Image]) -> list[list[float]]:
        raise NotImplementedError

    def embed_texts(self, texts: list[str]) -> list[list[float]]:
        raise NotImplementedError


class HashProjectionEncoder(Encoder):
    """Deterministic stand-in encoder, no model weights required.

    Images map through a fixed seeded linear projection of their RGB
    downsample; texts map to vectors seeded by their BLAKE2b digest. Not
    semantically meaningful, but stable across processes and platforms,
    which is exactly what the protocol contract tests need.
    """

    def __init__(self, dim: int = 64) -> None:
        if dim < 2:
            raise EncoderError("dev-hash dim must be >= 2")
        self.name = f"dev-hash-{dim}"
        self.dim = dim
        self.resolution = 32

    def load(self) -> None:
        n_features = self.resolution * self.resolution * 3 + 1
        rng = np.random.Generator(np.random.Philox(key=0xE3BEDD ^ self.dim))
        self._projection = rng.standard_normal((self.dim, n_features))

    def embed_images(self, images: list[Image.Image]) -> list[list[float]]:
        out = []
        for image in images:
            small = image.convert("RGB").resize((self.resolution, self.resolution), Image.BILINEAR)
            flat = np.asarray(small, dtype=np.float64).ravel() / 255.0
            features = np.append(flat, 1.0)
            out.append((self._projection @ features).tolist())
        return out

    def embed_texts(self, texts: list[str]) -> list[list[float]]:
        out = []
        for text in texts:
            digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
            rng = np.random.Generator(np.random.Philox(key=int.from_bytes(digest, "big")))
            out.append(rng.standard_normal(self.dim).tolist())
        return out


class ClipEncoder(Encoder):
    """A contrastive VLM checkpoint served through transformers.

    Inference runs in eval mode under no_grad, so outputs are deterministic
    for a fixed checkpoint and device.
    """

    def __init__(self, checkpoint: str, device: str = "cpu") -> None:
        self.name = checkpoint
        self.device = device
        self.dim = 0
        self.resolution = 0

    def load(self) -> None:
        try:
            import torch
            from transformers import AutoModel, AutoProcessor
        except ImportError as exc:
            raise EncoderError(
                "checkpoint encoders need the [clip] extra (torch + transformers)"
            ) from exc
        self._torch = torch
        self._model = AutoModel.from_pretrained(self.name).to(self.device).eval()
        self._processor = AutoProcessor.from_pretrained(self.name)
        self.dim = int(self._model.config.projection_dim)
        size = getattr(self._processor, "image_processor", self._processor).size
        self.resolution = int(size.get("shortest_edge") or size.get("height") or 224)

    def embed_images(self, images: list[Image.Image]) -> list[list[float]]:
        inputs = self._processor(images=[im.convert("RGB") for im in images], return_tensors="pt")
        inputs = {k: v.to(self.device) for k, v in inputs.items()}
        with self._torch.no_grad():
            features = self._model.get_image_features(**inputs)
        return features.cpu().double().numpy().tolist()

    def embed_texts(self, texts: list[str]) -> list[list[float]]:
        inputs = self._processor(text=texts, return_tensors="pt", padding=True, truncation=True)
        inputs = {k: v.to(self.device) for k, v in inputs.items()}
        with self._torch.no_grad():
            features = self._model.get_text_features(**inputs)
        return features.cpu().double().numpy().tolist()


_DEV_HASH = re.compile(r"^dev-hash-(\d+)$")


def make_encoder(model_name: str, device: str = "cpu") -> Encoder:
    match = _DEV_HASH.match(model_name)
    if match:
        return HashProjectionEncoder(dim=int(match.group(1)))
    return ClipEncoder(model_name, device=device)
