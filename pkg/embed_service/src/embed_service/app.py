"""The embedding service HTTP app.

Protocol:
  GET  /v1/health                      -> {status, model, dim, resolution}
  POST /v1/embed/image {model, images} -> {dim, embeddings}   (base64 PNGs)
  POST /v1/embed/text  {model, texts}  -> {dim, embeddings}

One model per process. 503 until the model finished loading, 404 for a
model name other than the loaded one, 400 for undecodable or empty input.
Batch order is preserved: embeddings[i] belongs to input i.
"""

from __future__ import annotations

import base64
import binascii
import io
import threading

from fastapi import FastAPI, HTTPException
from PIL import Image, UnidentifiedImageError
from pydantic import BaseModel

from .encoders import Encoder


class ImageRequest(BaseModel):
    model: str
    images: list[str]


class TextRequest(BaseModel):
    model: str
    texts: list[str]


class EmbeddingResponse(BaseModel):
    dim: int
    embeddings: list[list[float]]


class _State:
    def __init__(self, encoder: Encoder) -> None:
        self.encoder = encoder
        self.ready = threading.Event()
        self.error: str | None = None
        self.lock = threading.Lock()  # inference serialized per device

    def load(self) -> None:
        try:
            self.encoder.load()
        except Exception as exc:  # surface load failures through /v1/health
            self.error = str(exc)
        finally:
            self.ready.set()


def _decode_image(encoded: str, index: int) -> Image.Image:
    try:
        raw = base64.b64decode(encoded, validate=True)
    except (binascii.Error, ValueError):
        raise HTTPException(status_code=400, detail=f"images[{index}]: invalid base64")
    try:
        image = Image.open(io.BytesIO(raw))
        image.load()
        return image
    except (UnidentifiedImageError, OSError):
        raise HTTPException(status_code=400, detail=f"images[{index}]: undecodable image")


def create_app(encoder: Encoder, load_async: bool = False) -> FastAPI:
    """Build the app around one encoder.

    With load_async the model loads in a background thread and /v1/health
    reports 503 until it is ready; otherwise loading happens here, before
    the first request can arrive.
    """
    app = FastAPI(title="embed-service")
    state = _State(encoder)
    app.state.encoder_state = state
    if load_async:
        threading.Thread(target=state.load, daemon=True).start()
    else:
        state.load()

    def require_ready() -> None:
        if not state.ready.is_set():
            raise HTTPException(status_code=503, detail="model loading")
        if state.error is not None:
            raise HTTPException(status_code=503, detail=f"model failed to load: {state.error}")

    def require_model(name: str) -> None:
        if name != encoder.name:
            raise HTTPException(
                status_code=404, detail=f"unknown model {name!r}; serving {encoder.name!r}"
            )

    @app.get("/v1/health")
    def health():
        if not state.ready.is_set():
            raise HTTPException(status_code=503, detail="model loading")
        if state.error is not None:
            raise HTTPException(status_code=503, detail=f"model failed to load: {state.error}")
        return {
            "status": "ok",
            "model": encoder.name,
            "dim": encoder.dim,
            "resolution": encoder.resolution,
        }

    @app.post("/v1/embed/image", response_model=EmbeddingResponse)
    def embed_image(request: ImageRequest):
        require_ready()
        require_model(request.model)
        if not request.images:
            raise HTTPException(status_code=400, detail="images list is empty")
        decoded = [_decode_image(item, i) for i, item in enumerate(request.images)]
        with state.lock:
            embeddings = state.encoder.embed_images(decoded)
        return {"dim": encoder.dim, "embeddings": embeddings}

    @app.post("/v1/embed/text", response_model=EmbeddingResponse)
    def embed_text(request: TextRequest):
        require_ready()
        require_model(request.model)
        if not request.texts:
            raise HTTPException(status_code=400, detail="texts list is empty")
        with state.lock:
            embeddings = state.encoder.embed_texts(request.texts)
        return {"dim": encoder.dim, "embeddings": embeddings}

    return app
