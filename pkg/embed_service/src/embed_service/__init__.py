"""HTTP inference server for contrastive image/text embeddings."""

from .app import create_app
from .encoders import ClipEncoder, Encoder, HashProjectionEncoder, make_encoder

__all__ = ["create_app", "Encoder", "HashProjectionEncoder", "ClipEncoder", "make_encoder"]

__version__ = "0.1.0"
