"""8-bit RGB raster images and their IO.

Images are numpy arrays of shape (height, width, 3), dtype uint8, row-major.
Every transform in this package both expects and returns this layout.
"""

from __future__ import annotations

import hashlib
import io
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import Unreadable


def validate_image(img: np.ndarray) -> np.ndarray:
    """Check the (H, W, 3) uint8 contract and return the array unchanged."""
    if not isinstance(img, np.ndarray):
        raise TypeError(f"expected numpy array, got {type(img).__name__}")
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected shape (H, W, 3), got {img.shape}")
    if img.dtype != np.uint8:
        raise ValueError(f"expected dtype uint8, got {img.dtype}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"degenerate image size {img.shape[:2]}")
    return img


def load_image(path: str | Path) -> np.ndarray:
    """Decode a PNG/JPEG file to (H, W, 3) uint8."""
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError:
        raise Unreadable(f"no such image file: {path}") from None
    except OSError as exc:
        raise Unreadable(f"cannot decode {path}: {exc}") from exc


def save_image(img: np.ndarray, path: str | Path) -> None:
    """Write an image; the format follows the file extension."""
    validate_image(img)
    Image.fromarray(img, mode="RGB").save(path)


def png_bytes(img: np.ndarray) -> bytes:
    """Lossless PNG encoding of an image."""
    validate_image(img)
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def content_hash(img: np.ndarray) -> str:
    """Hex digest of the raw pixel buffer plus dimensions.

    Codec-independent, so embedding replay files keyed by this hash survive
    re-encoding of the corrupted images.
    """
    validate_image(img)
    h = hashlib.sha256()
    h.update(f"{img.shape[0]}x{img.shape[1]}".encode())
    h.update(np.ascontiguousarray(img).tobytes())
    return h.hexdigest()


def to_float(img: np.ndarray) -> np.ndarray:
    return img.astype(np.float64)


def to_uint8(arr: np.ndarray) -> np.ndarray:
    """Round and clamp a float array back to the uint8 pixel range."""
    return np.clip(np.rint(arr), 0, 255).astype(np.uint8)
