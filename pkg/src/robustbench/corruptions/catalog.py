"""The closed catalog of the 16 supported image corruptions.

Names and one-line descriptions are fixed: they are the exact strings a
planning prompt presents to the language model, so they must never drift
from what the prompt builder emits.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnknownKind


@dataclass(frozen=True)
class CorruptionKind:
    name: str
    description: str


_CATALOG: tuple[CorruptionKind, ...] = (
    CorruptionKind(
        "Shadow",
        "Adds synthetic shadows to an image to simulate lighting conditions.",
    ),
    CorruptionKind(
        "PerspectiveTransformation",
        "Warps the image by changing its perspective, as if viewed from a different angle.",
    ),
    CorruptionKind(
        "GridDistortion",
        "Distorts the image by applying a grid-like warping effect, bending specific areas.",
    ),
    CorruptionKind(
        "ImageFlipHorizontal",
        "Flips the image along the vertical axis, mirroring it horizontally.",
    ),
    CorruptionKind(
        "ImageFlipVertical",
        "Flips the image along the horizontal axis, mirroring it vertically.",
    ),
    CorruptionKind(
        "SaltPepperNoise",
        "Adds random white and black dots to the image, mimicking noisy pixels.",
    ),
    CorruptionKind(
        "Contrast",
        "Alters the difference between light and dark areas to make the image appear more or less vivid.",
    ),
    CorruptionKind(
        "Brightness",
        "Changes the overall lightness or darkness of the image.",
    ),
    CorruptionKind(
        "ImageRotation",
        "Rotates the image by a specified angle, keeping its contents intact.",
    ),
    CorruptionKind(
        "GaussianNoise",
        "Adds random, fine-grained noise following a Gaussian distribution to simulate sensor noise.",
    ),
    CorruptionKind(
        "GridElasticDeformation",
        "Applies a rubber-sheet-like deformation to the image, bending it smoothly.",
    ),
    CorruptionKind(
        "MotionBlur",
        "Blurs the image to simulate movement, as if the camera or object was in motion.",
    ),
    CorruptionKind(
        "GaussianBlur",
        "Smoothens the image by blurring it, reducing fine details or noise.",
    ),
    CorruptionKind(
        "GlobalColourShift",
        "Adjusts the overall color balance of the image, shifting its tones globally.",
    ),
    CorruptionKind(
        "Rain",
        "Adds synthetic raindrop effects or streaks to mimic rainy conditions.",
    ),
    CorruptionKind(
        "CloudGenerator",
        "Overlays or generates cloud-like textures in the image, simulating an overcast sky.",
    ),
)

_BY_NAME = {k.name: k for k in _CATALOG}

KIND_NAMES: tuple[str, ...] = tuple(k.name for k in _CATALOG)


def catalog() -> list[CorruptionKind]:
    """All 16 corruption kinds, in catalog order."""
    return list(_CATALOG)


def kind_by_name(name: str) -> CorruptionKind:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownKind(f"unknown corruption kind: {name!r}") from None


def is_known_kind(name: str) -> bool:
    return name in _BY_NAME
