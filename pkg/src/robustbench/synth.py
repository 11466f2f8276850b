"""Procedural colored-shape datasets for demos and self-contained testing."""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

from .image import save_image
from .rng import derive_seed, generator

# Hues are distinct in chroma AND spread in luminance, so both color-based
# and grayscale-based classifiers have signal to work with.
SHAPE_COLORS: dict[str, tuple[int, int, int]] = {
    "blue": (30, 40, 150),
    "red": (220, 40, 40),
    "green": (70, 230, 90),
    "yellow": (235, 220, 60),
}

_SHAPES = ("circle", "square", "triangle")


def make_shape_image(class_name: str, size: int, seed: int) -> np.ndarray:
    """One image: a solidly colored shape on a textured gray background."""
    rng = generator(seed)
    base = SHAPE_COLORS[class_name]
    background = 128.0 + rng.standard_normal((size, size, 3)) * 8.0
    img = np.clip(np.rint(background), 0, 255).astype(np.uint8)

    color = tuple(
        int(np.clip(c + rng.uniform(-20, 20), 0, 255)) for c in base
    )
    shape = _SHAPES[int(rng.integers(0, len(_SHAPES)))]
    cx = int(rng.uniform(0.35, 0.65) * size)
    cy = int(rng.uniform(0.35, 0.65) * size)
    radius = int(rng.uniform(0.18, 0.3) * size)
    if shape == "circle":
        cv2.circle(img, (cx, cy), radius, color, -1, lineType=cv2.LINE_8)
    elif shape == "square":
        cv2.rectangle(img, (cx - radius, cy - radius), (cx + radius, cy + radius), color, -1)
    else:
        points = np.array(
            [(cx, cy - radius), (cx - radius, cy + radius), (cx + radius, cy + radius)],
            dtype=np.int32,
        )
        cv2.fillPoly(img, [points], color, lineType=cv2.LINE_8)
    return img


def make_shapes_dataset(
    out_dir: str | Path,
    classes: tuple[str, ...] = ("red", "green", "blue", "yellow"),
    n_per_class: int = 10,
    size: int = 64,
    seed: int = 0,
) -> Path:
    """Write a directory-per-class dataset of colored shapes; returns its root."""
    root = Path(out_dir)
    for class_name in classes:
        if class_name not in SHAPE_COLORS:
            raise ValueError(f"no color defined for class {class_name!r}")
        class_dir = root / class_name
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_class):
            img = make_shape_image(class_name, size, derive_seed("shapes", seed, class_name, i))
            save_image(img, class_dir / f"{class_name}_{i:03d}.png")
    return root
