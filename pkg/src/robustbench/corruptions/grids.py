"""Default severity grids: the graded parameter levels per corruption kind.

Levels are ordered mild to severe. Each grid declares an `intensities`
vector, the scalar ordering key for its levels: the absolute deviation from
the identity setting for photometric factors (linear for brightness,
logarithmic for contrast), the parameter magnitude elsewhere. Signed
variants of the same magnitude (rotation) sit adjacent, positive first,
so intensities are nondecreasing and params pairwise distinct.

The two flips carry a single level: mirroring has no intensity axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

from .catalog import kind_by_name

Params = Mapping[str, Any]


@dataclass(frozen=True)
class SeverityGrid:
    kind: str
    levels: tuple[Params, ...]
    intensities: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.intensities):
            raise ValueError("levels and intensities must align")

    def __len__(self) -> int:
        return len(self.levels)


def _grid(kind: str, levels: list[dict], intensities: list[float]) -> SeverityGrid:
    frozen = tuple(dict(p) for p in levels)
    return SeverityGrid(kind, frozen, tuple(float(i) for i in intensities))


_BRIGHTNESS_FACTORS = [0.8, 1.25, 0.5, 0.2, 2.0, 5.0]
_CONTRAST_FACTORS = [0.8, 1.5, 0.5, 2.5, 0.2]
_ROTATION_DEGREES = [5, -5, 15, -15, 30, -30, 60, -60, 90, -90]

_DEFAULT_GRIDS: dict[str, SeverityGrid] = {
    "Shadow": _grid(
        "Shadow",
        [{"opacity": o} for o in (0.2, 0.35, 0.5, 0.65, 0.8)],
        [0.2, 0.35, 0.5, 0.65, 0.8],
    ),
    "PerspectiveTransformation": _grid(
        "PerspectiveTransformation",
        [{"magnitude": m} for m in (0.02, 0.05, 0.10, 0.15, 0.20)],
        [0.02, 0.05, 0.10, 0.15, 0.20],
    ),
    "GridDistortion": _grid(
        "GridDistortion",
        [{"magnitude": m} for m in (2.0, 4.0, 8.0, 12.0, 16.0)],
        [2, 4, 8, 12, 16],
    ),
    "ImageFlipHorizontal": _grid("ImageFlipHorizontal", [{}], [1.0]),
    "ImageFlipVertical": _grid("ImageFlipVertical", [{}], [1.0]),
    "SaltPepperNoise": _grid(
        "SaltPepperNoise",
        [{"density": d} for d in (0.01, 0.03, 0.07, 0.12, 0.2)],
        [0.01, 0.03, 0.07, 0.12, 0.2],
    ),
    "Contrast": _grid(
        "Contrast",
        [{"factor": f} for f in _CONTRAST_FACTORS],
        [abs(math.log(f)) for f in _CONTRAST_FACTORS],
    ),
    "Brightness": _grid(
        "Brightness",
        [{"factor": f} for f in _BRIGHTNESS_FACTORS],
        [abs(f - 1.0) for f in _BRIGHTNESS_FACTORS],
    ),
    "ImageRotation": _grid(
        "ImageRotation",
        [{"degrees": float(d)} for d in _ROTATION_DEGREES],
        [abs(d) for d in _ROTATION_DEGREES],
    ),
    "GaussianNoise": _grid(
        "GaussianNoise",
        [{"sigma": s} for s in (5.0, 10.0, 20.0, 35.0, 50.0)],
        [5, 10, 20, 35, 50],
    ),
    "GridElasticDeformation": _grid(
        "GridElasticDeformation",
        [{"magnitude": m} for m in (2.0, 4.0, 8.0, 12.0, 16.0)],
        [2, 4, 8, 12, 16],
    ),
    "MotionBlur": _grid(
        "MotionBlur",
        [{"length": n} for n in (3, 7, 11, 17, 25)],
        [3, 7, 11, 17, 25],
    ),
    "GaussianBlur": _grid(
        "GaussianBlur",
        [{"sigma": s} for s in (0.5, 1.0, 2.0, 4.0, 8.0)],
        [0.5, 1.0, 2.0, 4.0, 8.0],
    ),
    "GlobalColourShift": _grid(
        "GlobalColourShift",
        [{"shift": (m, 0, -m)} for m in (8, 16, 32, 48, 64)],
        [8, 16, 32, 48, 64],
    ),
    "Rain": _grid(
        "Rain",
        [{"density": d} for d in (0.05, 0.1, 0.2, 0.35, 0.5)],
        [0.05, 0.1, 0.2, 0.35, 0.5],
    ),
    "CloudGenerator": _grid(
        "CloudGenerator",
        [{"opacity": o} for o in (0.2, 0.35, 0.5, 0.65, 0.8)],
        [0.2, 0.35, 0.5, 0.65, 0.8],
    ),
}


def severity_grid(kind: str) -> SeverityGrid:
    """Default grid for a catalog kind; raises UnknownKind otherwise."""
    kind_by_name(kind)
    return _DEFAULT_GRIDS[kind]
