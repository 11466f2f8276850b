"""Seeded, dimension-preserving image corruptions with graded severities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..errors import InvalidParams, UnknownKind
from ..rng import MASK64, derive_seed, generator
from .catalog import KIND_NAMES, CorruptionKind, catalog, is_known_kind, kind_by_name
from .grids import Params, SeverityGrid, severity_grid
from .transforms import run_transform

__all__ = [
    "CorruptionKind",
    "CorruptionInstance",
    "SeverityGrid",
    "KIND_NAMES",
    "IDENTITY_KINDS",
    "catalog",
    "kind_by_name",
    "is_known_kind",
    "severity_grid",
    "apply",
    "sample_instance",
    "instance_for_level",
    "identity_instance",
]


@dataclass(frozen=True)
class CorruptionInstance:
    """A corruption kind with fully bound parameters and a severity index."""

    kind: str
    severity_index: int
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if not is_known_kind(self.kind):
            raise UnknownKind(f"unknown corruption kind: {self.kind!r}")
        if self.severity_index < 0:
            raise InvalidParams(f"severity_index must be >= 0, got {self.severity_index}")
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "seed", self.seed & MASK64)


def apply(image: np.ndarray, inst: CorruptionInstance) -> np.ndarray:
    """Corrupt an image; pure in (image, kind, params, seed)."""
    return run_transform(image, inst.kind, inst.params, inst.seed)


def instance_for_level(kind: str, severity_index: int, seed: int, grid: SeverityGrid | None = None) -> CorruptionInstance:
    """Bind one grid level into an instance."""
    grid = grid if grid is not None else severity_grid(kind)
    if not 0 <= severity_index < len(grid):
        raise InvalidParams(
            f"{kind} severity_index {severity_index} outside grid of length {len(grid)}"
        )
    return CorruptionInstance(kind, severity_index, grid.levels[severity_index], seed)


def sample_instance(kind: str, rng_seed: int) -> CorruptionInstance:
    """Draw a severity level uniformly and bind its params, deterministically.

    The instance seed is derived from rng_seed, so the same rng_seed always
    yields the same instance, including its stochastic effects.
    """
    grid = severity_grid(kind)
    rng = generator(rng_seed)
    severity_index = int(rng.integers(0, len(grid)))
    return instance_for_level(kind, severity_index, derive_seed("instance", kind, rng_seed), grid)


def identity_instance(kind: str) -> CorruptionInstance:
    """An instance whose parameters leave the image untouched.

    Only defined for kinds with an identity setting; raises InvalidParams
    for kinds that always alter the image (flips, warps, weather).
    """
    identity_params: dict[str, Params] = {
        "Brightness": {"factor": 1.0},
        "Contrast": {"factor": 1.0},
        "ImageRotation": {"degrees": 0.0},
        "GlobalColourShift": {"shift": (0, 0, 0)},
        "GaussianNoise": {"sigma": 0.0},
        "SaltPepperNoise": {"density": 0.0},
        "GaussianBlur": {"sigma": 0.0},
        "MotionBlur": {"length": 0},
    }
    if kind not in identity_params:
        kind_by_name(kind)
        raise InvalidParams(f"{kind} has no identity parameterization")
    return CorruptionInstance(kind, 0, identity_params[kind], 0)


IDENTITY_KINDS: tuple[str, ...] = (
    "Brightness",
    "Contrast",
    "ImageRotation",
    "GlobalColourShift",
    "GaussianNoise",
    "SaltPepperNoise",
    "GaussianBlur",
    "MotionBlur",
)
