"""The corruption transforms.

Every transform is a pure function of (image, params, seed): identical
inputs give byte-identical outputs, dimensions are preserved, and channel
values stay in [0, 255]. Geometric warps interpolate bilinearly and fill
out-of-frame samples by edge replication, so no artificial border enters
the frame as a second corruption. Stochastic effects draw exclusively from
a Philox generator keyed by the instance seed.

Identity settings (brightness/contrast factor 1, rotation 0 degrees, zero
noise, zero shift, zero-length blur) return the input unchanged.
"""

from __future__ import annotations

from typing import Any, Callable, Mapping

import cv2
import numpy as np

from ..errors import InvalidParams, UnknownKind
from ..image import to_float, to_uint8, validate_image
from ..rng import generator
from .catalog import is_known_kind

GRID_CELLS = 8  # control grid for the two grid warps: 8x8 cells, 9x9 nodes

_WARP_FLAGS = cv2.INTER_LINEAR
_WARP_BORDER = cv2.BORDER_REPLICATE


# --- photometric ----------------------------------------------------------


def brightness(img: np.ndarray, factor: float, seed: int = 0) -> np.ndarray:
    if factor == 1.0:
        return img.copy()
    return to_uint8(to_float(img) * factor)


def contrast(img: np.ndarray, factor: float, seed: int = 0) -> np.ndarray:
    if factor == 1.0:
        return img.copy()
    gray = cv2.cvtColor(img, cv2.COLOR_RGB2GRAY)
    pivot = float(gray.mean())
    return to_uint8((to_float(img) - pivot) * factor + pivot)


def global_colour_shift(img: np.ndarray, shift: tuple[float, float, float], seed: int = 0) -> np.ndarray:
    if tuple(shift) == (0, 0, 0):
        return img.copy()
    offset = np.asarray(shift, dtype=np.float64).reshape(1, 1, 3)
    return to_uint8(to_float(img) + offset)


# --- noise ----------------------------------------------------------------


def gaussian_noise(img: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    if sigma == 0:
        return img.copy()
    rng = generator(seed)
    noise = rng.standard_normal(img.shape) * sigma
    return to_uint8(to_float(img) + noise)


def salt_pepper_noise(img: np.ndarray, density: float, seed: int) -> np.ndarray:
    if density == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    hit = rng.random((h, w)) < density
    salt = rng.random((h, w)) < 0.5
    out = img.copy()
    out[hit & salt] = 255
    out[hit & ~salt] = 0
    return out


# --- blur -----------------------------------------------------------------


def gaussian_blur(img: np.ndarray, sigma: float, seed: int = 0) -> np.ndarray:
    if sigma == 0:
        return img.copy()
    return cv2.GaussianBlur(img, (0, 0), sigmaX=sigma, borderType=cv2.BORDER_REPLICATE)


def motion_blur(img: np.ndarray, length: int, seed: int = 0) -> np.ndarray:
    if length in (0, 1):
        return img.copy()
    kernel = np.full((1, int(length)), 1.0 / length, dtype=np.float64)
    return cv2.filter2D(img, -1, kernel, borderType=cv2.BORDER_REPLICATE)


# --- geometry -------------------------------------------------------------


def flip_horizontal(img: np.ndarray, seed: int = 0) -> np.ndarray:
    return np.flip(img, axis=1).copy()


def flip_vertical(img: np.ndarray, seed: int = 0) -> np.ndarray:
    return np.flip(img, axis=0).copy()


def rotation(img: np.ndarray, degrees: float, seed: int = 0) -> np.ndarray:
    if degrees % 360 == 0:
        return img.copy()
    h, w = img.shape[:2]
    center = ((w - 1) / 2.0, (h - 1) / 2.0)
    matrix = cv2.getRotationMatrix2D(center, degrees, 1.0)
    return cv2.warpAffine(img, matrix, (w, h), flags=_WARP_FLAGS, borderMode=_WARP_BORDER)


def perspective(img: np.ndarray, magnitude: float, seed: int) -> np.ndarray:
    if magnitude == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    limit = magnitude * min(w, h)
    src = np.array([[0, 0], [w - 1, 0], [w - 1, h - 1], [0, h - 1]], dtype=np.float32)
    dst = src + rng.uniform(-limit, limit, size=(4, 2)).astype(np.float32)
    matrix = cv2.getPerspectiveTransform(src, dst)
    return cv2.warpPerspective(img, matrix, (w, h), flags=_WARP_FLAGS, borderMode=_WARP_BORDER)


def grid_distortion(img: np.ndarray, magnitude: float, seed: int) -> np.ndarray:
    if magnitude == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    nodes = GRID_CELLS + 1
    node_x = np.linspace(0, w - 1, nodes)
    node_y = np.linspace(0, h - 1, nodes)
    off_x = rng.uniform(-magnitude, magnitude, size=nodes)
    off_y = rng.uniform(-magnitude, magnitude, size=nodes)
    map_x_1d = (np.arange(w) + np.interp(np.arange(w), node_x, off_x)).astype(np.float32)
    map_y_1d = (np.arange(h) + np.interp(np.arange(h), node_y, off_y)).astype(np.float32)
    map_x = np.tile(map_x_1d, (h, 1))
    map_y = np.tile(map_y_1d[:, None], (1, w))
    return cv2.remap(img, map_x, map_y, interpolation=_WARP_FLAGS, borderMode=_WARP_BORDER)


def grid_elastic_deformation(img: np.ndarray, magnitude: float, seed: int) -> np.ndarray:
    if magnitude == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    nodes = GRID_CELLS + 1
    field = rng.uniform(-magnitude, magnitude, size=(nodes, nodes, 2)).astype(np.float32)
    dx = cv2.resize(field[:, :, 0], (w, h), interpolation=cv2.INTER_CUBIC)
    dy = cv2.resize(field[:, :, 1], (w, h), interpolation=cv2.INTER_CUBIC)
    xs, ys = np.meshgrid(np.arange(w, dtype=np.float32), np.arange(h, dtype=np.float32))
    return cv2.remap(img, xs + dx, ys + dy, interpolation=_WARP_FLAGS, borderMode=_WARP_BORDER)


# --- synthetic weather ----------------------------------------------------


def shadow(img: np.ndarray, opacity: float, seed: int) -> np.ndarray:
    if opacity == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    n_vertices = int(rng.integers(4, 7))
    cx = rng.uniform(0, w)
    cy = rng.uniform(0, h)
    radius = rng.uniform(0.25, 0.6) * min(w, h) + 1.0
    angles = np.sort(rng.uniform(0, 2 * np.pi, size=n_vertices))
    poly = np.stack([cx + radius * np.cos(angles), cy + radius * np.sin(angles)], axis=1)
    mask = np.zeros((h, w), dtype=np.uint8)
    cv2.fillPoly(mask, [np.round(poly).astype(np.int32)], 1)
    darkened = to_float(img) * (1.0 - opacity)
    out = np.where(mask[:, :, None] == 1, darkened, to_float(img))
    return to_uint8(out)


def rain(img: np.ndarray, density: float, seed: int) -> np.ndarray:
    if density == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    n_streaks = max(1, int(round(density * w * h / 100.0)))
    slant = rng.uniform(-0.3, 0.3)
    mask = np.zeros((h, w), dtype=np.uint8)
    for _ in range(n_streaks):
        x0 = int(rng.integers(0, w))
        y0 = int(rng.integers(0, h))
        length = max(2, int(rng.uniform(0.06, 0.12) * h))
        x1 = int(round(x0 + slant * length))
        y1 = y0 + length
        cv2.line(mask, (x0, y0), (x1, y1), 1, 1)
    streak = np.full(3, 220.0)
    alpha = 0.6 * mask[:, :, None]
    out = to_float(img) * (1.0 - alpha) + streak * alpha
    return to_uint8(out)


def cloud_generator(img: np.ndarray, opacity: float, seed: int) -> np.ndarray:
    if opacity == 0:
        return img.copy()
    rng = generator(seed)
    h, w = img.shape[:2]
    field = np.zeros((h, w), dtype=np.float32)
    total = 0.0
    for octave in range(4):
        cells = 4 * 2**octave
        weight = 0.5**octave
        layer = rng.random((cells, cells), dtype=np.float32)
        field += weight * cv2.resize(layer, (w, h), interpolation=cv2.INTER_CUBIC)
        total += weight
    field /= total
    lo, hi = float(field.min()), float(field.max())
    if hi > lo:
        field = (field - lo) / (hi - lo)
    blend = opacity * np.clip(field, 0.0, 1.0)[:, :, None]
    out = to_float(img) * (1.0 - blend) + 255.0 * blend
    return to_uint8(out)


# --- dispatch -------------------------------------------------------------


def _as_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParams(f"{name} must be a number, got {value!r}")
    return float(value)


def _in_range(value: float, lo: float, hi: float, name: str) -> float:
    if not lo <= value <= hi:
        raise InvalidParams(f"{name}={value} outside declared range [{lo}, {hi}]")
    return value


def _check_shift(params: Mapping[str, Any]) -> dict:
    shift = params.get("shift")
    if shift is None or len(tuple(shift)) != 3:
        raise InvalidParams(f"shift must be a 3-channel offset, got {shift!r}")
    values = tuple(_in_range(_as_number(c, "shift channel"), -255, 255, "shift channel") for c in shift)
    return {"shift": values}


def _scalar_schema(key: str, lo: float, hi: float, integral: bool = False) -> Callable[[Mapping[str, Any]], dict]:
    def check(params: Mapping[str, Any]) -> dict:
        if key not in params:
            raise InvalidParams(f"missing required parameter {key!r}")
        value = _in_range(_as_number(params[key], key), lo, hi, key)
        if integral:
            if value != int(value):
                raise InvalidParams(f"{key} must be an integer, got {value}")
            return {key: int(value)}
        return {key: value}

    return check


def _no_params(params: Mapping[str, Any]) -> dict:
    if params:
        raise InvalidParams(f"flip takes no parameters, got {dict(params)!r}")
    return {}


_TRANSFORMS: dict[str, tuple[Callable[..., np.ndarray], Callable[[Mapping[str, Any]], dict]]] = {
    "Shadow": (lambda img, p, s: shadow(img, p["opacity"], s), _scalar_schema("opacity", 0, 1)),
    "PerspectiveTransformation": (
        lambda img, p, s: perspective(img, p["magnitude"], s),
        _scalar_schema("magnitude", 0, 0.4),
    ),
    "GridDistortion": (
        lambda img, p, s: grid_distortion(img, p["magnitude"], s),
        _scalar_schema("magnitude", 0, 64),
    ),
    "ImageFlipHorizontal": (lambda img, p, s: flip_horizontal(img, s), _no_params),
    "ImageFlipVertical": (lambda img, p, s: flip_vertical(img, s), _no_params),
    "SaltPepperNoise": (
        lambda img, p, s: salt_pepper_noise(img, p["density"], s),
        _scalar_schema("density", 0, 1),
    ),
    "Contrast": (lambda img, p, s: contrast(img, p["factor"], s), _scalar_schema("factor", 0, 10)),
    "Brightness": (lambda img, p, s: brightness(img, p["factor"], s), _scalar_schema("factor", 0, 10)),
    "ImageRotation": (
        lambda img, p, s: rotation(img, p["degrees"], s),
        _scalar_schema("degrees", -180, 180),
    ),
    "GaussianNoise": (
        lambda img, p, s: gaussian_noise(img, p["sigma"], s),
        _scalar_schema("sigma", 0, 128),
    ),
    "GridElasticDeformation": (
        lambda img, p, s: grid_elastic_deformation(img, p["magnitude"], s),
        _scalar_schema("magnitude", 0, 64),
    ),
    "MotionBlur": (
        lambda img, p, s: motion_blur(img, p["length"], s),
        _scalar_schema("length", 0, 101, integral=True),
    ),
    "GaussianBlur": (
        lambda img, p, s: gaussian_blur(img, p["sigma"], s),
        _scalar_schema("sigma", 0, 32),
    ),
    "GlobalColourShift": (
        lambda img, p, s: global_colour_shift(img, p["shift"], s),
        _check_shift,
    ),
    "Rain": (lambda img, p, s: rain(img, p["density"], s), _scalar_schema("density", 0, 1)),
    "CloudGenerator": (
        lambda img, p, s: cloud_generator(img, p["opacity"], s),
        _scalar_schema("opacity", 0, 1),
    ),
}


def validate_params(kind: str, params: Mapping[str, Any]) -> dict:
    """Normalize and range-check params for a kind."""
    if not is_known_kind(kind):
        raise UnknownKind(f"unknown corruption kind: {kind!r}")
    _, schema = _TRANSFORMS[kind]
    return schema(params)


def run_transform(img: np.ndarray, kind: str, params: Mapping[str, Any], seed: int) -> np.ndarray:
    """Apply one corruption; img must satisfy the raster contract."""
    validate_image(img)
    checked = validate_params(kind, params)
    fn, _ = _TRANSFORMS[kind]
    out = fn(img, checked, seed)
    assert out.shape == img.shape and out.dtype == np.uint8
    return out
