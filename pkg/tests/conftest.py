from __future__ import annotations

import numpy as np
import pytest

from robustbench.synth import make_shapes_dataset

SHAPE_CLASSES = ("blue", "green", "red", "yellow")  # manifest order is sorted


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_image(rng) -> np.ndarray:
    return rng.integers(0, 256, (48, 64, 3), dtype=np.uint8)


@pytest.fixture(scope="session")
def shapes_dataset(tmp_path_factory) -> str:
    """40-sample, 4-class colored-shapes dataset shared across tests."""
    root = tmp_path_factory.mktemp("shapes")
    make_shapes_dataset(root, SHAPE_CLASSES, n_per_class=10, size=64, seed=0)
    return str(root)
