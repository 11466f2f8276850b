"""Shared test fixtures: synthetic backends and transcript builders."""

from __future__ import annotations

import hashlib
from pathlib import Path

import cv2
import numpy as np

from robustbench.predict import PredictorBackend
from robustbench.synth import SHAPE_COLORS


def _hash_unit(img: np.ndarray, salt: str) -> float:
    digest = hashlib.blake2b(
        salt.encode() + img.tobytes(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big") / 2**64


class FragileBackend(PredictorBackend):
    """Synthetic predictor that degrades with corruption intensity.

    Classifies by projecting the image's mean-color deviation onto the
    class color prototypes; on clean inputs the margin between the top two
    classes is comfortably wide. Corruption shrinks that margin (color
    dilution, saturation) or inflates the high-frequency penalty (noise),
    and once the effective margin drops, predictions deterministically
    scramble to a wrong class with probability rising to one. Entirely a
    function of the image bytes, so runs are reproducible.
    """

    kind = "synthetic-fragile"

    def __init__(
        self,
        classes: tuple[str, ...],
        margin_full: float = 10.0,
        margin_width: float = 10.0,
        hf_baseline: float = 6.0,
        hf_weight: float = 6.0,
        gray_baseline: float = 12.0,
        gray_weight: float = 4.0,
    ) -> None:
        super().__init__()
        self.model_id = "synthetic-fragile"
        self.dim = len(classes)
        prototypes = np.array([SHAPE_COLORS[c] for c in classes], dtype=np.float64) - 128.0
        prototypes -= prototypes.mean(axis=1, keepdims=True)  # chroma only
        self._prototypes = prototypes / np.linalg.norm(prototypes, axis=1, keepdims=True)
        self._margin_full = margin_full
        self._margin_width = margin_width
        self._hf_baseline = hf_baseline
        self._hf_weight = hf_weight
        self._gray_baseline = gray_baseline
        self._gray_weight = gray_weight

    def embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        return [np.eye(self.dim)[i] for i in range(len(texts))]

    def _effective_margin(self, img: np.ndarray) -> tuple[int, float]:
        mean_dev = img.reshape(-1, 3).astype(np.float64).mean(axis=0) - 128.0
        mean_dev -= mean_dev.mean()  # brightness-invariant: chroma component only
        scores = self._prototypes @ mean_dev
        order = np.argsort(scores)[::-1]
        margin = float(scores[order[0]] - scores[order[1]])
        gray = img.astype(np.float32).mean(axis=2)
        smooth = cv2.blur(gray, (3, 3))
        hf = float(np.abs(gray - smooth).mean())
        penalty = self._hf_weight * max(0.0, hf - self._hf_baseline)
        penalty += self._gray_weight * max(0.0, abs(float(gray.mean()) - 128.0) - self._gray_baseline)
        return int(order[0]), margin - penalty

    def embed_images(self, images: list[np.ndarray]) -> list[np.ndarray]:
        out = []
        for img in images:
            best, margin = self._effective_margin(img)
            p_scramble = min(1.0, max(0.0, (self._margin_full - margin) / self._margin_width))
            if _hash_unit(img, "scramble") < p_scramble:
                best = (best + 1) % self.dim
            out.append(np.eye(self.dim)[best])
        return out


def write_transcript(root: Path, domain: str, run_index: int, kinds: list[str]) -> None:
    """One fixture transcript listing the given kinds in response format."""
    lines = [
        f"{i + 1}. {kind}: Selected for {domain} robustness coverage."
        for i, kind in enumerate(kinds)
    ]
    path = root / domain
    path.mkdir(parents=True, exist_ok=True)
    (path / f"{run_index}.txt").write_text("\n".join(lines) + "\n")


def write_transcripts_from_counts(
    root: Path, domain: str, counts: dict[str, int], n_runs: int
) -> None:
    """Transcripts such that kind k appears in exactly counts[k] of n_runs.

    Kind k is listed in runs 0 .. counts[k]-1, so per-run selections are
    nested and the resulting per-kind tallies reproduce counts exactly.
    """
    for run_index in range(n_runs):
        kinds = [k for k, c in counts.items() if run_index < c]
        if kinds:
            write_transcript(root, domain, run_index, kinds)
        else:
            path = root / domain
            path.mkdir(parents=True, exist_ok=True)
            (path / f"{run_index}.txt").write_text("No recommendations.\n")
