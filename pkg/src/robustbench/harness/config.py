"""Run configuration and its canonical hash."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from ..corruptions import is_known_kind
from ..errors import UnknownKind


@dataclass
class RunConfig:
    """Everything a run needs; serialized as plain JSON.

    `plan` points at a saved corruption plan, or `kinds` lists kind names
    directly. `severities` is "all" or a list of indices applied per kind
    (indices beyond a shorter grid are skipped). `grids` optionally
    overrides the default severity grid of a kind with explicit parameter
    maps, one per level.
    """

    dataset: str
    backends: list[dict]
    out_dir: str
    plan: str | None = None
    kinds: list[str] | None = None
    severities: str | list[int] = "all"
    reps: int = 1
    master_seed: int = 0
    baseline_run: str | None = None
    grids: dict[str, list[dict]] | None = None
    labels: list[str] | None = None
    prompt_template: str = "a photo of a {label}"
    workers: int = 1
    keep_images: bool = False

    def validate(self) -> None:
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if not self.backends:
            raise ValueError("at least one backend descriptor is required")
        if (self.plan is None) == (self.kinds is None):
            raise ValueError("exactly one of plan / kinds must be set")
        if not Path(self.dataset).exists():
            raise ValueError(f"dataset path does not exist: {self.dataset}")
        if self.plan is not None and not Path(self.plan).exists():
            raise ValueError(f"plan path does not exist: {self.plan}")
        for kind in self.kinds or []:
            if not is_known_kind(kind):
                raise UnknownKind(f"unknown corruption kind in config: {kind!r}")
        for kind in self.grids or {}:
            if not is_known_kind(kind):
                raise UnknownKind(f"unknown corruption kind in grid override: {kind!r}")
        if self.severities != "all":
            if not all(isinstance(s, int) and s >= 0 for s in self.severities):
                raise ValueError("severities must be 'all' or a list of indices >= 0")

    # Execution details that do not change what gets computed.
    _IDENTITY_EXCLUDED = ("out_dir", "workers", "keep_images", "baseline_run")

    def identity_dict(self) -> dict:
        data = self.to_dict()
        for key in self._IDENTITY_EXCLUDED:
            data.pop(key, None)
        return data

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "backends": self.backends,
            "out_dir": self.out_dir,
            "plan": self.plan,
            "kinds": self.kinds,
            "severities": self.severities,
            "reps": self.reps,
            "master_seed": self.master_seed,
            "baseline_run": self.baseline_run,
            "grids": self.grids,
            "labels": self.labels,
            "prompt_template": self.prompt_template,
            "workers": self.workers,
            "keep_images": self.keep_images,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def from_json(cls, path: str | Path) -> RunConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))


def config_hash(config: RunConfig, dataset_digest: str) -> str:
    """Canonical digest of the run identity: config core plus dataset."""
    payload = json.dumps(
        {"config": config.identity_dict(), "dataset": dataset_digest},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()
