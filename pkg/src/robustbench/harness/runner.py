"""Run-matrix execution: model x corruption x severity x rep over all samples."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corruptions import CorruptionInstance, SeverityGrid, severity_grid
from ..errors import BackendUnavailable, RobustbenchError, StoreCorrupt
from ..image import load_image, save_image
from ..planner import load_plan
from ..predict import LabelSet, PredictorBackend, make_backend, predict
from ..rng import derive_seed
from .config import RunConfig, config_hash
from .manifest import DatasetManifest, dataset_hash, load_manifest
from .store import RunStore, clean_key, corrupted_key, key_of_record

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunMatrix:
    """The resolved sweep: which kinds, at which severity levels, how often."""

    kinds: tuple[str, ...]
    grids: dict[str, SeverityGrid]
    severity_indices: dict[str, tuple[int, ...]]
    reps: int

    def corrupted_cells_per_sample(self) -> int:
        return sum(len(self.severity_indices[k]) for k in self.kinds) * self.reps


def resolve_matrix(config: RunConfig) -> RunMatrix:
    if config.plan is not None:
        kinds = tuple(load_plan(config.plan).kinds)
    else:
        kinds = tuple(config.kinds or ())
    if not kinds:
        raise ValueError("run matrix resolves to zero corruption kinds")
    grids: dict[str, SeverityGrid] = {}
    for kind in kinds:
        override = (config.grids or {}).get(kind)
        if override is not None:
            grids[kind] = SeverityGrid(
                kind, tuple(dict(p) for p in override), tuple(float(i) for i in range(len(override)))
            )
        else:
            grids[kind] = severity_grid(kind)
    severity_indices = {}
    for kind in kinds:
        levels = range(len(grids[kind]))
        if config.severities == "all":
            severity_indices[kind] = tuple(levels)
        else:
            severity_indices[kind] = tuple(s for s in config.severities if s < len(grids[kind]))
        if not severity_indices[kind]:
            raise ValueError(f"severity subset leaves no levels for kind {kind!r}")
    return RunMatrix(kinds, grids, severity_indices, config.reps)


def _label_set(config: RunConfig, manifest: DatasetManifest) -> LabelSet:
    if manifest.labeled and manifest.class_names:
        return LabelSet(tuple(manifest.class_names), config.prompt_template)
    if not config.labels:
        raise ValueError(
            "unlabeled dataset: config must list candidate labels for zero-shot prediction"
        )
    return LabelSet(tuple(config.labels), config.prompt_template)


def expected_record_count(n_samples: int, matrix: RunMatrix, n_models: int) -> int:
    """Clean records plus the full corrupted product, before skips."""
    return n_models * n_samples * (1 + matrix.corrupted_cells_per_sample())


def _build_backends(config: RunConfig) -> list[PredictorBackend]:
    backends = [make_backend(d) for d in config.backends]
    ids = [b.model_id for b in backends]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate backend model ids: {ids}")
    return backends


class _Execution:
    def __init__(
        self,
        config: RunConfig,
        manifest: DatasetManifest,
        matrix: RunMatrix,
        store: RunStore,
        run_id: str,
        backends: list[PredictorBackend],
    ) -> None:
        self.config = config
        self.manifest = manifest
        self.matrix = matrix
        self.store = store
        self.run_id = run_id
        self.backends = backends
        self.label_set = _label_set(config, manifest)
        self.completed = store.completed_keys()
        self.clean_preds: dict[tuple[str, str], int] = {}
        for record in store.load_records():
            if record.get("kind") is None:
                self.clean_preds[(record["sample_id"], record["model_id"])] = record["clean_pred"]

    def _record(self, **fields) -> dict:
        fields["run_id"] = self.run_id
        fields["ts"] = time.time()
        return fields

    def _true_class(self, entry) -> int | None:
        if entry.class_name is None:
            return None
        return self.manifest.class_index(entry.class_name)

    def _run_sample(self, backend: PredictorBackend, entry) -> None:
        sample_id = entry.sample_id
        model_id = backend.model_id
        ckey = clean_key(sample_id, model_id)
        image = None

        def load() -> np.ndarray:
            nonlocal image
            if image is None:
                image = load_image(self.manifest.resolve(entry))
            return image

        if ckey not in self.completed:
            try:
                pred, _ = predict(backend, load(), self.label_set)
            except BackendUnavailable:
                raise
            except RobustbenchError as exc:
                log.warning("sample %s: clean prediction failed: %s", sample_id, exc)
                self.store.append_skip(ckey, f"clean: {exc}")
                for key in self._corrupted_keys(sample_id, model_id):
                    self.store.append_skip(key, "clean prediction unavailable")
                return
            self.clean_preds[(sample_id, model_id)] = pred
            self.store.append(
                self._record(
                    sample_id=sample_id,
                    model_id=model_id,
                    kind=None,
                    severity_index=None,
                    rep=0,
                    instance_seed=None,
                    clean_pred=pred,
                    corrupted_pred=None,
                    true_class=self._true_class(entry),
                )
            )
        clean_pred = self.clean_preds.get((sample_id, model_id))
        if clean_pred is None:
            return  # clean cell was journaled as skipped on a previous attempt

        from .. import corruptions

        for kind in self.matrix.kinds:
            grid = self.matrix.grids[kind]
            for severity in self.matrix.severity_indices[kind]:
                for rep in range(self.matrix.reps):
                    key = corrupted_key(sample_id, model_id, kind, severity, rep)
                    if key in self.completed:
                        continue
                    seed = derive_seed(
                        self.config.master_seed, sample_id, kind, severity, rep
                    )
                    try:
                        inst = CorruptionInstance(kind, severity, grid.levels[severity], seed)
                        corrupted = corruptions.apply(load(), inst)
                        if self.config.keep_images:
                            self._dump_image(corrupted, key)
                        pred, _ = predict(backend, corrupted, self.label_set)
                    except BackendUnavailable:
                        raise
                    except RobustbenchError as exc:
                        log.warning("cell %s failed: %s", key, exc)
                        self.store.append_skip(key, str(exc))
                        continue
                    self.store.append(
                        self._record(
                            sample_id=sample_id,
                            model_id=model_id,
                            kind=kind,
                            severity_index=severity,
                            rep=rep,
                            instance_seed=seed,
                            clean_pred=clean_pred,
                            corrupted_pred=pred,
                            true_class=self._true_class(entry),
                        )
                    )

    def _corrupted_keys(self, sample_id: str, model_id: str):
        for kind in self.matrix.kinds:
            for severity in self.matrix.severity_indices[kind]:
                for rep in range(self.matrix.reps):
                    yield corrupted_key(sample_id, model_id, kind, severity, rep)

    def _dump_image(self, img: np.ndarray, key: tuple) -> None:
        images_dir = self.store.directory / "images"
        images_dir.mkdir(exist_ok=True)
        name = "__".join(str(p) for p in key).replace("/", "_")
        save_image(img, images_dir / f"{name}.png")

    def execute(self) -> None:
        for backend in self.backends:
            backend.label_embeddings(self.label_set)  # warm the shared cache
            if self.config.workers > 1:
                with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                    list(pool.map(lambda e: self._run_sample(backend, e), self.manifest.entries))
            else:
                for entry in self.manifest.entries:
                    self._run_sample(backend, entry)


def run_id_for(config: RunConfig, dataset_digest: str) -> str:
    return "r" + config_hash(config, dataset_digest)[:12]


def run(config: RunConfig, backends: list[PredictorBackend] | None = None) -> str:
    """Execute a full run; returns the run id.

    The record set is a deterministic function of (config, dataset,
    backends) for deterministic backends: instance seeds depend only on the
    cell coordinates and master seed, never on execution order. Re-running
    an existing store completes missing cells and is otherwise a no-op.
    """
    config.validate()
    manifest = load_manifest(config.dataset)
    digest = dataset_hash(manifest)
    matrix = resolve_matrix(config)
    run_id = run_id_for(config, digest)
    store = RunStore(Path(config.out_dir) / run_id)
    expected_hash = config_hash(config, digest)
    if store.exists:
        header = store.read_header()
        if header["config_hash"] != expected_hash:
            raise StoreCorrupt(
                f"store {store.directory} belongs to a different configuration"
            )
    else:
        store.write_header(
            {
                "run_id": run_id,
                "config": config.to_dict(),
                "config_hash": expected_hash,
                "dataset_hash": digest,
                "class_names": list(manifest.class_names),
                "labels": list(_label_set(config, manifest).labels),
                "kinds": list(matrix.kinds),
                "severity_indices": {k: list(v) for k, v in matrix.severity_indices.items()},
                "reps": matrix.reps,
                "created_at": time.time(),
            }
        )
    backends = backends if backends is not None else _build_backends(config)
    _Execution(config, manifest, matrix, store, run_id, backends).execute()
    return run_id


def resume(run_dir: str | Path, backends: list[PredictorBackend] | None = None) -> str:
    """Complete the missing cells of an interrupted run; idempotent.

    Refuses stores whose configuration or dataset changed since the run
    started, and stores with impossible record/journal states.
    """
    store = RunStore(Path(run_dir))
    header = store.read_header()
    config = RunConfig.from_dict(header["config"])
    manifest = load_manifest(config.dataset)
    digest = dataset_hash(manifest)
    if config_hash(config, digest) != header["config_hash"]:
        raise StoreCorrupt(
            f"config hash mismatch for {store.directory}: the stored config or "
            "the dataset changed since the run was created"
        )
    store.repair_truncated_tail()
    _check_record_sanity(store)
    backends = backends if backends is not None else _build_backends(config)
    matrix = resolve_matrix(config)
    _Execution(config, manifest, matrix, store, header["run_id"], backends).execute()
    return header["run_id"]


def _check_record_sanity(store: RunStore) -> None:
    journal = store.load_journal()
    seen: set = set()
    for record in store.load_records():
        key = key_of_record(record)
        if key in seen:
            raise StoreCorrupt(f"duplicate record for cell {key}")
        seen.add(key)
        if key not in journal:
            raise StoreCorrupt(f"record without journal entry for cell {key}")
