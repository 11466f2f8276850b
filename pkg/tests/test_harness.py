from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from robustbench.errors import (
    BackendUnavailable,
    DuplicateSampleId,
    IncompatibleBaseline,
    NoEntries,
    StoreCorrupt,
    Unreadable,
)
from robustbench.harness import (
    RunConfig,
    RunStore,
    canonical_dump,
    dataset_hash,
    expected_record_count,
    load_manifest,
    resolve_matrix,
    resume,
    run,
    summarize,
)
from robustbench.image import save_image
from robustbench.predict import ToyBackend

from conftest import SHAPE_CLASSES

# --- manifest -----------------------------------------------------------------


def _write_png(path: Path, seed: int = 0) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    img = np.random.default_rng(seed).integers(0, 256, (8, 8, 3), dtype=np.uint8)
    save_image(img, path)


def test_manifest_directory_per_class(tmp_path):
    for cls in ("cat", "dog"):
        for i in range(3):
            _write_png(tmp_path / cls / f"{i}.png", seed=i)
    manifest = load_manifest(tmp_path)
    assert len(manifest.entries) == 6
    assert manifest.class_names == ("cat", "dog")
    assert manifest.labeled


def test_manifest_flat_directory_is_unlabeled(tmp_path):
    for i in range(4):
        _write_png(tmp_path / f"img{i}.png", seed=i)
    manifest = load_manifest(tmp_path)
    assert len(manifest.entries) == 4
    assert manifest.class_names == ()
    assert not manifest.labeled


def test_manifest_csv_rows_without_class_are_unlabeled(tmp_path):
    _write_png(tmp_path / "a.png")
    _write_png(tmp_path / "b.png", seed=1)
    manifest_path = tmp_path / "manifest.csv"
    manifest_path.write_text("sample_id,path,class\na,a.png,cat\nb,b.png,\n")
    manifest = load_manifest(manifest_path)
    assert not manifest.labeled
    assert manifest.entries[0].class_name == "cat"
    assert manifest.entries[1].class_name is None


def test_manifest_duplicate_id(tmp_path):
    _write_png(tmp_path / "a.png")
    manifest_path = tmp_path / "manifest.jsonl"
    rows = [
        {"sample_id": "x", "path": "a.png", "class": "cat"},
        {"sample_id": "x", "path": "a.png", "class": "dog"},
    ]
    manifest_path.write_text("\n".join(json.dumps(r) for r in rows))
    with pytest.raises(DuplicateSampleId) as excinfo:
        load_manifest(manifest_path)
    assert "x" in str(excinfo.value)


def test_manifest_empty_and_unreadable(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(NoEntries):
        load_manifest(empty)
    with pytest.raises(Unreadable):
        load_manifest(tmp_path / "nope")
    bad = tmp_path / "cls"
    bad.mkdir()
    (bad / "broken.png").write_bytes(b"not a png")
    with pytest.raises(Unreadable):
        load_manifest(tmp_path)


def test_dataset_hash_tracks_content(tmp_path):
    _write_png(tmp_path / "c" / "a.png", seed=0)
    h1 = dataset_hash(load_manifest(tmp_path))
    _write_png(tmp_path / "c" / "b.png", seed=1)
    h2 = dataset_hash(load_manifest(tmp_path))
    assert h1 != h2


# --- run execution --------------------------------------------------------------


def _config(dataset: str, out_dir: str, **overrides) -> RunConfig:
    defaults = dict(
        dataset=dataset,
        backends=[{"kind": "toy", "seed": 6}],
        out_dir=out_dir,
        kinds=["GaussianNoise", "Brightness"],
        severities=[0, 2],
        reps=2,
        master_seed=11,
    )
    defaults.update(overrides)
    return RunConfig(**defaults)


def test_run_record_count_law(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    records = store.load_records()
    matrix = resolve_matrix(config)
    # 40 samples x (1 clean + 2 kinds x 2 severities x 2 reps)
    assert expected_record_count(40, matrix, 1) == 40 * 9
    assert len(records) == 40 * 9
    skipped = [e for e in store.load_journal().values() if e["status"] == "skipped"]
    assert len(records) + len(skipped) == expected_record_count(40, matrix, 1)


def test_run_is_deterministic_across_invocations(shapes_dataset, tmp_path):
    config_a = _config(shapes_dataset, str(tmp_path / "a"))
    config_b = _config(shapes_dataset, str(tmp_path / "b"))
    id_a, id_b = run(config_a), run(config_b)
    assert id_a == id_b  # identity excludes the output directory
    dump_a = canonical_dump(RunStore(tmp_path / "a" / id_a).canonical_records())
    dump_b = canonical_dump(RunStore(tmp_path / "b" / id_b).canonical_records())
    assert dump_a == dump_b


def test_run_deterministic_regardless_of_workers(shapes_dataset, tmp_path):
    id_1 = run(_config(shapes_dataset, str(tmp_path / "w1"), workers=1))
    id_4 = run(_config(shapes_dataset, str(tmp_path / "w4"), workers=4))
    dump_1 = canonical_dump(RunStore(tmp_path / "w1" / id_1).canonical_records())
    dump_4 = canonical_dump(RunStore(tmp_path / "w4" / id_4).canonical_records())
    assert dump_1 == dump_4


def test_rerun_of_complete_store_adds_nothing(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    before = store.records_path.read_text()
    assert run(config) == run_id
    assert store.records_path.read_text() == before


def test_resume_complete_run_is_noop(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    before = store.records_path.read_text()
    assert resume(store.directory) == run_id
    assert store.records_path.read_text() == before


def test_resume_completes_exactly_missing_cells(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    full = canonical_dump(store.canonical_records())

    # simulate a crash: drop the last record and its journal tail
    records = store.records_path.read_text().splitlines()
    journal = store.journal_path.read_text().splitlines()
    store.records_path.write_text("\n".join(records[:-1]) + "\n")
    store.journal_path.write_text("\n".join(journal[:-1]) + "\n")

    resume(store.directory)
    assert canonical_dump(store.canonical_records()) == full
    assert len(store.load_records()) == len(records)


def test_resume_handles_truncated_tail_lines(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    full = canonical_dump(store.canonical_records())

    # a crash mid-write leaves a partial trailing line in both files
    records = store.records_path.read_text().splitlines()
    journal = store.journal_path.read_text().splitlines()
    store.records_path.write_text("\n".join(records[:-2]) + "\n" + records[-2][:25])
    store.journal_path.write_text("\n".join(journal[:-1]) + "\n" + journal[-1][:10])

    resume(store.directory)
    assert canonical_dump(store.canonical_records()) == full


def test_resume_refuses_changed_config(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    header = store.read_header()
    header["config"]["reps"] = 5
    store.write_header(header)
    with pytest.raises(StoreCorrupt):
        resume(store.directory)


class FlakyBackend(ToyBackend):
    """Fails hard after a budget of image-embedding calls."""

    def __init__(self, budget: int, seed: int = 6):
        super().__init__(seed=seed)
        self.budget = budget
        self.calls = 0

    def embed_images(self, images):
        self.calls += 1
        if self.calls > self.budget:
            raise BackendUnavailable("backend went away")
        return super().embed_images(images)


def test_interrupted_run_resumes_to_identical_store(shapes_dataset, tmp_path):
    reference = _config(shapes_dataset, str(tmp_path / "ref"))
    ref_id = run(reference)
    expected = canonical_dump(RunStore(tmp_path / "ref" / ref_id).canonical_records())

    config = _config(shapes_dataset, str(tmp_path / "runs"))
    with pytest.raises(BackendUnavailable):
        run(config, backends=[FlakyBackend(budget=150)])
    store = RunStore(tmp_path / "runs" / ref_id)
    assert 0 < len(store.load_records()) < 40 * 9

    resume(store.directory, backends=[ToyBackend(seed=6)])
    assert canonical_dump(store.canonical_records()) == expected


def test_run_refuses_mismatched_store(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    header = store.read_header()
    header["config_hash"] = "0" * 64
    store.write_header(header)
    with pytest.raises(StoreCorrupt):
        run(config)


def test_duplicate_record_detected(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    first_record = store.records_path.read_text().splitlines()[0]
    with store.records_path.open("a") as fh:
        fh.write(first_record + "\n")
    with pytest.raises(StoreCorrupt):
        resume(store.directory)


# --- grids override and unlabeled mode --------------------------------------------


def test_identity_grid_override_yields_zero_flips(shapes_dataset, tmp_path):
    config = _config(
        shapes_dataset,
        str(tmp_path / "runs"),
        kinds=["Brightness", "GaussianNoise"],
        severities="all",
        reps=1,
        grids={
            "Brightness": [{"factor": 1.0}],
            "GaussianNoise": [{"sigma": 0.0}],
        },
    )
    run_id = run(config)
    summaries = summarize(tmp_path / "runs" / run_id)
    summary = summaries["toy-d32-s6"]
    assert summary.flip_rate == 0.0


def test_unlabeled_dataset_requires_labels_and_reports_fp_only(tmp_path):
    for i in range(4):
        _write_png(tmp_path / "data" / f"img{i}.png", seed=i)
    config = _config(str(tmp_path / "data"), str(tmp_path / "runs"), severities=[0], reps=1)
    with pytest.raises(ValueError):
        run(config)
    config.labels = ["thing one", "thing two"]
    run_id = run(config)
    summary = summarize(tmp_path / "runs" / run_id)["toy-d32-s6"]
    assert not summary.labeled
    assert summary.flip_rate is not None
    assert summary.balanced_accuracy_clean is None
    assert summary.mce is None
    assert set(summary.per_kind_flip_rate) == {"GaussianNoise", "Brightness"}


# --- summarize -----------------------------------------------------------------------


def test_summarize_self_baseline_identities(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"), severities="all",
                     kinds=["GaussianNoise", "Brightness", "SaltPepperNoise"])
    run_id = run(config)
    run_dir = tmp_path / "runs" / run_id
    summary = summarize(run_dir, run_dir)["toy-d32-s6"]
    assert summary.mce == 1.0
    assert summary.rce == 1.0
    assert summary.mfr == 1.0


def test_summarize_incompatible_baseline(shapes_dataset, tmp_path):
    id_a = run(_config(shapes_dataset, str(tmp_path / "a")))
    id_b = run(_config(shapes_dataset, str(tmp_path / "b"), kinds=["MotionBlur", "Brightness"]))
    with pytest.raises(IncompatibleBaseline):
        summarize(tmp_path / "a" / id_a, tmp_path / "b" / id_b)


def test_summarize_without_baseline_omits_relative_metrics(shapes_dataset, tmp_path):
    run_id = run(_config(shapes_dataset, str(tmp_path / "runs")))
    summary = summarize(tmp_path / "runs" / run_id)["toy-d32-s6"]
    assert summary.mce is None and summary.rce is None and summary.mfr is None
    assert summary.balanced_accuracy_clean is not None
    assert summary.clean_error is not None
    assert set(summary.per_kind_error) == {"GaussianNoise", "Brightness"}


def test_summaries_computed_from_records_only(shapes_dataset, tmp_path):
    config = _config(shapes_dataset, str(tmp_path / "runs"))
    run_id = run(config)
    store = RunStore(tmp_path / "runs" / run_id)
    before_records = store.records_path.read_text()
    before_journal = store.journal_path.read_text()
    summarize(store.directory, store.directory)
    summarize(store.directory)
    assert store.records_path.read_text() == before_records
    assert store.journal_path.read_text() == before_journal


def test_multiple_backends_in_one_run(shapes_dataset, tmp_path):
    config = _config(
        shapes_dataset,
        str(tmp_path / "runs"),
        backends=[{"kind": "toy", "seed": 6}, {"kind": "toy", "seed": 7}],
        severities=[0],
        reps=1,
    )
    run_id = run(config)
    summaries = summarize(tmp_path / "runs" / run_id)
    assert set(summaries) == {"toy-d32-s6", "toy-d32-s7"}
    assert all(s.n_samples == 40 for s in summaries.values())


def test_class_names_are_canonical_order(shapes_dataset):
    manifest = load_manifest(shapes_dataset)
    assert manifest.class_names == SHAPE_CLASSES
