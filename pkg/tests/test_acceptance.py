"""Acceptance suite: one test per release criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS lines.
Everything here is offline and deterministic: no network, no API keys.
"""

from __future__ import annotations

import random
import time

import numpy as np
import pytest

from robustbench import corruptions as C
from robustbench import metrics
from robustbench.errors import BackendUnavailable
from robustbench.harness import (
    RunConfig,
    RunStore,
    canonical_dump,
    curve_points,
    resume,
    run,
    summarize,
)
from robustbench.planner import (
    DomainProfile,
    TranscriptReplayClient,
    default_rules,
    extract_plan,
    select_plan,
    selection_heatmap,
    validate_plan,
)
from robustbench.planner.parsing import SelectionRun
from robustbench.predict import ToyBackend
from robustbench.synth import make_shapes_dataset

from conftest import SHAPE_CLASSES
from helpers import FragileBackend, write_transcripts_from_counts
from oracle import (
    instance_is_nondegenerate,
    oracle_balanced_accuracy,
    oracle_clean_error,
    oracle_corruption_error,
    oracle_dataset_flip_rate,
    oracle_flip_probability,
    oracle_mce,
    oracle_mfr,
    oracle_pearson,
    oracle_per_cell_accuracy,
    oracle_per_cell_flip_rate,
    oracle_rce,
    random_micro_instance,
)

TOL = 1e-12


def _report(line: str) -> None:
    print(f"\nACCEPTANCE {line}")


# --- criterion 1: metric oracle suite ------------------------------------------------


def test_metric_oracle_suite():
    started = time.monotonic()
    rand = random.Random(99)
    checked = 0
    attempts = 0
    while checked < 100 and attempts < 10_000:
        attempts += 1
        instance = random_micro_instance(rand)
        if not instance_is_nondegenerate(instance):
            continue
        checked += 1
        f, b, kinds = instance.f_table, instance.b_table, instance.kinds

        trues = [o.true_class for o in f.ordered()]
        preds = [o.clean_pred for o in f.ordered()]
        assert abs(
            metrics.balanced_accuracy(trues, preds, f.n_classes)
            - float(oracle_balanced_accuracy(trues, preds, f.n_classes))
        ) <= TOL
        assert abs(metrics.clean_error(f) - float(oracle_clean_error(f))) <= TOL

        f_errors, b_errors = {}, {}
        for kind in kinds:
            f_errors[kind] = metrics.corruption_error(f, kind)
            b_errors[kind] = metrics.corruption_error(b, kind)
            assert abs(f_errors[kind] - float(oracle_corruption_error(f, kind))) <= TOL
        assert abs(metrics.mce(f_errors, b_errors, kinds) - float(oracle_mce(f, b, kinds))) <= TOL
        assert abs(
            metrics.rce(f_errors, metrics.clean_error(f), b_errors, metrics.clean_error(b), kinds)
            - float(oracle_rce(f, b, kinds))
        ) <= TOL

        for sid in f.sample_ids():
            assert abs(
                metrics.flip_probability(f, sid) - float(oracle_flip_probability(f, sid))
            ) <= TOL
        assert abs(metrics.dataset_flip_rate(f) - float(oracle_dataset_flip_rate(f))) <= TOL
        assert abs(
            metrics.mfr(metrics.dataset_flip_rate(f), metrics.dataset_flip_rate(b))
            - float(oracle_mfr(f, b))
        ) <= TOL

        cells = sorted(metrics.per_cell_accuracy(f))
        o_acc = oracle_per_cell_accuracy(f)
        o_flip = oracle_per_cell_flip_rate(f)
        assert abs(
            metrics.accuracy_flip_correlation(f)
            - oracle_pearson(
                [float(o_acc[c]) for c in cells], [float(o_flip[c]) for c in cells]
            )
        ) <= TOL

    elapsed = time.monotonic() - started
    assert checked >= 100, f"only {checked} instances"
    assert elapsed < 10.0, f"oracle suite took {elapsed:.1f}s"
    _report(f"PASS metric-oracle-suite: {checked} instances within 1e-12 in {elapsed:.2f}s")


# --- criterion 2: self-baseline identities --------------------------------------------


@pytest.fixture(scope="module")
def dataset(tmp_path_factory) -> str:
    root = tmp_path_factory.mktemp("acceptance_shapes")
    make_shapes_dataset(root, SHAPE_CLASSES, n_per_class=10, size=64, seed=0)
    return str(root)


def _toy_config(dataset: str, out_dir: str, **overrides) -> RunConfig:
    defaults = dict(
        dataset=dataset,
        backends=[{"kind": "toy", "seed": 6}],
        out_dir=out_dir,
        kinds=["Brightness", "CloudGenerator", "GaussianNoise", "SaltPepperNoise"],
        severities=[0, 2, 4],
        reps=1,
        master_seed=11,
    )
    defaults.update(overrides)
    return RunConfig(**defaults)


def test_self_baseline_identities(dataset, tmp_path):
    run_id = run(_toy_config(dataset, str(tmp_path / "runs")))
    run_dir = tmp_path / "runs" / run_id
    summary = summarize(run_dir, run_dir)["toy-d32-s6"]
    assert summary.mce == 1.0
    assert summary.rce == 1.0
    assert summary.mfr == 1.0

    identity_config = _toy_config(
        dataset,
        str(tmp_path / "identity"),
        kinds=list(C.IDENTITY_KINDS),
        severities="all",
        grids={kind: [dict(C.identity_instance(kind).params)] for kind in C.IDENTITY_KINDS},
    )
    identity_id = run(identity_config)
    identity_summary = summarize(tmp_path / "identity" / identity_id)["toy-d32-s6"]
    assert identity_summary.flip_rate == 0.0
    _report("PASS self-baseline-identities: mCE=rCE=mFR=1 exactly; identity-run FP=0 exactly")


# --- criterion 3: corruption invariant suite -------------------------------------------


def test_corruption_invariant_suite():
    started = time.monotonic()
    rng = np.random.default_rng(2024)
    n_images = 1000
    kind_cycle = list(C.KIND_NAMES)

    for index in range(n_images):
        h = int(rng.integers(4, 56))
        w = int(rng.integers(4, 56))
        img = rng.integers(0, 256, (h, w, 3), dtype=np.uint8)
        kind = kind_cycle[index % len(kind_cycle)]
        grid = C.severity_grid(kind)
        level = int(rng.integers(0, len(grid)))
        seed = int(rng.integers(0, 2**63))
        inst = C.instance_for_level(kind, level, seed)

        out = C.apply(img, inst)
        assert out.shape == img.shape, "dimension preservation"
        assert out.dtype == np.uint8, "range safety via dtype"

        if index % 5 == 0:
            assert np.array_equal(out, C.apply(img, inst)), "seed determinism"
        if index % 7 == 0:
            for flip in ("ImageFlipHorizontal", "ImageFlipVertical"):
                flip_inst = C.instance_for_level(flip, 0, seed)
                assert np.array_equal(C.apply(C.apply(img, flip_inst), flip_inst), img)
        if index % 3 == 0:
            identity_kind = C.IDENTITY_KINDS[index % len(C.IDENTITY_KINDS)]
            assert np.array_equal(img, C.apply(img, C.identity_instance(identity_kind)))

    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"invariant suite took {elapsed:.1f}s"
    _report(f"PASS corruption-invariant-suite: {n_images} fuzzed images in {elapsed:.1f}s")


# --- criterion 4: end-to-end toy pipeline ------------------------------------------------


def test_end_to_end_toy_pipeline(dataset, tmp_path):
    started = time.monotonic()
    baseline_id = run(_toy_config(dataset, str(tmp_path / "baseline")))
    fragile = FragileBackend(SHAPE_CLASSES)
    fragile_id = run(_toy_config(dataset, str(tmp_path / "fragile")), backends=[fragile])

    baseline_dir = tmp_path / "baseline" / baseline_id
    fragile_dir = tmp_path / "fragile" / fragile_id
    summary = summarize(fragile_dir, baseline_dir)["synthetic-fragile"]

    assert summary.mce is not None and summary.mce > 1.0, f"mCE={summary.mce}"
    assert summary.pearson_r is not None and summary.pearson_r < 0.0

    curves = curve_points(RunStore(fragile_dir), "synthetic-fragile")
    assert set(curves) == {"Brightness", "CloudGenerator", "GaussianNoise", "SaltPepperNoise"}
    for kind, points in curves.items():
        accuracies = [acc for _, acc, _, _ in points]
        assert all(
            earlier >= later for earlier, later in zip(accuracies, accuracies[1:])
        ), f"{kind} accuracy not nonincreasing: {accuracies}"
        flips = [flip for _, _, flip, _ in points]
        assert all(
            earlier <= later for earlier, later in zip(flips, flips[1:])
        ), f"{kind} flip rate not nondecreasing: {flips}"

    elapsed = time.monotonic() - started
    assert elapsed < 120.0, f"pipeline took {elapsed:.1f}s"
    _report(
        f"PASS end-to-end-toy-pipeline: mCE={summary.mce:.3f}>1, "
        f"curves nonincreasing, pearson_r={summary.pearson_r:.3f}<0, {elapsed:.1f}s"
    )


# --- criterion 5: planner replay --------------------------------------------------------


def test_planner_replay(tmp_path):
    # scripted 6x16 selection matrix consistent with the curated rules:
    # whitelisted kinds get 9-10 votes, blacklisted 0, others fixed mid values
    rules = default_rules()
    rand = random.Random(42)
    scripted: dict[str, dict[str, int]] = {}
    for domain in ("driving", "handheld", "manufacturing", "medical", "people", "satellite"):
        counts = {}
        whitelist = rules.whitelist.get(domain, frozenset())
        blacklist = rules.blacklist.get(domain, frozenset())
        for kind in C.KIND_NAMES:
            if kind in whitelist:
                counts[kind] = rand.choice((9, 10))
            elif kind in blacklist:
                counts[kind] = 0
            else:
                counts[kind] = rand.choice((0, 2, 5, 7))
        scripted[domain] = counts

    n_runs = 10
    for domain, counts in scripted.items():
        write_transcripts_from_counts(tmp_path, domain, counts, n_runs)

    client = TranscriptReplayClient(tmp_path)
    runs_by_domain = {}
    plans = {}
    for domain in scripted:
        profile = DomainProfile(domain, f"{domain} deployment imagery")
        plan, runs = select_plan(profile, client, n_runs=n_runs, threshold=0.5)
        runs_by_domain[domain] = runs
        plans[domain] = plan

    assert selection_heatmap(runs_by_domain) == scripted, "matrix reproduction"

    for domain, plan in plans.items():
        expected = {k for k, votes in scripted[domain].items() if votes > 5}
        assert set(plan.kinds) == expected, domain

    # strict-majority boundary: 5/10 out, 6/10 in
    def runs_with_votes(votes: int) -> list[SelectionRun]:
        return [
            SelectionRun(i, (("Brightness", "r"),) if i < votes else ())
            for i in range(10)
        ]

    assert extract_plan("d", runs_with_votes(5)).kinds == []
    assert extract_plan("d", runs_with_votes(6)).kinds == ["Brightness"]

    # curated-rule violations
    medical_with_rain = extract_plan(
        "medical",
        [
            SelectionRun(i, tuple((k, "r") for k in (
                "Rain", "Brightness", "Contrast", "GaussianNoise", "PerspectiveTransformation"
            )))
            for i in range(10)
        ],
    )
    violations = validate_plan(medical_with_rain, rules)
    assert any(v.rule == "ForbiddenBlacklisted" and v.kind == "Rain" for v in violations)

    satellite_without_clouds = extract_plan(
        "satellite",
        [
            SelectionRun(i, tuple((k, "r") for k in sorted(
                rules.whitelist["satellite"] - {"CloudGenerator"}
            )))
            for i in range(10)
        ],
    )
    violations = validate_plan(satellite_without_clouds, rules)
    assert any(v.rule == "MissingWhitelisted" and v.kind == "CloudGenerator" for v in violations)
    _report("PASS planner-replay: scripted matrix exact, 5/10-6/10 boundary, rule violations flagged")


# --- criterion 6: determinism & resumability ----------------------------------------------


class _InterruptingBackend(ToyBackend):
    def __init__(self, budget: int):
        super().__init__(seed=6)
        self.remaining = budget

    def embed_images(self, images):
        if self.remaining <= 0:
            raise BackendUnavailable("interrupted")
        self.remaining -= 1
        return super().embed_images(images)


def test_determinism_and_resumability(dataset, tmp_path):
    config_a = _toy_config(dataset, str(tmp_path / "a"))
    config_b = _toy_config(dataset, str(tmp_path / "b"))
    id_a, id_b = run(config_a), run(config_b)
    assert id_a == id_b
    dump_a = canonical_dump(RunStore(tmp_path / "a" / id_a).canonical_records())
    dump_b = canonical_dump(RunStore(tmp_path / "b" / id_b).canonical_records())
    assert dump_a == dump_b, "identical configs must yield canonically identical stores"

    interrupted = _toy_config(dataset, str(tmp_path / "killed"))
    with pytest.raises(BackendUnavailable):
        run(interrupted, backends=[_InterruptingBackend(budget=200)])
    store = RunStore(tmp_path / "killed" / id_a)
    partial = len(store.load_records())
    assert 0 < partial < len(RunStore(tmp_path / "a" / id_a).load_records())

    resume(store.directory, backends=[ToyBackend(seed=6)])
    assert canonical_dump(store.canonical_records()) == dump_a, "resume must equal uninterrupted"
    _report(
        f"PASS determinism-and-resumability: canonical stores identical; "
        f"kill at {partial} records then resume matches uninterrupted run"
    )
