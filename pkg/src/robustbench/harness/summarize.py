"""Aggregation of stored runs into robustness summaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .. import metrics
from ..errors import (
    BaselineZeroError,
    BaselineZeroFlips,
    DegenerateBaselineDelta,
    DegenerateVariance,
    IncompatibleBaseline,
    NoSamples,
    StoreCorrupt,
)
from ..outcomes import OutcomeTable, SampleOutcome
from .store import RunStore


@dataclass
class RobustnessSummary:
    model_id: str
    n_samples: int
    labeled: bool
    balanced_accuracy_clean: float | None = None
    clean_error: float | None = None
    per_kind_error: dict[str, float] = field(default_factory=dict)
    flip_rate: float | None = None
    per_kind_flip_rate: dict[str, float] = field(default_factory=dict)
    mce: float | None = None
    rce: float | None = None
    mfr: float | None = None
    pearson_r: float | None = None
    baseline_model_id: str | None = None
    advisories: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "n_samples": self.n_samples,
            "labeled": self.labeled,
            "balanced_accuracy_clean": self.balanced_accuracy_clean,
            "clean_error": self.clean_error,
            "per_kind_error": self.per_kind_error,
            "flip_rate": self.flip_rate,
            "per_kind_flip_rate": self.per_kind_flip_rate,
            "mce": self.mce,
            "rce": self.rce,
            "mfr": self.mfr,
            "pearson_r": self.pearson_r,
            "baseline_model_id": self.baseline_model_id,
            "advisories": self.advisories,
        }


def outcome_tables(store: RunStore) -> dict[str, OutcomeTable]:
    """One outcome table per model id found in a run store."""
    header = store.read_header()
    n_classes = len(header.get("class_names") or header.get("labels") or [])
    clean: dict[tuple[str, str], dict] = {}
    cells: dict[tuple[str, str], dict] = {}
    for record in store.canonical_records():
        key = (record["sample_id"], record["model_id"])
        if record.get("kind") is None:
            clean[key] = record
        else:
            cells.setdefault(key, {})[
                (record["kind"], int(record["severity_index"]), int(record["rep"]))
            ] = record["corrupted_pred"]
    tables: dict[str, dict[str, SampleOutcome]] = {}
    for (sample_id, model_id), record in sorted(clean.items()):
        outcome = SampleOutcome(
            sample_id=sample_id,
            clean_pred=record["clean_pred"],
            true_class=record.get("true_class"),
            corrupted=cells.get((sample_id, model_id), {}),
        )
        tables.setdefault(model_id, {})[sample_id] = outcome
    orphaned = set(cells) - set(clean)
    if orphaned:
        raise StoreCorrupt(f"corrupted cells without clean predictions: {sorted(orphaned)[:3]}")
    return {
        model_id: OutcomeTable(samples, n_classes)
        for model_id, samples in sorted(tables.items())
    }


def _per_kind_errors(table: OutcomeTable) -> dict[str, float]:
    return {kind: metrics.corruption_error(table, kind) for kind in table.kinds()}


def summarize(
    run_dir: str | Path,
    baseline_run_dir: str | Path | None = None,
    baseline_model: str | None = None,
) -> dict[str, RobustnessSummary]:
    """Per-model robustness summaries for a completed run.

    With a baseline run (sharing dataset and corruption plan), relative
    metrics are computed against one baseline model: mCE and rCE when
    labels exist, mFR always. Degenerate baseline kinds are dropped from
    the mCE/rCE means and surfaced as advisories.
    """
    store = RunStore(Path(run_dir))
    tables = outcome_tables(store)
    header = store.read_header()
    skipped_by_model: dict[str, int] = {}
    for key, entry in store.load_journal().items():
        if entry["status"] == "skipped":
            skipped_by_model[key[1]] = skipped_by_model.get(key[1], 0) + 1

    baseline_tables: dict[str, OutcomeTable] | None = None
    baseline_id: str | None = None
    if baseline_run_dir is not None:
        baseline_store = RunStore(Path(baseline_run_dir))
        baseline_header = baseline_store.read_header()
        if baseline_header["dataset_hash"] != header["dataset_hash"]:
            raise IncompatibleBaseline("baseline run used a different dataset")
        if sorted(baseline_header["kinds"]) != sorted(header["kinds"]):
            raise IncompatibleBaseline("baseline run used a different corruption plan")
        baseline_tables = outcome_tables(baseline_store)
        if not baseline_tables:
            raise IncompatibleBaseline("baseline run holds no records")
        baseline_id = baseline_model or sorted(baseline_tables)[0]
        if baseline_id not in baseline_tables:
            raise IncompatibleBaseline(f"baseline run has no model {baseline_id!r}")

    summaries: dict[str, RobustnessSummary] = {}
    for model_id, table in tables.items():
        summary = RobustnessSummary(
            model_id=model_id, n_samples=len(table.samples), labeled=table.labeled
        )
        if skipped_by_model.get(model_id):
            summary.advisories.append(
                f"{skipped_by_model[model_id]} evaluation cells skipped (see journal)"
            )
        summary.flip_rate = metrics.dataset_flip_rate(table)
        summary.per_kind_flip_rate = metrics.per_kind_flip_rate(table)
        if table.labeled:
            trues = [o.true_class for o in table.ordered()]
            preds = [o.clean_pred for o in table.ordered()]
            summary.balanced_accuracy_clean = metrics.balanced_accuracy(
                trues, preds, table.n_classes  # type: ignore[arg-type]
            )
            summary.clean_error = metrics.clean_error(table)
            summary.per_kind_error = _per_kind_errors(table)
            try:
                summary.pearson_r = metrics.accuracy_flip_correlation(table)
            except DegenerateVariance as exc:
                summary.advisories.append(f"pearson_r unavailable: {exc}")

        if baseline_tables is not None:
            baseline_table = baseline_tables[baseline_id]  # type: ignore[index]
            summary.baseline_model_id = baseline_id
            try:
                summary.mfr = metrics.mfr(
                    summary.flip_rate, metrics.dataset_flip_rate(baseline_table)
                )
            except BaselineZeroFlips as exc:
                summary.advisories.append(f"mFR unavailable: {exc}")
            if table.labeled and baseline_table.labeled:
                kinds = table.kinds()
                b_errors = _per_kind_errors(baseline_table)
                b_clean = metrics.clean_error(baseline_table)
                degenerate = metrics.zero_baseline_kinds(b_errors, kinds)
                if degenerate:
                    summary.advisories.append(
                        f"mCE excludes kinds with zero baseline error: {degenerate}"
                    )
                try:
                    summary.mce = metrics.mce(
                        summary.per_kind_error, b_errors, kinds, skip_zero_baseline=True
                    )
                except BaselineZeroError as exc:
                    summary.advisories.append(f"mCE unavailable: {exc}")
                excluded = metrics.rce_excluded_kinds(b_errors, b_clean, kinds)
                if excluded:
                    summary.advisories.append(
                        f"rCE excludes kinds with zero baseline delta: {excluded}"
                    )
                try:
                    summary.rce = metrics.rce(
                        summary.per_kind_error,
                        summary.clean_error,  # type: ignore[arg-type]
                        b_errors,
                        b_clean,
                        kinds,
                    )
                except DegenerateBaselineDelta as exc:
                    summary.advisories.append(f"rCE unavailable: {exc}")
        summaries[model_id] = summary
    if not summaries:
        raise NoSamples(f"run at {run_dir} holds no records")
    return summaries


def curve_points(
    store: RunStore, model_id: str
) -> dict[str, list[tuple[int, float | None, float, int]]]:
    """Per-kind curves: (severity, balanced accuracy or None, flip rate, n).

    Accuracy is None for unlabeled runs; flip rate is always present.
    """
    tables = outcome_tables(store)
    if model_id not in tables:
        raise NoSamples(f"no records for model {model_id!r}")
    table = tables[model_id]
    flips = metrics.per_cell_flip_rate(table)
    accuracy: dict[tuple[str, int], float] = {}
    if table.labeled:
        accuracy = metrics.per_cell_accuracy(table)
    counts: dict[tuple[str, int], int] = {}
    for outcome in table.ordered():
        for (kind, severity, _) in outcome.corrupted:
            counts[(kind, severity)] = counts.get((kind, severity), 0) + 1
    curves: dict[str, list[tuple[int, float | None, float, int]]] = {}
    for kind in table.kinds():
        curves[kind] = [
            (severity, accuracy.get((kind, severity)), flips[(kind, severity)], counts[(kind, severity)])
            for severity in table.severities(kind)
        ]
    return curves
