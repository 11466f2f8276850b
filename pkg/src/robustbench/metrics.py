"""Robustness metrics.

Supervised: balanced accuracy, per-corruption error, mean corruption error
(mCE) and relative corruption error (rCE) against a baseline model.
Label-free: per-sample flip probability against the clean prediction, its
dataset mean, and the mean flip rate (mFR) against a baseline.

All means use compensated summation (math.fsum) so results do not depend
on accumulation order. Self-baseline calls return exactly 1.0.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from .errors import (
    BaselineZeroError,
    BaselineZeroFlips,
    DegenerateBaselineDelta,
    DegenerateVariance,
    MissingLabels,
    NoCorruptedCells,
    NoSamples,
)
from .outcomes import OutcomeTable


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


# --- supervised -----------------------------------------------------------


def balanced_accuracy(
    true_classes: Sequence[int], predicted_classes: Sequence[int], n_classes: int
) -> float:
    """Macro-average of per-class recall; classes without samples excluded."""
    if len(true_classes) != len(predicted_classes):
        raise ValueError("true and predicted sequences differ in length")
    if not true_classes:
        raise NoSamples("balanced accuracy over an empty sample set")
    totals = [0] * n_classes
    correct = [0] * n_classes
    for truth, pred in zip(true_classes, predicted_classes):
        totals[truth] += 1
        if pred == truth:
            correct[truth] += 1
    recalls = [correct[c] / totals[c] for c in range(n_classes) if totals[c] > 0]
    return _mean(recalls)


def _require_labels(table: OutcomeTable) -> None:
    if not table.labeled:
        raise MissingLabels("supervised metric requested on unlabeled outcomes")


def clean_error(table: OutcomeTable) -> float:
    """Misclassification rate of the unperturbed predictions."""
    _require_labels(table)
    if not table.samples:
        raise NoSamples("no outcomes recorded")
    flags = [float(o.clean_pred != o.true_class) for o in table.ordered()]
    return _mean(flags)


def corruption_error(table: OutcomeTable, kind: str) -> float:
    """Misclassification rate over every (sample, severity, rep) cell of a kind."""
    _require_labels(table)
    flags = [
        float(pred != o.true_class)
        for o in table.ordered()
        for (k, _, _), pred in sorted(o.corrupted.items())
        if k == kind
    ]
    if not flags:
        raise NoSamples(f"no corrupted cells recorded for kind {kind!r}")
    return _mean(flags)


def zero_baseline_kinds(b_errors: Mapping[str, float], kinds: Sequence[str]) -> list[str]:
    return [k for k in kinds if b_errors[k] == 0.0]


def mce(
    f_errors: Mapping[str, float],
    b_errors: Mapping[str, float],
    kinds: Sequence[str],
    *,
    skip_zero_baseline: bool = False,
) -> float:
    """Mean over kinds of the error ratio against the baseline."""
    if not kinds:
        raise NoSamples("mCE over an empty corruption set")
    degenerate = zero_baseline_kinds(b_errors, kinds)
    if degenerate and not skip_zero_baseline:
        raise BaselineZeroError(f"baseline error is zero for {degenerate}")
    usable = [k for k in kinds if k not in degenerate]
    if not usable:
        raise BaselineZeroError("baseline error is zero for every corruption kind")
    return _mean([f_errors[k] / b_errors[k] for k in usable])


def rce_excluded_kinds(
    b_errors: Mapping[str, float], b_clean: float, kinds: Sequence[str]
) -> list[str]:
    """Kinds whose baseline corrupted-minus-clean delta vanishes."""
    return [k for k in kinds if b_errors[k] - b_clean == 0.0]


def rce(
    f_errors: Mapping[str, float],
    f_clean: float,
    b_errors: Mapping[str, float],
    b_clean: float,
    kinds: Sequence[str],
    *,
    strict: bool = False,
) -> float:
    """Mean over kinds of the error-increase ratio against the baseline.

    Kinds where the baseline shows no degradation make the ratio undefined;
    by default they are dropped from the mean (callers can surface them via
    rce_excluded_kinds), in strict mode they raise.
    """
    if not kinds:
        raise NoSamples("rCE over an empty corruption set")
    excluded = rce_excluded_kinds(b_errors, b_clean, kinds)
    if excluded and strict:
        raise DegenerateBaselineDelta(f"baseline delta is zero for {excluded}")
    usable = [k for k in kinds if k not in excluded]
    if not usable:
        raise DegenerateBaselineDelta("baseline delta is zero for every corruption kind")
    return _mean(
        [(f_errors[k] - f_clean) / (b_errors[k] - b_clean) for k in usable]
    )


# --- label-free -----------------------------------------------------------


def flip_probability(table: OutcomeTable, sample_id: str) -> float:
    """Fraction of a sample's corrupted cells whose prediction flipped."""
    outcome = table.samples[sample_id]
    if not outcome.corrupted:
        raise NoCorruptedCells(f"sample {sample_id!r} has no corrupted cells")
    flips = [
        float(pred != outcome.clean_pred) for _, pred in sorted(outcome.corrupted.items())
    ]
    return _mean(flips)


def dataset_flip_rate(table: OutcomeTable) -> float:
    """Mean flip probability over all samples."""
    if not table.samples:
        raise NoSamples("no outcomes recorded")
    return _mean([flip_probability(table, sid) for sid in table.sample_ids()])


def mfr(fp_f: float, fp_baseline: float) -> float:
    """Dataset flip rate relative to the baseline model's."""
    if fp_baseline == 0.0:
        raise BaselineZeroFlips("baseline flip rate is zero")
    return fp_f / fp_baseline


# --- correlation ----------------------------------------------------------


def pearson_r(series_a: Sequence[float], series_b: Sequence[float]) -> float:
    """Sample Pearson correlation."""
    if len(series_a) != len(series_b):
        raise ValueError("series differ in length")
    n = len(series_a)
    if n < 2:
        raise DegenerateVariance("need at least two points")
    mean_a = _mean(series_a)
    mean_b = _mean(series_b)
    da = [a - mean_a for a in series_a]
    db = [b - mean_b for b in series_b]
    var_a = math.fsum(x * x for x in da)
    var_b = math.fsum(x * x for x in db)
    if var_a == 0.0 or var_b == 0.0:
        raise DegenerateVariance("a series has zero variance")
    cov = math.fsum(x * y for x, y in zip(da, db))
    return max(-1.0, min(1.0, cov / math.sqrt(var_a * var_b)))


# --- per-(kind, severity) views --------------------------------------------


def per_cell_accuracy(table: OutcomeTable) -> dict[tuple[str, int], float]:
    """Balanced accuracy per (kind, severity), pooling samples and reps."""
    _require_labels(table)
    cells: dict[tuple[str, int], tuple[list[int], list[int]]] = {}
    for outcome in table.ordered():
        for (kind, severity, _), pred in sorted(outcome.corrupted.items()):
            trues, preds = cells.setdefault((kind, severity), ([], []))
            trues.append(outcome.true_class)  # type: ignore[arg-type]
            preds.append(pred)
    return {
        cell: balanced_accuracy(trues, preds, table.n_classes)
        for cell, (trues, preds) in sorted(cells.items())
    }


def per_cell_flip_rate(table: OutcomeTable) -> dict[tuple[str, int], float]:
    """Mean prediction-flip fraction per (kind, severity)."""
    cells: dict[tuple[str, int], list[float]] = {}
    for outcome in table.ordered():
        for (kind, severity, _), pred in sorted(outcome.corrupted.items()):
            cells.setdefault((kind, severity), []).append(
                float(pred != outcome.clean_pred)
            )
    return {cell: _mean(flags) for cell, flags in sorted(cells.items())}


def accuracy_flip_correlation(table: OutcomeTable) -> float:
    """Pearson r between per-cell balanced accuracy and per-cell flip rate."""
    accuracy = per_cell_accuracy(table)
    flips = per_cell_flip_rate(table)
    cells = sorted(accuracy)
    return pearson_r([accuracy[c] for c in cells], [flips[c] for c in cells])


def per_kind_flip_rate(table: OutcomeTable) -> dict[str, float]:
    """Mean flip fraction per corruption kind (reporting breakdown)."""
    kinds: dict[str, list[float]] = {}
    for outcome in table.ordered():
        for (kind, _, _), pred in sorted(outcome.corrupted.items()):
            kinds.setdefault(kind, []).append(float(pred != outcome.clean_pred))
    return {kind: _mean(flags) for kind, flags in sorted(kinds.items())}
