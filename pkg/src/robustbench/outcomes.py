"""Immutable per-sample prediction outcomes that all metrics consume."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

Cell = tuple[str, int, int]  # (kind, severity_index, rep)


@dataclass(frozen=True)
class SampleOutcome:
    sample_id: str
    clean_pred: int
    true_class: int | None = None
    corrupted: Mapping[Cell, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "corrupted", dict(self.corrupted))


@dataclass(frozen=True)
class OutcomeTable:
    """Outcomes for one model over one dataset.

    Iteration order is always sorted by sample id, so every aggregate is
    independent of the order records were produced.
    """

    samples: Mapping[str, SampleOutcome]
    n_classes: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", dict(self.samples))

    @classmethod
    def from_outcomes(cls, outcomes: Iterable[SampleOutcome], n_classes: int) -> OutcomeTable:
        return cls({o.sample_id: o for o in outcomes}, n_classes)

    def sample_ids(self) -> list[str]:
        return sorted(self.samples)

    def ordered(self) -> list[SampleOutcome]:
        return [self.samples[sid] for sid in self.sample_ids()]

    @property
    def labeled(self) -> bool:
        return bool(self.samples) and all(
            o.true_class is not None for o in self.samples.values()
        )

    def kinds(self) -> list[str]:
        found = {kind for o in self.samples.values() for (kind, _, _) in o.corrupted}
        return sorted(found)

    def severities(self, kind: str) -> list[int]:
        found = {
            sev
            for o in self.samples.values()
            for (k, sev, _) in o.corrupted
            if k == kind
        }
        return sorted(found)
