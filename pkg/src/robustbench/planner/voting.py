"""Majority voting over repeated selection runs."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..corruptions import KIND_NAMES
from ..errors import EmptyResponse
from .clients import ChatClient
from .parsing import SelectionRun, parse_response
from .prompt import DomainProfile, build_prompt


@dataclass(frozen=True)
class PlanEntry:
    kind: str
    votes: int
    rationale: str


@dataclass(frozen=True)
class CorruptionPlan:
    """The majority-voted corruption set for one domain."""

    domain_id: str
    chosen: tuple[PlanEntry, ...]
    n_runs: int
    threshold: float

    @property
    def kinds(self) -> list[str]:
        return [entry.kind for entry in self.chosen]

    def to_dict(self, violations: list | None = None) -> dict:
        return {
            "domain_id": self.domain_id,
            "n_runs": self.n_runs,
            "threshold": self.threshold,
            "chosen": [
                {"kind": e.kind, "votes": e.votes, "rationale": e.rationale}
                for e in self.chosen
            ],
            "violations": [v.to_dict() for v in violations] if violations else [],
        }

    @classmethod
    def from_dict(cls, data: dict) -> CorruptionPlan:
        return cls(
            domain_id=data["domain_id"],
            chosen=tuple(
                PlanEntry(e["kind"], int(e["votes"]), e.get("rationale", ""))
                for e in data["chosen"]
            ),
            n_runs=int(data["n_runs"]),
            threshold=float(data["threshold"]),
        )


def load_plan(path: str | Path) -> CorruptionPlan:
    return CorruptionPlan.from_dict(json.loads(Path(path).read_text()))


def tally_votes(runs: list[SelectionRun]) -> dict[str, int]:
    """Votes per kind: a kind counts once per run that selected it."""
    votes = {name: 0 for name in KIND_NAMES}
    for run in runs:
        for name in run.selected_names:
            votes[name] += 1
    return votes


def extract_plan(
    domain_id: str, runs: list[SelectionRun], threshold: float = 0.5
) -> CorruptionPlan:
    """Strict-majority plan: a kind is chosen iff votes > threshold * n_runs.

    The inequality is strict, so with the default threshold an exact half
    of the runs is not enough. The rationale kept per chosen kind is the
    first one seen in run order.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    n_runs = len(runs)
    votes = tally_votes(runs)
    first_rationale: dict[str, str] = {}
    for run in sorted(runs, key=lambda r: r.run_index):
        for name, rationale in run.selections:
            first_rationale.setdefault(name, rationale)
    chosen = tuple(
        PlanEntry(name, votes[name], first_rationale.get(name, ""))
        for name in KIND_NAMES
        if votes[name] > threshold * n_runs
    )
    return CorruptionPlan(domain_id, chosen, n_runs, threshold)


def select_plan(
    profile: DomainProfile,
    client: ChatClient,
    n_runs: int = 10,
    threshold: float = 0.5,
    temperature: float = 0.0,
    max_parallel: int = 1,
) -> tuple[CorruptionPlan, list[SelectionRun]]:
    """Prompt the client n_runs times and majority-vote the answers.

    A run whose response parses to nothing still counts in the denominator;
    it just contributes zero votes.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    from ..corruptions import catalog

    prompt = build_prompt(profile, catalog())

    def one_run(run_index: int) -> SelectionRun:
        text = client.complete(
            prompt, domain_id=profile.domain_id, run_index=run_index, temperature=temperature
        )
        try:
            return parse_response(text, run_index=run_index)
        except EmptyResponse:
            return SelectionRun(run_index=run_index, raw_response=text)

    if max_parallel > 1:
        with ThreadPoolExecutor(max_workers=max_parallel) as pool:
            runs = list(pool.map(one_run, range(n_runs)))
    else:
        runs = [one_run(i) for i in range(n_runs)]
    runs.sort(key=lambda r: r.run_index)
    return extract_plan(profile.domain_id, runs, threshold), runs


def selection_heatmap(
    runs_by_domain: Mapping[str, list[SelectionRun]]
) -> dict[str, dict[str, int]]:
    """Counts matrix: domain -> kind -> number of runs selecting it."""
    return {
        domain: tally_votes(runs) for domain, runs in sorted(runs_by_domain.items())
    }
