"""Parsing of model recommendation responses."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..corruptions import is_known_kind
from ..errors import EmptyResponse

# "<index>. <Name>: <rationale>", tolerating leading whitespace and
# markdown emphasis around the name.
_LINE = re.compile(r"^\s*\d+\.\s*\**([A-Za-z][A-Za-z0-9_-]*)\**\s*:\s*(.+?)\s*$")


@dataclass(frozen=True)
class SelectionRun:
    """One prompting round: what the model picked, verbatim."""

    run_index: int
    selections: tuple[tuple[str, str], ...] = ()
    unknown: tuple[tuple[str, str], ...] = ()
    raw_response: str = ""

    @property
    def selected_names(self) -> set[str]:
        return {name for name, _ in self.selections}


def parse_response(text: str, run_index: int = 0) -> SelectionRun:
    """Extract recommendation lines from a response.

    Names from the catalog become selections; well-formed lines naming
    anything else are kept as unknowns so noisy outputs degrade softly.
    A response with no parsable lines at all is an error.
    """
    selections: list[tuple[str, str]] = []
    unknown: list[tuple[str, str]] = []
    for line in text.splitlines():
        match = _LINE.match(line)
        if not match:
            continue
        name, rationale = match.group(1), match.group(2)
        if is_known_kind(name):
            selections.append((name, rationale))
        else:
            unknown.append((name, rationale))
    if not selections and not unknown:
        raise EmptyResponse(f"no recommendation lines found in response of {len(text)} chars")
    return SelectionRun(
        run_index=run_index,
        selections=tuple(selections),
        unknown=tuple(unknown),
        raw_response=text,
    )
