"""Selection-frequency heatmap: domains x corruption kinds."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping

from ..corruptions import KIND_NAMES
from ..planner import PlanRules
from .svg import SvgCanvas

_CELL = 30
_LEFT = 120
_TOP = 130


def _cell_fill(count: int, n_runs: int) -> str:
    if n_runs <= 0:
        return "#ffffff"
    level = max(0.0, min(1.0, count / n_runs))
    # white -> dark blue ramp
    r = int(255 - 175 * level)
    g = int(255 - 150 * level)
    b = int(255 - 75 * level)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_heatmap(
    matrix: Mapping[str, Mapping[str, int]],
    n_runs: int,
    out_dir: str | Path,
    rules: PlanRules | None = None,
) -> tuple[Path, Path]:
    """Write selection_heatmap.csv and .svg.

    Whitelisted (domain, kind) cells are outlined green, blacklisted red;
    a blacklisted cell with a nonzero count is additionally flagged by a
    red count label, since it marks a rule violation.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    domains = sorted(matrix)

    csv_path = out / "selection_heatmap.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["domain"] + list(KIND_NAMES))
        for domain in domains:
            writer.writerow([domain] + [int(matrix[domain].get(k, 0)) for k in KIND_NAMES])

    width = _LEFT + _CELL * len(KIND_NAMES) + 16
    height = _TOP + _CELL * len(domains) + 16
    canvas = SvgCanvas(width, height)
    canvas.rect(0, 0, width, height, fill="#fff")
    for col, kind in enumerate(KIND_NAMES):
        x = _LEFT + col * _CELL + _CELL / 2
        canvas.text_rotated(x, _TOP - 8, kind, degrees=-60, size=10)
    for row, domain in enumerate(domains):
        y = _TOP + row * _CELL
        canvas.text(_LEFT - 8, y + _CELL / 2 + 4, domain, size=11, anchor="end")
        whitelist = rules.whitelist.get(domain, frozenset()) if rules else frozenset()
        blacklist = rules.blacklist.get(domain, frozenset()) if rules else frozenset()
        for col, kind in enumerate(KIND_NAMES):
            count = int(matrix[domain].get(kind, 0))
            x = _LEFT + col * _CELL
            canvas.rect(x, y, _CELL, _CELL, fill=_cell_fill(count, n_runs), stroke="#ccc")
            if kind in whitelist:
                canvas.rect(x + 1.5, y + 1.5, _CELL - 3, _CELL - 3, fill="none", stroke="#2a8f2a", stroke_width=2.5)
            if kind in blacklist:
                canvas.rect(x + 1.5, y + 1.5, _CELL - 3, _CELL - 3, fill="none", stroke="#cc2222", stroke_width=2.5)
            violation = kind in blacklist and count > 0
            label_fill = "#cc0000" if violation else ("#fff" if count > n_runs * 0.6 else "#222")
            canvas.text(x + _CELL / 2, y + _CELL / 2 + 4, str(count), size=11, anchor="middle", fill=label_fill)
    svg_path = out / "selection_heatmap.svg"
    svg_path.write_text(canvas.render())
    return csv_path, svg_path
