"""Summary tables: one row per model, the five headline columns."""

from __future__ import annotations

import csv
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from ..errors import MissingBaseline
from ..harness.summarize import RobustnessSummary
from .svg import escape

COLUMNS = ("acc", "mce", "rce", "mfr", "pearson_r")
_HEADERS = {"acc": "Acc", "mce": "mCE", "rce": "rCE", "mfr": "mFR", "pearson_r": "r"}
# Acc is better high; every other column is better low.
_HIGHER_IS_BETTER = {"acc"}


def format_cell(value: float | None) -> str:
    """Two decimals, half-even, like the published tables."""
    if value is None:
        return ""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def _row_values(summary: RobustnessSummary) -> dict[str, float | None]:
    return {
        "acc": summary.balanced_accuracy_clean,
        "mce": summary.mce,
        "rce": summary.rce,
        "mfr": summary.mfr,
        "pearson_r": summary.pearson_r,
    }


def _best_per_column(rows: list[dict[str, float | None]]) -> dict[str, float | None]:
    best: dict[str, float | None] = {}
    for column in COLUMNS:
        values = [row[column] for row in rows if row[column] is not None]
        if not values:
            best[column] = None
        else:
            best[column] = max(values) if column in _HIGHER_IS_BETTER else min(values)
    return best


def render_summary(summaries: list[RobustnessSummary], out_dir: str | Path) -> tuple[Path, Path]:
    """Write summary.csv and summary.html; returns both paths."""
    if not summaries:
        raise MissingBaseline("no summaries to render")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [_row_values(s) for s in summaries]
    best = _best_per_column(rows)

    csv_path = out / "summary.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model"] + [_HEADERS[c] for c in COLUMNS])
        for summary, row in zip(summaries, rows):
            writer.writerow([summary.model_id] + [format_cell(row[c]) for c in COLUMNS])

    html_path = out / "summary.html"
    parts = [
        "<!DOCTYPE html>",
        "<html><head><meta charset='utf-8'><title>Robustness summary</title>",
        "<style>table{border-collapse:collapse;font-family:monospace}"
        "td,th{border:1px solid #999;padding:4px 10px;text-align:right}"
        "th{background:#eee}td.model{text-align:left}strong{color:#06c}</style>",
        "</head><body>",
        "<table>",
        "<tr><th>Model</th>" + "".join(f"<th>{_HEADERS[c]}</th>" for c in COLUMNS) + "</tr>",
    ]
    for summary, row in zip(summaries, rows):
        cells = [f"<td class='model'>{escape(summary.model_id)}</td>"]
        for column in COLUMNS:
            text = format_cell(row[column]) or "&mdash;"
            if row[column] is not None and row[column] == best[column]:
                text = f"<strong>{text}</strong>"
            cells.append(f"<td>{text}</td>")
        parts.append("<tr>" + "".join(cells) + "</tr>")
    parts.extend(["</table>", "</body></html>"])
    html_path.write_text("\n".join(parts) + "\n")
    return csv_path, html_path
