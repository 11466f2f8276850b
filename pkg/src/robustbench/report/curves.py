"""Accuracy-versus-severity curves, one chart per corruption kind."""

from __future__ import annotations

import csv
from pathlib import Path

from .svg import SvgCanvas, fmt

_W, _H = 480, 320
_ML, _MR, _MT, _MB = 56, 16, 36, 44  # margins


def _chart(
    kind: str,
    points: list[tuple[int, float]],
    baseline_level: float | None,
    y_label: str,
) -> str:
    canvas = SvgCanvas(_W, _H)
    canvas.rect(0, 0, _W, _H, fill="#fff")
    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def sx(i: int) -> float:
        if len(points) == 1:
            return _ML + plot_w / 2
        return _ML + plot_w * i / (len(points) - 1)

    def sy(v: float) -> float:
        return _MT + plot_h * (1.0 - v)

    # frame and y ticks at 0, .25, .5, .75, 1
    canvas.rect(_ML, _MT, plot_w, plot_h, fill="none", stroke="#444")
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(tick)
        canvas.line(_ML - 4, y, _ML, y, stroke="#444")
        canvas.text(_ML - 8, y + 4, fmt(tick), size=11, anchor="end")
    for i, (severity, _) in enumerate(points):
        x = sx(i)
        canvas.line(x, _MT + plot_h, x, _MT + plot_h + 4, stroke="#444")
        canvas.text(x, _MT + plot_h + 18, str(severity), size=11, anchor="middle")

    if baseline_level is not None:
        y = sy(baseline_level)
        canvas.line(_ML, y, _ML + plot_w, y, stroke="#c33", width=1.5, dashed=True)
        canvas.text(_ML + plot_w, y - 5, f"random {fmt(baseline_level)}", size=10, anchor="end", fill="#c33")

    series = [(sx(i), sy(v)) for i, (_, v) in enumerate(points)]
    canvas.polyline(series, stroke="#2a7", width=2.0)
    for x, y in series:
        canvas.circle(x, y, 3, fill="#2a7")

    canvas.text(_W / 2, 20, kind, size=14, anchor="middle")
    canvas.text(_W / 2, _H - 8, "severity level", size=11, anchor="middle")
    canvas.text(14, _MT + plot_h / 2, y_label, size=11, anchor="middle")
    return canvas.render()


def render_curves(
    curves: dict[str, list[tuple[int, float | None, float, int]]],
    n_classes: int,
    out_dir: str | Path,
    labeled: bool,
) -> list[Path]:
    """Write `<kind>.csv` and `<kind>.svg` per corruption kind.

    Labeled runs plot mean balanced accuracy with a random-chance line at
    1/n_classes; unlabeled runs fall back to flip-rate curves (no chance
    line). The CSV always holds exactly the plotted numbers.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    baseline_level = 1.0 / n_classes if labeled and n_classes else None
    for kind, rows in sorted(curves.items()):
        csv_path = out / f"{kind}.csv"
        with csv_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            if labeled:
                writer.writerow(["severity", "balanced_accuracy", "flip_rate", "n_samples", "random_baseline"])
                for severity, accuracy, flip, n in rows:
                    writer.writerow([severity, repr(accuracy), repr(flip), n, repr(baseline_level)])
            else:
                writer.writerow(["severity", "flip_rate", "n_samples"])
                for severity, _, flip, n in rows:
                    writer.writerow([severity, repr(flip), n])
        if labeled:
            points = [(severity, accuracy) for severity, accuracy, _, _ in rows]
            svg = _chart(kind, points, baseline_level, "balanced accuracy")
        else:
            points = [(severity, flip) for severity, _, flip, _ in rows]
            svg = _chart(kind, points, None, "flip rate")
        svg_path = out / f"{kind}.svg"
        svg_path.write_text(svg)
        written.extend([csv_path, svg_path])
    return written
