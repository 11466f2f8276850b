"""Tiny deterministic SVG builder.

Hand-rolled so rendered files are byte-identical across runs and machines:
no timestamps, no library version strings, fixed float formatting.
"""

from __future__ import annotations


def fmt(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


class SvgCanvas:
    def __init__(self, width: int, height: int) -> None:
        self.width = width
        self.height = height
        self._parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="monospace">'
        ]

    def rect(self, x: float, y: float, w: float, h: float, fill: str, stroke: str = "none", stroke_width: float = 1.0) -> None:
        self._parts.append(
            f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{fmt(stroke_width)}"/>'
        )

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str, width: float = 1.0, dashed: bool = False) -> None:
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        self._parts.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{fmt(width)}"{dash}/>'
        )

    def polyline(self, points: list[tuple[float, float]], stroke: str, width: float = 2.0) -> None:
        coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self._parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{fmt(width)}"/>'
        )

    def circle(self, cx: float, cy: float, r: float, fill: str) -> None:
        self._parts.append(f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r)}" fill="{fill}"/>')

    def text(self, x: float, y: float, content: str, size: int = 12, anchor: str = "start", fill: str = "#222") -> None:
        self._parts.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-size="{size}" text-anchor="{anchor}" '
            f'fill="{fill}">{escape(content)}</text>'
        )

    def text_rotated(self, x: float, y: float, content: str, degrees: float, size: int = 12, anchor: str = "start", fill: str = "#222") -> None:
        self._parts.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-size="{size}" text-anchor="{anchor}" fill="{fill}" '
            f'transform="rotate({fmt(degrees)} {fmt(x)} {fmt(y)})">{escape(content)}</text>'
        )

    def render(self) -> str:
        return "\n".join(self._parts + ["</svg>"]) + "\n"


def escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )
