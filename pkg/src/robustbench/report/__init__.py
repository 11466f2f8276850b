"""Static report rendering: tables, curves, heatmaps as CSV/HTML/SVG."""

from .curves import render_curves
from .heatmap import render_heatmap
from .summary import format_cell, render_summary

__all__ = ["render_curves", "render_heatmap", "render_summary", "format_cell"]
