"""Report emission: delimited tables and figure files with stable bytes.

Floats are formatted to 12 significant digits, SVG output pins the
matplotlib hash salt and strips the date metadata, and all writes are
atomic, so rerunning an experiment with the same seed reproduces every
output file byte for byte.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import matplotlib
from matplotlib.figure import Figure

from .fileio import atomic_write_bytes, atomic_write_text

SIGNIFICANT_DIGITS = 12
_SVG_SALT = "qsepaudit"


def format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    text = str(value)
    if "," in text or "\n" in text:
        raise ValueError(f"cell value {text!r} would break the delimited format")
    return text


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    """Comma-delimited table with a header row and newline line endings."""
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row {row!r} does not match header width {len(header)}")
        lines.append(",".join(format_cell(cell) for cell in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple
    y: tuple
    yerr: tuple | None = None


@dataclass(frozen=True)
class PlotSpec:
    title: str
    xlabel: str
    ylabel: str
    series: tuple[Series, ...]
    diagonal: bool = False
    hline: float | None = None
    hline_label: str | None = None
    logx: bool = False
    logy: bool = False


def render_plot(spec: PlotSpec, path: str) -> None:
    """Render the series as marked curves into a self-contained SVG file."""
    if not spec.series:
        raise ValueError("plot needs at least one series")
    fig = Figure(figsize=(6.4, 4.4))
    ax = fig.add_subplot()
    if spec.diagonal:
        points = [v for s in spec.series for v in s.x]
        lo, hi = min(points), max(points)
        ax.plot([lo, hi], [lo, hi], color="0.6", linestyle="--", linewidth=1.0,
                label="reference")
    for series in spec.series:
        markevery = max(1, len(series.x) // 50)
        ax.errorbar(
            series.x,
            series.y,
            yerr=series.yerr,
            marker="o",
            markersize=4,
            markevery=markevery,
            capsize=3,
            label=series.label,
        )
    if spec.hline is not None:
        ax.axhline(spec.hline, color="0.3", linestyle=":", linewidth=1.0,
                   label=spec.hline_label)
    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_title(spec.title)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.grid(True, alpha=0.3)
    if any(s.label for s in spec.series) or spec.hline_label:
        ax.legend()
    buffer = io.BytesIO()
    with matplotlib.rc_context({"svg.hashsalt": _SVG_SALT}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    atomic_write_bytes(path, buffer.getvalue())
