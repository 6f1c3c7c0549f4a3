"""CSV and SVG formats for point samples and persistence diagrams.

Points CSV: one row per point, ``x1,...,xd,value``, optional header.  An
empty value field marks a missing observation; readers replace those by the
sentinel max + 10*(max - min) of the present values, so downstream denoising
treats them as outliers.  Floats are written with repr, so a write/read round
trip is bit-exact.

Diagram CSV: header ``dim,birth,death``; death is a float or the literal
``inf`` for essential classes.
"""
from __future__ import annotations

import math

import numpy as np

from .core import PersistenceDiagram, PersistencePair, ScalarSample
from .images import FormatError

__all__ = [
    "FormatError",
    "read_points_csv",
    "write_points_csv",
    "read_diagram_csv",
    "write_diagram_csv",
    "write_diagram_svg",
]

DIAGRAM_HEADER = "dim,birth,death"


def write_points_csv(path, sample: ScalarSample, header: bool = True) -> None:
    d = sample.dim
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(",".join(f"x{i + 1}" for i in range(d)) + ",value\n")
        for row, v in zip(sample.points, sample.values):
            fh.write(",".join(repr(float(c)) for c in row) + f",{float(v)!r}\n")


def read_points_csv(path) -> tuple[ScalarSample, np.ndarray]:
    """Parse a points CSV; returns (sample, missing_mask).

    Missing values arrive already replaced by the outlier sentinel; the mask
    records which rows were missing.
    """
    coords: list[list[float]] = []
    values: list[float] = []
    missing: list[bool] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            if len(cells) < 2:
                raise FormatError(f"{path}:{lineno}: need at least one coordinate and a value")
            try:
                row = [float(c) for c in cells[:-1]]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise FormatError(f"{path}:{lineno}: non-numeric coordinate") from None
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise FormatError(
                    f"{path}:{lineno}: expected {width} fields, found {len(cells)}"
                )
            if not all(math.isfinite(c) for c in row):
                raise FormatError(f"{path}:{lineno}: non-finite coordinate")
            last = cells[-1]
            if last == "":
                values.append(math.nan)
                missing.append(True)
            else:
                try:
                    v = float(last)
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: bad value field {last!r}") from None
                if not math.isfinite(v):
                    raise FormatError(f"{path}:{lineno}: non-finite value")
                values.append(v)
                missing.append(False)
            coords.append(row)
    if not coords:
        raise FormatError(f"{path}: no data rows")
    vals = np.asarray(values, dtype=np.float64)
    mask = np.asarray(missing, dtype=bool)
    if mask.all():
        raise FormatError(f"{path}: every value is missing")
    if mask.any():
        present = vals[~mask]
        lo, hi = float(present.min()), float(present.max())
        vals[mask] = hi + 10.0 * (hi - lo)
    return ScalarSample(np.asarray(coords, dtype=np.float64), vals), mask


def write_diagram_csv(path, diagram: PersistenceDiagram) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(DIAGRAM_HEADER + "\n")
        for p in sorted(diagram.pairs):
            death = "inf" if p.essential else repr(p.death)
            fh.write(f"{p.dim},{p.birth!r},{death}\n")


def read_diagram_csv(path) -> PersistenceDiagram:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines or lines[0].strip().lower() != DIAGRAM_HEADER:
        raise FormatError(f"{path}:1: expected header {DIAGRAM_HEADER!r}")
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 fields")
        try:
            dim = int(cells[0])
            birth = float(cells[1])
            death = math.inf if cells[2].lower() == "inf" else float(cells[2])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad diagram row") from None
        try:
            pairs.append(PersistencePair(dim, birth, death))
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from None
    return PersistenceDiagram(pairs)


_DIM_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def write_diagram_svg(path, diagram: PersistenceDiagram) -> None:
    """Render a diagram to a fixed 600x600 SVG: diagonal, finite points,
    essential classes on a strip above the plot area."""
    size = 600
    margin = 60
    strip = 40
    plot = size - 2 * margin

    finite = [p for p in diagram.pairs if not p.essential]
    births = [p.birth for p in diagram.pairs]
    deaths = [p.death for p in finite]
    lo = min(births + deaths, default=0.0)
    hi = max(births + deaths, default=1.0)
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def sx(v: float) -> float:
        return margin + (v - lo) / (hi - lo) * plot

    def sy(v: float) -> float:
        return size - margin - (v - lo) / (hi - lo) * plot

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{sx(lo)}" y1="{sy(lo)}" x2="{sx(hi)}" y2="{sy(hi)}" '
        'stroke="#888" stroke-width="1"/>',
        f'<line x1="{margin}" y1="{margin - strip / 2}" x2="{size - margin}" '
        f'y2="{margin - strip / 2}" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<text x="{margin}" y="{margin - strip / 2 - 6}" font-size="12" '
        'fill="#555">death = inf</text>',
    ]
    for p in diagram.pairs:
        color = _DIM_COLORS[p.dim % len(_DIM_COLORS)]
        if p.essential:
            parts.append(
                f'<circle cx="{sx(p.birth):.2f}" cy="{margin - strip / 2}" r="5" '
                f'fill="{color}" stroke="black" stroke-width="0.5"/>'
            )
        else:
            parts.append(
                f'<circle cx="{sx(p.birth):.2f}" cy="{sy(p.death):.2f}" r="4" '
                f'fill="{color}" fill-opacity="0.8"/>'
            )
    for q in sorted({p.dim for p in diagram.pairs}):
        color = _DIM_COLORS[q % len(_DIM_COLORS)]
        y = margin + 16 * q
        parts.append(f'<circle cx="{size - margin + 20}" cy="{y}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{size - margin + 30}" y="{y + 4}" font-size="12">H{q}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
