"""Deterministic CSV, JSON and SVG writers."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np


def fmt(value) -> str:
    """Fixed text form: integers verbatim, floats with 9 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".9g")
    return str(value)


def write_csv(rows: Sequence[Mapping], path, columns: Sequence[str] | None = None) -> None:
    """Header row first, comma separated, LF line endings."""
    if columns is None:
        if not rows:
            raise ValueError("columns are required for an empty table")
        columns = list(rows[0].keys())
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(row[c]) for c in columns))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # round-trip through the fixed format so output is stable across platforms
        return float(fmt(obj))
    return obj


def write_json(obj, path) -> None:
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    Path(path).write_bytes((text + "\n").encode())


_W, _H, _PAD = 640, 420, 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _c(v: float) -> str:
    return format(v, ".2f")


def write_svg(series: Mapping[str, tuple[Sequence[float], Sequence[float]]], path, title: str = "",
              xlabel: str = "", ylabel: str = "", logx: bool = False, logy: bool = False) -> None:
    """Minimal line chart: a frame, min/max tick labels and one polyline per series."""
    tx = (lambda v: math.log10(v)) if logx else float
    ty = (lambda v: math.log10(v)) if logy else float
    pts = {}
    for name, (xs, ys) in series.items():
        pairs = [(tx(x), ty(y)) for x, y in zip(xs, ys)
                 if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0)]
        pts[name] = pairs
    allx = [p[0] for v in pts.values() for p in v]
    ally = [p[1] for v in pts.values() for p in v]
    x0, x1 = (min(allx), max(allx)) if allx else (0.0, 1.0)
    y0, y1 = (min(ally), max(ally)) if ally else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(v):
        return _PAD + (v - x0) / (x1 - x0) * (_W - 2 * _PAD)

    def sy(v):
        return _H - _PAD - (v - y0) / (y1 - y0) * (_H - 2 * _PAD)

    def label(v, log):
        return fmt(10**v if log else v)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" fill="none" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_PAD / 2}" text-anchor="middle" font-size="14">{_escape(title)}</text>',
        f'<text x="{_W / 2}" y="{_H - 15}" text-anchor="middle" font-size="12">{_escape(xlabel)}</text>',
        f'<text x="15" y="{_H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {_H / 2})">{_escape(ylabel)}</text>',
        f'<text x="{_PAD}" y="{_H - _PAD + 15}" font-size="10">{label(x0, logx)}</text>',
        f'<text x="{_W - _PAD}" y="{_H - _PAD + 15}" text-anchor="end" font-size="10">{label(x1, logx)}</text>',
        f'<text x="{_PAD - 4}" y="{_H - _PAD}" text-anchor="end" font-size="10">{label(y0, logy)}</text>',
        f'<text x="{_PAD - 4}" y="{_PAD + 10}" text-anchor="end" font-size="10">{label(y1, logy)}</text>',
    ]
    for i, (name, pairs) in enumerate(pts.items()):
        color = _COLORS[i % len(_COLORS)]
        if pairs:
            coords = " ".join(f"{_c(sx(x))},{_c(sy(y))}" for x, y in pairs)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        out.append(f'<text x="{_W - _PAD - 4}" y="{_PAD + 16 + 14 * i}" text-anchor="end" '
                   f'font-size="11" fill="{color}">{_escape(name)}</text>')
    out.append("</svg>")
    Path(path).write_bytes(("\n".join(out) + "\n").encode())


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
