"""Deterministic report serialization (JSON, CSV) and static SVG figures.

JSON output is byte-reproducible: map keys are sorted and every float is
printed with 17 significant digits.  Figures are hand-rolled SVG with the
data points embedded; no plotting dependency.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

__all__ = ["jsonify", "dumps", "csv_lines", "svg_line_plot", "svg_heatmap"]


def jsonify(obj):
    """Recursively convert dataclasses / numpy values to plain JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonify(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [jsonify(v) for v in obj.tolist()]
    return obj


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite value in report: {v}")
        return format(v, ".17g")
    if isinstance(v, int):
        return str(v)
    if v is None:
        return "null"
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"unsupported report value type {type(v)!r}")


def _dump(obj, out, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, key in enumerate(sorted(obj)):
            out.append(f"{pad_in}{json.dumps(str(key))}: ")
            _dump(obj[key], out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad_in)
            _dump(v, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    else:
        out.append(_fmt_value(obj))


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, 17-significant-digit floats."""
    out = []
    _dump(jsonify(obj), out, indent, 0)
    out.append("\n")
    return "".join(out)


def _flatten(prefix: str, obj, row: dict):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], row)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, row)
    else:
        row[prefix] = obj


def csv_lines(report: dict) -> list[str]:
    """Flat per-case projection of a report: one row per suite case."""
    rows = []
    for suite in report.get("suites", []):
        for i, case in enumerate(suite.get("cases", [])):
            row = {"suite": suite["name"], "case": i}
            _flatten("", jsonify(case), row)
            rows.append(row)
    columns = ["suite", "case"] + sorted({k for r in rows for k in r} - {"suite", "case"})
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            v = row.get(col, "")
            if isinstance(v, str):
                cells.append(v.replace(",", ";"))
            elif v is None:
                cells.append("")
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(format(v, ".17g"))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return lines


def _axis_map(vals, lo_px, hi_px, log):
    vals = np.asarray(vals, dtype=float)
    if log:
        vals = np.log10(vals)
    lo, hi = float(vals.min()), float(vals.max())
    span = (hi - lo) or 1.0

    def to_px(v):
        v = math.log10(v) if log else v
        return lo_px + (v - lo) / span * (hi_px - lo_px)

    return to_px


def svg_line_plot(series: dict, title: str, xlabel: str, ylabel: str,
                  logx: bool = False, logy: bool = False,
                  width: int = 640, height: int = 420) -> str:
    """Minimal line plot; one polyline with markers per series."""
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    all_x = [x for xs, _ in series.values() for x in xs]
    all_y = [y for _, ys in series.values() for y in ys]
    mx = _axis_map(all_x, 70, width - 20, logx)
    my = _axis_map(all_y, height - 50, 30, logy)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {height / 2})">{ylabel}</text>',
        f'<line x1="70" y1="{height - 50}" x2="{width - 20}" y2="{height - 50}" stroke="black"/>',
        f'<line x1="70" y1="30" x2="70" y2="{height - 50}" stroke="black"/>',
    ]
    for ci, (name, (xs, ys)) in enumerate(sorted(series.items())):
        color = colors[ci % len(colors)]
        pts = " ".join(f"{mx(x):.2f},{my(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in zip(xs, ys):
            parts.append(
                f'<circle cx="{mx(x):.2f}" cy="{my(y):.2f}" r="3" fill="{color}">'
                f"<title>{name}: x={x:.6g} y={y:.6g}</title></circle>"
            )
        parts.append(
            f'<text x="{width - 25}" y="{35 + 16 * ci}" text-anchor="end" '
            f'font-size="12" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def svg_heatmap(xs, ys, grid, title: str, width: int = 520, height: int = 520) -> str:
    """Heatmap of grid[i][j] over (xs[i], ys[j]), blue (low) to red (high)."""
    grid = np.asarray(grid, dtype=float)
    lo, hi = float(grid.min()), float(grid.max())
    span = (hi - lo) or 1.0
    nx, ny = grid.shape
    x0, y0 = 60, 40
    cw = (width - x0 - 20) / nx
    ch = (height - y0 - 40) / ny
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for i in range(nx):
        for j in range(ny):
            t = (grid[i, j] - lo) / span
            r, b = int(255 * t), int(255 * (1 - t))
            parts.append(
                f'<rect x="{x0 + i * cw:.2f}" y="{y0 + (ny - 1 - j) * ch:.2f}" '
                f'width="{cw + 0.5:.2f}" height="{ch + 0.5:.2f}" fill="rgb({r},60,{b})">'
                f"<title>x={xs[i]:.4g} y={ys[j]:.4g} v={grid[i, j]:.6g}</title></rect>"
            )
    parts.append(
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" '
        f'font-size="12">min={lo:.6g} max={hi:.6g}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)
