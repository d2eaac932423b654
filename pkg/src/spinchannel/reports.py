"""Table serialization (CSV / JSON) and small dependency-free SVG charts."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Sequence

__all__ = ["Table", "format_value", "to_csv", "to_json", "to_svg", "load_schema"]

# optimum tables report fidelity/entanglement at 3 decimals like the published
# figure; other numbers get ``sig_digits`` significant digits
THREE_DECIMAL = ("f_max", "F", "E", "line_f_max")


@dataclass
class Table:
    command: str
    columns: list[str]
    rows: list[dict[str, Any]]
    parameters: dict[str, Any] = field(default_factory=dict)
    three_decimal: tuple[str, ...] = THREE_DECIMAL
    sig_digits: int = 6


def format_value(column: str, value, three_decimal=THREE_DECIMAL, sig_digits: int = 6) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    v = float(value)
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if column in three_decimal:
        out = f"{v:.3f}"
        return "0.000" if out == "-0.000" else out
    return f"{v:.{sig_digits}g}"


def _json_value(table: Table, column: str, value):
    if value is None or isinstance(value, (str, bool)) or isinstance(value, int):
        return value
    v = float(value)
    if not math.isfinite(v):
        return None
    return float(format_value(column, v, table.three_decimal, table.sig_digits))


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(c, row.get(c), table.three_decimal, table.sig_digits)
                         for c in table.columns])
    return buf.getvalue()


def to_json(table: Table) -> str:
    doc = {
        "command": table.command,
        "parameters": table.parameters,
        "columns": table.columns,
        "rows": [{k: _json_value(table, k, v) for k, v in row.items()} for row in table.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_schema() -> dict:
    text = resources.files("spinchannel").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


# --- SVG -------------------------------------------------------------------

_W, _H = 640, 300
_ML, _MR, _MT, _MB = 60, 20, 30, 40


def _finite(xs):
    return [x for x in xs if x is not None and math.isfinite(x)]


def _panel(title: str, x: Sequence[float], series: list[tuple[str, str, Sequence[float]]],
           y0: float, hlines: Sequence[tuple[float, str]] = (), ylabel: str = "") -> list[str]:
    """One chart panel.  ``series`` entries are (kind, colour, values), kind in {'bar', 'line'}."""
    xs = _finite(x)
    ys = _finite([v for _, _, vals in series for v in vals] + [h for h, _ in hlines])
    if not xs or not ys:
        return []
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(0.0, min(ys)), max(ys)
    if xmax == xmin:
        xmin, xmax = xmin - 1, xmax + 1
    if ymax == ymin:
        ymax = ymin + 1
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + (v - xmin) / (xmax - xmin) * pw

    def py(v):
        return y0 + _MT + ph - (v - ymin) / (ymax - ymin) * ph

    out = [
        f'<text x="{_W / 2:.0f}" y="{y0 + 18:.0f}" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{_ML}" y1="{py(ymin):.1f}" x2="{_ML + pw}" y2="{py(ymin):.1f}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{py(ymin):.1f}" x2="{_ML}" y2="{py(ymax):.1f}" stroke="black"/>',
        f'<text x="{_ML - 6}" y="{py(ymax) + 4:.1f}" text-anchor="end" font-size="10">{ymax:.3g}</text>',
        f'<text x="{_ML - 6}" y="{py(ymin) + 4:.1f}" text-anchor="end" font-size="10">{ymin:.3g}</text>',
        f'<text x="{_ML}" y="{py(ymin) + 16:.1f}" text-anchor="middle" font-size="10">{xmin:.4g}</text>',
        f'<text x="{_ML + pw}" y="{py(ymin) + 16:.1f}" text-anchor="middle" font-size="10">{xmax:.4g}</text>',
    ]
    if ylabel:
        out.append(f'<text x="14" y="{y0 + _MT + ph / 2:.0f}" font-size="11" '
                   f'transform="rotate(-90 14 {y0 + _MT + ph / 2:.0f})" text-anchor="middle">{ylabel}</text>')
    bar_w = max(1.0, 0.8 * pw / max(1, len(xs)))
    for kind, colour, vals in series:
        pts = [(a, b) for a, b in zip(x, vals)
               if a is not None and b is not None and math.isfinite(a) and math.isfinite(b)]
        if kind == "bar":
            for a, b in pts:
                top = py(max(b, ymin))
                out.append(f'<rect x="{px(a) - bar_w / 2:.1f}" y="{top:.1f}" width="{bar_w:.1f}" '
                           f'height="{py(ymin) - top:.1f}" fill="{colour}"/>')
        else:
            coords = " ".join(f"{px(a):.1f},{py(b):.1f}" for a, b in pts)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
    for h, colour in hlines:
        out.append(f'<line x1="{_ML}" y1="{py(h):.1f}" x2="{_ML + pw}" y2="{py(h):.1f}" '
                   f'stroke="{colour}" stroke-dasharray="4 3"/>')
    return out


def to_svg(table: Table) -> str:
    rows = table.rows

    def col(name):
        return [None if r.get(name) is None else float(r[name]) for r in rows]

    panels: list[list[str]] = []
    if table.command in ("sweep", "ring"):
        N = col("N")
        panels.append(_panel("max fidelity F (bars), entanglement E (line)", N,
                             [("bar", "#8fb3d9", col("F")), ("line", "#c0392b", col("E"))],
                             0, hlines=[(2 / 3, "gray")], ylabel="F, E"))
        panels.append(_panel("alpha = log10(2 J t0)", N, [("line", "#2c3e50", col("alpha"))],
                             _H, ylabel="alpha"))
    elif table.command == "evolve":
        panels.append(_panel("|f(t)|", col("t"), [("line", "#2c3e50", col("abs_f"))], 0, ylabel="|f|"))
    elif table.command == "asymptotic":
        logN = [math.log10(v) for v in col("N")]
        panels.append(_panel("E vs log10 N: formula (line), exact (bars)", logN,
                             [("line", "#c0392b", col("E_formula")), ("bar", "#8fb3d9", col("E_exact_if_feasible"))],
                             0, ylabel="E"))
    body = [line for p in panels for line in p]
    height = _H * max(1, len(panels))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{height}" '
            f'viewBox="0 0 {_W} {height}" font-family="sans-serif">\n'
            + "\n".join(body) + "\n</svg>\n")
