"""Deterministic SVG rendering of median curves and landscape grids."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .csvio import CSVFormatError, read_table
from .landscape import LANDSCAPE_COLUMNS

SUMMARY_COLUMNS = ["variant", "axis_iteration", "median_ratio"]

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
# viridis anchors
_CMAP = np.array(
    [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]],
    dtype=float,
)

PANEL_TITLES = {
    "expectation": "expectation (shots)",
    "est_fidelity": "estimated fidelity to approx.",
    "fid_approx": "fidelity to approx.",
    "fid_opt": "fidelity to optimum",
}


def _f(x: float) -> str:
    return f"{x:.2f}"


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(_CMAP) - 1)
    k = min(int(t), len(_CMAP) - 2)
    rgb = _CMAP[k] + (t - k) * (_CMAP[k + 1] - _CMAP[k])
    return "#{:02x}{:02x}{:02x}".format(*(int(round(c)) for c in rgb))


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">'
    )
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>"]) + "\n"


def line_chart(series: dict[str, tuple[np.ndarray, np.ndarray]], title: str = "", ylabel: str = "median approximation ratio") -> str:
    """One polyline per series; ``series`` maps name to ``(x, y)``."""
    if not series:
        raise ValueError("no series to plot")
    W, H = 640, 400
    left, right, top, bottom = 60, 170, 30, 45
    xs = np.concatenate([np.asarray(x, float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, float) for _, y in series.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = W - left - right, H - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1 - (y - y0) / (y1 - y0)) * ph

    body = [f'<text x="{W / 2 - 60}" y="18">{escape(title)}</text>'] if title else []
    body.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for k in range(6):
        yv = y0 + k * (y1 - y0) / 5
        xv = x0 + k * (x1 - x0) / 5
        body.append(f'<text x="{left - 6}" y="{_f(py(yv) + 4)}" text-anchor="end">{yv:.3f}</text>')
        body.append(f'<text x="{_f(px(xv))}" y="{top + ph + 16}" text-anchor="middle">{xv:.0f}</text>')
    body.append(f'<text x="{left + pw / 2}" y="{H - 8}" text-anchor="middle">iteration</text>')
    body.append(
        f'<text x="14" y="{top + ph / 2}" transform="rotate(-90 14 {top + ph / 2})" text-anchor="middle">{escape(ylabel)}</text>'
    )
    for k, (name, (x, y)) in enumerate(series.items()):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_f(px(a))},{_f(py(b))}" for a, b in zip(x, y))
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 + 16 * k
        body.append(f'<line x1="{W - right + 10}" y1="{ly}" x2="{W - right + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{W - right + 35}" y="{ly + 4}">{escape(name)}</text>')
    return _svg(W, H, body)


def heatmaps(rows: list[dict], title: str = "") -> str:
    """Four panels, one per landscape quantity, each with its own min/max color bar."""
    if not rows:
        raise ValueError("empty landscape grid")
    ti = np.array([r["theta_i"] for r in rows])
    tj = np.array([r["theta_j"] for r in rows])
    ui, uj = np.unique(ti), np.unique(tj)
    index_i = np.searchsorted(ui, ti)
    index_j = np.searchsorted(uj, tj)
    cell = 5
    pw, ph = cell * len(uj), cell * len(ui)
    gap = 90
    W = 4 * (pw + gap) + 20
    H = ph + 90
    body = [f'<text x="10" y="16">{escape(title)}</text>'] if title else []
    for p, col in enumerate(LANDSCAPE_COLUMNS[2:]):
        vals = np.array([r[col] for r in rows])
        lo, hi = float(vals.min()), float(vals.max())
        span = hi - lo if hi > lo else 1.0
        ox, oy = 20 + p * (pw + gap), 40
        body.append(f'<g class="panel" id="{col}">')
        body.append(f'<text x="{ox}" y="{oy - 8}">{escape(PANEL_TITLES[col])}</text>')
        for v, a, b in zip(vals, index_i, index_j):
            # theta_i runs upward, theta_j to the right
            y = oy + (len(ui) - 1 - a) * cell
            body.append(f'<rect x="{ox + b * cell}" y="{y}" width="{cell}" height="{cell}" fill="{_color((v - lo) / span)}"/>')
        bx = ox + pw + 8
        for s in range(20):
            body.append(
                f'<rect x="{bx}" y="{_f(oy + ph - (s + 1) * ph / 20)}" width="10" height="{_f(ph / 20 + 0.5)}" fill="{_color((s + 0.5) / 20)}"/>'
            )
        body.append(f'<text class="cbar-max" x="{bx + 14}" y="{oy + 8}">{hi:.3f}</text>')
        body.append(f'<text class="cbar-min" x="{bx + 14}" y="{oy + ph}">{lo:.3f}</text>')
        body.append(f'<text x="{ox + pw / 2}" y="{oy + ph + 16}" text-anchor="middle">theta_j</text>')
        body.append("</g>")
    return _svg(W, H, body)


def plot_file(csv_path: Path, svg_path: Path, title: str = "") -> str:
    """Render a summary or landscape CSV; the kind is detected from its header."""
    csv_path = Path(csv_path)
    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
    if header == [""]:
        raise CSVFormatError(csv_path, 1, "empty file")
    if all(c in header for c in LANDSCAPE_COLUMNS):
        svg = heatmaps(read_table(csv_path, LANDSCAPE_COLUMNS), title)
    elif all(c in header for c in SUMMARY_COLUMNS):
        rows = read_table(csv_path, SUMMARY_COLUMNS, text_columns=("variant",))
        series: dict[str, tuple[list, list]] = {}
        for r in rows:
            xs, ys = series.setdefault(r["variant"], ([], []))
            xs.append(r["axis_iteration"])
            ys.append(r["median_ratio"])
        svg = line_chart({k: (np.array(x), np.array(y)) for k, (x, y) in series.items()}, title)
    else:
        raise CSVFormatError(csv_path, 1, f"unrecognized header {header}")
    Path(svg_path).parent.mkdir(parents=True, exist_ok=True)
    Path(svg_path).write_text(svg)
    return svg
