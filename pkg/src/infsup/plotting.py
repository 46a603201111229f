"""Hand-written SVG line plots of beta_h against h = 1/K.

One row per domain size: full view on the left (y in [0, 1.1]), zoom on the
right.  Output depends only on the data, so repeated runs are byte-identical.
"""
from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .core import InfSupResult
from .errors import ConfigError

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

PANEL_W, PANEL_H = 360, 260
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 110, 30, 40, 50
ROW_H = PANEL_H + MARGIN_T + MARGIN_B
COL_W = PANEL_W + MARGIN_L + MARGIN_R


def zoom_range(betas: Sequence[float]) -> tuple[float, float]:
    """[min - 5d, 1 + d] with d = 1 - min, widened so every value fits."""
    lo = min(betas)
    d = max(1.0 - lo, max(betas) - 1.0, 1e-12)
    return lo - 5.0 * d, 1.0 + d


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _panel(parts: list[str], x0: float, y0: float, series, xs_all, ylim, title: str):
    ylo, yhi = ylim
    xlo, xhi = min(xs_all), max(xs_all)
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    pad = 0.05 * (xhi - xlo)
    xlo, xhi = xlo - pad, xhi + pad

    def px(x):
        return x0 + (x - xlo) / (xhi - xlo) * PANEL_W

    def py(y):
        return y0 + PANEL_H - (y - ylo) / (yhi - ylo) * PANEL_H

    parts.append(f'<g class="panel">')
    parts.append(f'<text x="{x0 + PANEL_W / 2:.2f}" y="{y0 - 14:.2f}" '
                 f'text-anchor="middle" font-size="14">{escape(title)}</text>')
    parts.append(f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{PANEL_W}" height="{PANEL_H}" '
                 f'fill="none" stroke="black"/>')
    digits = max(2, min(15, int(math.ceil(-math.log10(max(yhi - ylo, 1e-15)))) + 2))
    for t in _ticks(ylo, yhi):
        y = py(t)
        parts.append(f'<line x1="{x0 - 5:.2f}" y1="{y:.2f}" x2="{x0:.2f}" y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8:.2f}" y="{y + 4:.2f}" text-anchor="end" '
                     f'font-size="10">{t:.{digits}f}</text>')
    for x in sorted(set(xs_all)):
        xp = px(x)
        k = round(2.0 ** (-x))
        parts.append(f'<line x1="{xp:.2f}" y1="{y0 + PANEL_H:.2f}" x2="{xp:.2f}" '
                     f'y2="{y0 + PANEL_H + 5:.2f}" stroke="black"/>')
        parts.append(f'<text x="{xp:.2f}" y="{y0 + PANEL_H + 18:.2f}" text-anchor="middle" '
                     f'font-size="10">1/{k}</text>')
    parts.append(f'<text x="{x0 + PANEL_W / 2:.2f}" y="{y0 + PANEL_H + 38:.2f}" '
                 f'text-anchor="middle" font-size="12">h = 1/K (log2 scale)</text>')
    parts.append(f'<text x="{x0 - 95:.2f}" y="{y0 + PANEL_H / 2:.2f}" font-size="12" '
                 f'transform="rotate(-90 {x0 - 95:.2f} {y0 + PANEL_H / 2:.2f})" '
                 f'text-anchor="middle">beta_h</text>')

    for idx, (N, pts) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        coords = [(px(x), py(y)) for x, y in pts]
        if len(coords) > 1:
            path = " ".join(f"{a:.2f},{b:.2f}" for a, b in coords)
            parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                         f'stroke-width="1.5"/>')
        for a, b in coords:
            parts.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        ly = y0 + 16 + 16 * idx
        lx = x0 + PANEL_W - 70
        parts.append(f'<line x1="{lx:.2f}" y1="{ly:.2f}" x2="{lx + 18:.2f}" y2="{ly:.2f}" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{lx + 24:.2f}" y="{ly + 4:.2f}" font-size="11">N={N}</text>')
    parts.append("</g>")


def render_svg(results: Sequence[InfSupResult]) -> str:
    if not results:
        raise ConfigError("nothing to plot: results are empty")
    by_L: dict[float, dict[int, list]] = defaultdict(lambda: defaultdict(list))
    for r in sorted(results, key=lambda r: r.key):
        by_L[r.L][r.N].append((math.log2(1.0 / r.K), r.beta_h))

    Ls = sorted(by_L)
    width, height = 2 * COL_W, len(Ls) * ROW_H
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for row, L in enumerate(Ls):
        series = sorted(by_L[L].items())
        xs = [x for _, pts in series for x, _ in pts]
        ys = [y for _, pts in series for _, y in pts]
        y0 = row * ROW_H + MARGIN_T
        dom = f"[0,{L:g}]^2"
        _panel(parts, MARGIN_L, y0, series, xs, (0.0, 1.1), f"beta_h on {dom}")
        _panel(parts, COL_W + MARGIN_L, y0, series, xs, zoom_range(ys), f"beta_h on {dom} (zoom)")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_plot(results: Sequence[InfSupResult], path) -> Path:
    path = Path(path)
    svg = render_svg(results)
    try:
        path.write_text(svg, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path
