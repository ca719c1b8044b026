"""Dependency-free SVG convergence plots (log-log, one polyline per scheme)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .metrics import OrderTable

WIDTH, HEIGHT = 640, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 200, 40, 60
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]
REFERENCE_ORDERS = (1, 2, 3)
PAD = 0.10


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def plot_bounds(tables: Sequence[OrderTable]):
    """Log10 bounding box of all data, padded by 10 % of its span on each side."""
    xs = [math.log10(h) for t in tables for h, e in zip(t.hs, t.errors) if e and e > 0]
    ys = [math.log10(e) for t in tables for e in t.errors if e and e > 0]
    if not xs:
        raise ValueError("no positive errors to plot")
    bounds = []
    for lo, hi in ((min(xs), max(xs)), (min(ys), max(ys))):
        span = hi - lo if hi > lo else 1.0
        bounds.append((lo - PAD * span, hi + PAD * span))
    return bounds


def emit_convergence_plot(order_tables: Sequence[OrderTable], path, title: str = "") -> Path:
    if not order_tables:
        raise ValueError("at least one order table is required")
    (x0, x1), (y0, y1) = plot_bounds(order_tables)
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(lx):
        return MARGIN_LEFT + (lx - x0) / (x1 - x0) * pw

    def sy(ly):
        return MARGIN_TOP + (y1 - ly) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<defs><clipPath id="plot"><rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" '
        f'width="{pw}" height="{ph}"/></clipPath></defs>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN_LEFT + pw / 2:.2f}" y="24" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="14">{escape(title)}</text>')

    for k in range(math.ceil(x0), math.floor(x1) + 1):
        out.append(f'<line x1="{_fmt(sx(k))}" y1="{MARGIN_TOP + ph}" x2="{_fmt(sx(k))}" '
                   f'y2="{MARGIN_TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(sx(k))}" y="{MARGIN_TOP + ph + 20}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">1e{k}</text>')
    for k in range(math.ceil(y0), math.floor(y1) + 1):
        out.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{_fmt(sy(k))}" x2="{MARGIN_LEFT}" '
                   f'y2="{_fmt(sy(k))}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{_fmt(sy(k) + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">1e{k}</text>')
    out.append(f'<text x="{MARGIN_LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">h</text>')
    out.append(f'<text x="20" y="{MARGIN_TOP + ph / 2:.2f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 20 {MARGIN_TOP + ph / 2:.2f})">'
               f'{escape(order_tables[0].norm)}</text>')

    # reference slopes anchored at the finest point of the first table
    first = order_tables[0]
    anchor = min((h, e) for h, e in zip(first.hs, first.errors) if e and e > 0)
    lx_a, ly_a = math.log10(anchor[0]), math.log10(anchor[1])
    for order in REFERENCE_ORDERS:
        ly_end = ly_a + order * (x1 - lx_a)
        out.append(f'<line x1="{_fmt(sx(lx_a))}" y1="{_fmt(sy(ly_a))}" x2="{_fmt(sx(x1))}" '
                   f'y2="{_fmt(sy(ly_end))}" stroke="gray" stroke-dasharray="6,4" '
                   f'clip-path="url(#plot)"/>')
        out.append(f'<text x="{_fmt(sx(x1) + 4)}" y="{_fmt(min(max(sy(ly_end), MARGIN_TOP + 10), MARGIN_TOP + ph))}" '
                   f'font-family="sans-serif" font-size="10" fill="gray">order {order}</text>')

    for idx, table in enumerate(order_tables):
        color = COLORS[idx % len(COLORS)]
        pts = [(sx(math.log10(h)), sy(math.log10(e)))
               for h, e in zip(table.hs, table.errors) if e and e > 0]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="'
                   + " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts) + '"/>')
        for x, y in pts:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{color}"/>')
        ly = MARGIN_TOP + 20 + 18 * idx
        lx = WIDTH - MARGIN_RIGHT + 60
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 25}" y="{ly + 4}" font-family="sans-serif" font-size="10">'
                   f'{escape(table.label)}</text>')
    out.append("</svg>")

    path = Path(path)
    path.write_text("\n".join(out) + "\n")
    return path
