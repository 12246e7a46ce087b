"""Minimal static SVG 1.1 scatter/line plots with deterministic output."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["Layer", "render_svg"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Layer:
    """One layer: ``kind`` is ``"points"`` or ``"line"``; ``xy`` has shape (N, 2)."""

    name: str
    xy: np.ndarray
    kind: str = "points"
    color: str | None = None
    size: float = 1.5
    breaks: np.ndarray | None = field(default=None, repr=False)


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _polylines(px: np.ndarray, py: np.ndarray, gap: float) -> list[str]:
    out, start = [], 0
    jumps = np.nonzero(np.hypot(np.diff(px), np.diff(py)) > gap)[0]
    for stop in list(jumps + 1) + [len(px)]:
        if stop - start >= 2:
            out.append(" ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(px[start:stop], py[start:stop])))
        start = stop
    return out


def render_svg(layers: Sequence[Layer], xlim: tuple[float, float], ylim: tuple[float, float],
               width: int = 480, height: int = 720, title: str = "",
               xlabel: str = "Re", ylabel: str = "Im") -> str:
    """Render layers into an SVG document; points outside the limits are dropped."""
    ml, mr, mt, mb = 60, 20, 30, 45
    pw, ph = width - ml - mr, height - mt - mb
    x0, x1 = xlim
    y0, y1 = ylim

    def tx(x):
        return ml + (np.asarray(x) - x0) / (x1 - x0) * pw

    def ty(y):
        return mt + (y1 - np.asarray(y)) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    for v in np.linspace(x0, x1, 5):
        out.append(f'<text x="{_fmt(tx(v))}" y="{mt + ph + 16}" text-anchor="middle" font-size="10">{v:.3g}</text>')
    for v in np.linspace(y0, y1, 7):
        out.append(f'<text x="{ml - 6}" y="{_fmt(ty(v) + 3)}" text-anchor="end" font-size="10">{v:.4g}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" font-size="11">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{mt + ph / 2:.1f}" text-anchor="middle" font-size="11" '
               f'transform="rotate(-90 14 {mt + ph / 2:.1f})">{escape(ylabel)}</text>')
    for k, layer in enumerate(layers):
        color = layer.color or _PALETTE[k % len(_PALETTE)]
        xy = np.asarray(layer.xy, dtype=float).reshape(-1, 2)
        inside = (xy[:, 0] >= x0) & (xy[:, 0] <= x1) & (xy[:, 1] >= y0) & (xy[:, 1] <= y1)
        out.append(f'<g id="{escape(layer.name)}">')
        if layer.kind == "line":
            px, py = tx(xy[inside, 0]), ty(xy[inside, 1])
            for pts in _polylines(px, py, gap=10.0):
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="0.8" points="{pts}"/>')
        else:
            for x, y in zip(tx(xy[inside, 0]), ty(xy[inside, 1])):
                out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{layer.size}" fill="{color}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
