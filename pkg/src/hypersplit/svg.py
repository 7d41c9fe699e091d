"""SVG rendering of planar instances and their separating lines."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .geometry import Hyperplane, PointConfig

__all__ = ["emit_svg", "UnsupportedDimensionError"]

COLORS = ("#2ca02c", "#1f77b4", "#d62728", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
SHAPES = ("cross", "dot", "square", "triangle", "diamond")
CANVAS = 400
MARKER = 5


class UnsupportedDimensionError(ValueError):
    pass


def _f(x: Fraction) -> str:
    return f"{float(x):.3f}"


def _clip(h: Hyperplane, box: tuple[Fraction, Fraction, Fraction, Fraction]):
    """Segment of a.x = b inside the box, or None if it misses."""
    (a1, a2), b = h.normal, h.offset
    x0, y0, x1, y1 = box
    hits = set()
    if a2:
        for x in (x0, x1):
            y = (b - a1 * x) / a2
            if y0 <= y <= y1:
                hits.add((x, y))
    if a1:
        for y in (y0, y1):
            x = (b - a2 * y) / a1
            if x0 <= x <= x1:
                hits.add((x, y))
    if len(hits) < 2:
        return None
    pts = sorted(hits)
    return pts[0], pts[-1]


def _marker(shape: str, x: str, y: str, color: str) -> str:
    r = MARKER
    if shape == "dot":
        return f'<circle cx="{x}" cy="{y}" r="{r - 1}" fill="{color}"/>'
    if shape == "square":
        return f'<rect x="{float(x) - r + 1:.3f}" y="{float(y) - r + 1:.3f}" width="{2 * r - 2}" height="{2 * r - 2}" fill="{color}"/>'
    cx, cy = float(x), float(y)
    if shape == "cross":
        return (
            f'<path d="M{cx - r:.3f},{cy - r:.3f} L{cx + r:.3f},{cy + r:.3f} '
            f'M{cx - r:.3f},{cy + r:.3f} L{cx + r:.3f},{cy - r:.3f}" stroke="{color}" stroke-width="2"/>'
        )
    if shape == "triangle":
        return f'<polygon points="{cx:.3f},{cy - r:.3f} {cx + r:.3f},{cy + r:.3f} {cx - r:.3f},{cy + r:.3f}" fill="{color}"/>'
    return f'<polygon points="{cx:.3f},{cy - r:.3f} {cx + r:.3f},{cy:.3f} {cx:.3f},{cy + r:.3f} {cx - r:.3f},{cy:.3f}" fill="{color}"/>'


def emit_svg(config: PointConfig, hyperplanes: Sequence[Hyperplane] = ()) -> str:
    """Points drawn per group, lines clipped to the bounding box plus a 10% margin."""
    if config.dim != 2:
        raise UnsupportedDimensionError(f"SVG output needs 2-D points, got dimension {config.dim}")
    xs = [p[0] for p in config.points]
    ys = [p[1] for p in config.points]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or Fraction(1)
    pad = span / 10
    box = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    scale = Fraction(CANVAS) / max(box[2] - box[0], box[3] - box[1])
    width = (box[2] - box[0]) * scale
    height = (box[3] - box[1]) * scale

    def to_svg(x: Fraction, y: Fraction) -> tuple[str, str]:
        return _f((x - box[0]) * scale), _f((box[3] - y) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>',
        '<g id="lines" stroke="#000000" stroke-width="1.5">',
    ]
    for h in hyperplanes:
        seg = _clip(h, box)
        if seg is None:
            continue
        (ax, ay), (bx, by) = to_svg(*seg[0]), to_svg(*seg[1])
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
    out.append("</g>")
    for i, g in enumerate(config.groups):
        color, shape = COLORS[i % len(COLORS)], SHAPES[i % len(SHAPES)]
        out.append(f'<g id="group-{i}" class="{_escape(g.name)}">')
        for j in sorted(g.members):
            out.append(_marker(shape, *to_svg(*config.points[j]), color))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
