"""Minimal static SVG emission for point sets, components, and paths.

Pure string assembly: the same report data always yields the same bytes.
"""

from __future__ import annotations

_PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def render_plane_svg(
    points,
    *,
    highlight=None,
    polylines=None,
    width: int = 720,
    title: str | None = None,
) -> str:
    """Scatter the points (a, b); overlay a highlight set and/or polylines."""
    pts = [(float(x), float(y)) for x, y in points]
    extra = list(highlight or [])
    for line in polylines or []:
        extra.extend(line)
    all_pts = pts + [(float(x), float(y)) for x, y in extra]
    if not all_pts:
        all_pts = [(0.0, 0.0)]
    xs = [p[0] for p in all_pts]
    ys = [p[1] for p in all_pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1.0)
    pad = span * 0.05
    x0, y0, span = x0 - pad, y0 - pad, span + 2 * pad
    scale = width / span

    def sx(x: float) -> float:
        return (x - x0) * scale

    def sy(y: float) -> float:
        return width - (y - y0) * scale  # y grows upward

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{width}" '
        f'viewBox="0 0 {width} {width}">',
        f'<rect width="{width}" height="{width}" fill="white"/>',
    ]
    if title:
        safe = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(f'<text x="8" y="16" font-family="monospace" font-size="12">{safe}</text>')
    r = max(1.0, min(3.0, scale * 0.35))
    for x, y in pts:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{r:.2f}" fill="#bbbbbb"/>')
    for k, line in enumerate(polylines or []):
        color = _PALETTE[k % len(_PALETTE)]
        coords = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in line)
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.2"/>'
        )
    for x, y in highlight or []:
        out.append(
            f'<circle cx="{sx(float(x)):.2f}" cy="{sy(float(y)):.2f}" r="{r * 1.4:.2f}" '
            f'fill="{_PALETTE[0]}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
