"""SVG rendering of a deformation grid.

Styling lives in CSS classes (``iso-k``, ``iso-b``, ``boundary``,
``reference``, ``axis``, ``tick``, ``label``) so the output can be restyled
downstream. Coordinates are written with three decimals.
"""
from __future__ import annotations

import math
from html import escape

from .grid import DeformationGrid

__all__ = ["WIDTH", "HEIGHT", "MARGIN", "grid_to_svg", "nice_ticks"]

WIDTH, HEIGHT, MARGIN = 800, 600, 60

STYLE = """
.frame { fill: none; stroke: #444; stroke-width: 1; }
.axis { stroke: #888; stroke-width: 0.8; }
.tick { font: 11px sans-serif; fill: #333; }
.label { font: 13px sans-serif; fill: #111; }
.title { font: bold 14px sans-serif; fill: #111; }
.iso-k { fill: none; stroke: #1f5fa8; stroke-width: 1.1; }
.iso-b { fill: none; stroke: #c23b22; stroke-width: 1.1; }
.boundary { fill: none; stroke: #000; stroke-width: 2.6; }
.reference { fill: none; stroke: #999; stroke-width: 0.8; stroke-dasharray: 4 3; }
.landmark { fill: #000; }
"""


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions (1, 2, 5 x 10^n steps) covering [lo, hi]."""
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [round(i * step, 12) + 0.0 for i in range(first, last + 1)]


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def x(self, K):
        return MARGIN + (K - self.xlo) / (self.xhi - self.xlo) * (WIDTH - 2 * MARGIN)

    def y(self, B):
        return HEIGHT - MARGIN - (B - self.ylo) / (self.yhi - self.ylo) * (HEIGHT - 2 * MARGIN)

    def pts(self, verts):
        return " ".join(f"{self.x(K):.3f},{self.y(B):.3f}" for K, B in verts)


def _extent(vertices, pad=0.05):
    xs = [v[0] for v in vertices] + [0.0]
    ys = [v[1] for v in vertices] + [0.0]
    xlo, xhi, ylo, yhi = min(xs), max(xs), min(ys), max(ys)
    if xhi - xlo == 0:
        xlo, xhi = xlo - 1, xhi + 1
    if yhi - ylo == 0:
        ylo, yhi = ylo - 1, yhi + 1
    dx, dy = (xhi - xlo) * pad, (yhi - ylo) * pad
    return xlo - dx, xhi + dx, ylo - dy, yhi + dy


def grid_to_svg(g: DeformationGrid, reference: DeformationGrid | None = None,
                b_axis: str = "virtual", title: str | None = None) -> str:
    """Iso-k and iso-b families, stability boundary and optional dashed
    reference grid in the (K, B) plane, K horizontal.

    With ``b_axis="total"`` the vertical coordinate is ``B + b0`` (the real
    damping of the configuration, 0 if it has none).
    """
    shift = g.spec.form.params.get("b0", 0.0) if b_axis == "total" else 0.0

    def lift(verts):
        return [(v[0], v[1] + shift) for v in verts]

    curve_verts = [v for c in g.iso_k + g.iso_b for v in lift(c.vertices())]
    if not curve_verts:
        curve_verts = lift([(p.K, p.B) for p in g.boundary])
    fr = _Frame(*_extent(curve_verts))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<style>{STYLE}</style>",
        "<defs><clipPath id=\"plot-area\">"
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}"/></clipPath></defs>',
    ]
    # axes and ticks
    for t in nice_ticks(fr.xlo, fr.xhi):
        x = fr.x(t)
        out.append(f'<line class="axis" x1="{x:.3f}" y1="{HEIGHT - MARGIN}" x2="{x:.3f}" '
                   f'y2="{HEIGHT - MARGIN + 5}"/>')
        out.append(f'<text class="tick" x="{x:.3f}" y="{HEIGHT - MARGIN + 18}" '
                   f'text-anchor="middle">{t:g}</text>')
    for t in nice_ticks(fr.ylo, fr.yhi):
        y = fr.y(t)
        out.append(f'<line class="axis" x1="{MARGIN - 5}" y1="{y:.3f}" x2="{MARGIN}" y2="{y:.3f}"/>')
        out.append(f'<text class="tick" x="{MARGIN - 8}" y="{y + 4:.3f}" '
                   f'text-anchor="end">{t:g}</text>')
    if fr.xlo < 0 < fr.xhi:
        out.append(f'<line class="axis" x1="{fr.x(0):.3f}" y1="{MARGIN}" x2="{fr.x(0):.3f}" '
                   f'y2="{HEIGHT - MARGIN}"/>')
    if fr.ylo < 0 < fr.yhi:
        out.append(f'<line class="axis" x1="{MARGIN}" y1="{fr.y(0):.3f}" x2="{WIDTH - MARGIN}" '
                   f'y2="{fr.y(0):.3f}"/>')

    out.append('<g clip-path="url(#plot-area)">')
    if reference is not None:
        out.append('<g class="reference-grid">')
        for c in reference.iso_k + reference.iso_b:
            for seg in c.segments:
                out.append(f'<polyline class="reference" points="{fr.pts(lift(seg))}"/>')
        out.append("</g>")
    out.append('<g class="iso-k-family">')
    for c in g.iso_k:
        for seg in c.segments:
            out.append(f'<polyline class="iso-k" data-k="{c.level:.6g}" points="{fr.pts(lift(seg))}"/>')
    out.append("</g>")
    out.append('<g class="iso-b-family">')
    for c in g.iso_b:
        for seg in c.segments:
            out.append(f'<polyline class="iso-b" data-b="{c.level:.6g}" points="{fr.pts(lift(seg))}"/>')
    out.append("</g>")
    if g.boundary:
        verts = lift([(p.K, p.B) for p in g.boundary])
        out.append(f'<polyline class="boundary" points="{fr.pts(verts)}"/>')
    for name, p in g.landmarks.items():
        out.append(f'<circle class="landmark" data-name="{escape(name)}" '
                   f'cx="{fr.x(p.K):.3f}" cy="{fr.y(p.B + shift):.3f}" r="3"/>')
    out.append("</g>")

    out.append(f'<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
               f'height="{HEIGHT - 2 * MARGIN}"/>')
    ylabel = "B + b0 (total damping)" if b_axis == "total" else "B (virtual damping)"
    out.append(f'<text class="label" x="{WIDTH / 2:.3f}" y="{HEIGHT - 15}" '
               f'text-anchor="middle">K (virtual stiffness)</text>')
    out.append(f'<text class="label" transform="translate(18,{HEIGHT / 2:.3f}) rotate(-90)" '
               f'text-anchor="middle">{ylabel}</text>')
    label = title if title is not None else g.spec.form.label()
    out.append(f'<text class="title" x="{WIDTH / 2:.3f}" y="{MARGIN - 25}" '
               f'text-anchor="middle">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
