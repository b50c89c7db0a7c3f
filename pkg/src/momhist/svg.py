"""Standalone SVG output: level-set maps in the (t0, h) plane and bar charts."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from .core import Shape
from .levelset import Catalog

PALETTE = [
    "#f4a261", "#7b2cbf", "#d62828", "#222222", "#2a9d8f", "#e76f51",
    "#48cae4", "#8ac926", "#ffb703", "#6d597a", "#bc6c25", "#577590",
]


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def level_set_svg(
    catalog: Catalog,
    title: str | None = None,
    colors: Mapping[Shape, str] | None = None,
    width: int = 900,
    height: int = 640,
) -> str:
    """Draw every level set as a filled polygon labelled with its shape."""
    if not catalog.level_sets:
        raise ValueError("catalog is empty; nothing to draw")
    ml, mr, mt, mb = 70, 220, 50, 60
    pw, ph = width - ml - mr, height - mt - mb
    ts = [float(v[0]) for v in catalog.domain.vertices]
    hs = [float(v[1]) for v in catalog.domain.vertices]
    t_lo, t_hi = min(ts), max(ts)
    h_lo, h_hi = 0.0, max(hs)

    def px(t: float) -> float:
        return ml + (t - t_lo) / (t_hi - t_lo) * pw

    def py(h: float) -> float:
        return mt + ph - (h - h_lo) / (h_hi - h_lo) * ph

    title = title or f"Shape level sets, n={catalog.dataset.n}, K={catalog.K} ({catalog.S} shapes)"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{width / 2:.0f}" y="28" text-anchor="middle" font-family="sans-serif" font-size="18">{_escape(title)}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="#000"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="#000"/>',
    ]
    for t in _ticks(t_lo, t_hi):
        out.append(f'<text x="{_fmt(px(t))}" y="{mt + ph + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">{t:.3g}</text>')
    for h in _ticks(h_lo, h_hi):
        out.append(f'<text x="{ml - 8}" y="{_fmt(py(h) + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">{h:.3g}</text>')
    out.append(f'<text x="{ml + pw / 2:.0f}" y="{height - 16}" text-anchor="middle" font-family="sans-serif" font-size="13">anchor t0</text>')
    out.append(f'<text x="18" y="{mt + ph / 2:.0f}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {mt + ph / 2:.0f})">bin width h</text>')

    label_polys = catalog.S <= 24
    for i, ls in enumerate(catalog):
        fill = (colors or {}).get(ls.shape, PALETTE[i % len(PALETTE)])
        pts = " ".join(f"{_fmt(px(float(t)))},{_fmt(py(float(h)))}" for t, h in ls.vertices)
        out.append(f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.55" stroke="#333" stroke-width="0.8"><title>{ls.shape}</title></polygon>')
        if label_polys:
            ct, ch = ls.centroid
            out.append(f'<text x="{_fmt(px(float(ct)))}" y="{_fmt(py(float(ch)))}" text-anchor="middle" font-family="sans-serif" font-size="10">{ls.shape}</text>')
    if label_polys:
        for i, ls in enumerate(catalog):
            y = mt + 14 + 18 * i
            fill = (colors or {}).get(ls.shape, PALETTE[i % len(PALETTE)])
            out.append(f'<rect x="{ml + pw + 16}" y="{y - 10}" width="12" height="12" fill="{fill}" fill-opacity="0.55" stroke="#333"/>')
            out.append(f'<text x="{ml + pw + 34}" y="{y}" font-family="sans-serif" font-size="12">{ls.shape}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_chart_svg(
    counts: Sequence[int],
    edges: Sequence[float],
    title: str = "Histogram",
    width: int = 640,
    height: int = 420,
) -> str:
    """Frequency histogram with one bar per bin; ``edges`` has len(counts)+1 entries."""
    if not counts:
        raise ValueError("no bins to draw")
    if len(edges) != len(counts) + 1:
        raise ValueError("need one more edge than counts")
    ml, mr, mt, mb = 60, 20, 50, 60
    pw, ph = width - ml - mr, height - mt - mb
    top = max(counts) or 1
    bw = pw / len(counts)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{width / 2:.0f}" y="28" text-anchor="middle" font-family="sans-serif" font-size="18">{_escape(title)}</text>',
    ]
    for k, v in enumerate(counts):
        x = ml + k * bw
        hgt = v / top * ph
        out.append(f'<rect x="{_fmt(x)}" y="{_fmt(mt + ph - hgt)}" width="{_fmt(bw)}" height="{_fmt(hgt)}" fill="#4c78a8" stroke="#ffffff"><title>{v}</title></rect>')
        out.append(f'<text x="{_fmt(x + bw / 2)}" y="{_fmt(mt + ph - hgt - 4)}" text-anchor="middle" font-family="sans-serif" font-size="11">{v}</text>')
    for k, e in enumerate(edges):
        out.append(f'<text x="{_fmt(ml + k * bw)}" y="{mt + ph + 16}" text-anchor="middle" font-family="sans-serif" font-size="10">{e:.4g}</text>')
    out.append(f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="#000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(svg: str, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(svg, encoding="utf-8")
    return path
