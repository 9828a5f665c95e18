"""Deterministic SVG pictures of an instance and its piercing set."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from ..frame import G, Z, Frame
from ..kernel import SimplePolygon

RAYS = 256
_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _num(v: float) -> str:
    return f"{v:.6f}".rstrip("0").rstrip(".") if math.isfinite(v) else "0"


def ray_exit(poly: SimplePolygon, c, dirs: np.ndarray) -> np.ndarray:
    """Distance from ``c`` along each unit direction to the first boundary hit."""
    A, B = poly.edges
    c = np.asarray(c, dtype=float)
    E = B - A
    W = A - c
    # c + t d = A + s E  ->  solve for t, s per (direction, edge)
    den = dirs[:, None, 0] * E[None, :, 1] - dirs[:, None, 1] * E[None, :, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (W[None, :, 0] * E[None, :, 1] - W[None, :, 1] * E[None, :, 0]) / den
        s = (W[None, :, 0] * dirs[:, None, 1] - W[None, :, 1] * dirs[:, None, 0]) / den
    ok = (np.abs(den) > 1e-15) & (t > 1e-12) & (s >= 0) & (s <= 1)
    return np.where(ok, t, np.inf).min(axis=1)


def disk_outline(poly: SimplePolygon, center, radius: float, rays: int = RAYS) -> np.ndarray:
    """Visible part of a geodesic disk: along each ray the geodesic distance is euclidean
    until the ray leaves P, so the outline point is at min(r, exit distance)."""
    ang = 2 * np.pi * np.arange(rays) / rays
    dirs = np.c_[np.cos(ang), np.sin(ang)]
    reach = np.minimum(radius, ray_exit(poly, center, dirs))
    return np.asarray(center, dtype=float) + reach[:, None] * dirs


def render_svg(instance, frame: Frame | None = None, S=None, report=None, width: int = 800) -> str:
    poly = instance.polygon
    V = poly.vertices
    lo, hi = V.min(axis=0), V.max(axis=0)
    pad = 0.05 * max(hi - lo)
    lo, hi = lo - pad, hi + pad
    w, h = hi - lo
    height = int(round(width * h / w))
    stroke = _num(max(w, h) / 500)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_num(lo[0])} {_num(-hi[1])} {_num(w)} {_num(h)}">',
        f"<title>{escape(instance.name or 'instance')}</title>",
        '<g transform="scale(1,-1)">',
        f'<polygon points="{" ".join(f"{_num(x)},{_num(y)}" for x, y in V)}" fill="#f4f4f4" '
        f'stroke="#000" stroke-width="{stroke}"/>',
    ]
    unpierced = set()
    if report is not None:
        unpierced = {d.index for d in report.disks if d.slack < -report.tol}
    for k, d in enumerate(instance.disks):
        P = disk_outline(poly, d.center, d.radius)
        col = "#d00" if k in unpierced else _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in P)
        out.append(f'<polygon points="{pts}" fill="{col}" fill-opacity="0.06" stroke="{col}" '
                   f'stroke-width="{stroke}" stroke-opacity="0.7"/>')
        out.append(f'<circle cx="{_num(d.center.x)}" cy="{_num(d.center.y)}" r="{stroke}" fill="{col}"/>')
    if frame is not None:
        c = frame.translation
        out.append(f'<circle cx="{_num(c[0])}" cy="{_num(c[1])}" r="{_num(frame.scale)}" fill="none" '
                   f'stroke="#444" stroke-dasharray="{stroke}" stroke-width="{stroke}"/>')
        for name, p in [(f"g{i + 1}", q) for i, q in enumerate(G)] + [(f"z{i + 1}", q) for i, q in enumerate(Z)]:
            x, y = frame.from_frame(p)
            out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(2 * float(stroke))}" fill="#444">'
                       f"<title>{name}</title></circle>")
    labels = []
    if S is not None:
        pts = np.asarray(getattr(S, "points", S), dtype=float).reshape(-1, 2)
        tags = list(getattr(S, "provenance", [str(i) for i in range(len(pts))]))
        arm = 4 * float(stroke)
        for (x, y), tag in zip(pts, tags):
            out.append(f'<path d="M{_num(x - arm)},{_num(y - arm)}L{_num(x + arm)},{_num(y + arm)}'
                       f'M{_num(x - arm)},{_num(y + arm)}L{_num(x + arm)},{_num(y - arm)}" '
                       f'stroke="#000" stroke-width="{_num(2 * float(stroke))}"/>')
            labels.append((x + arm, y + arm, tag))
    out.append("</g>")
    size = _num(12 * float(stroke))
    for x, y, tag in labels:
        out.append(f'<text x="{_num(x)}" y="{_num(-y)}" font-size="{size}" font-family="sans-serif">{escape(tag)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
