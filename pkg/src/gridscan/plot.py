"""Deterministic SVG figures: data points in blue, kept cells as red squares,
and the chain as black line segments.

Two-dimensional data is drawn in unit-square coordinates. Higher-dimensional
data is projected onto its first two principal axes; kept cells are then
drawn as squares of the cell side around their projected centers, which is
a visual aid rather than an exact projection of the cube.

Element counts are part of the contract: exactly one ``<rect>`` per kept cell
and one ``<line>`` per chain edge; the frame and background use ``<path>``.
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import DegenerateCovariance, IoError
from .geometry import Dataset
from .manifold import Chain, PiecewiseLinearManifold
from .pca import pca_fit
from .scan import KeptCells

__all__ = ["emit_plot", "render_svg"]

SIZE = 480
MARGIN = 20
POINT_COLOR = "#1f5fbf"
CELL_COLOR = "#d62728"


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _planar(dataset: Dataset, kept: KeptCells | None, chain: Chain | None):
    """Plane coordinates for points, cell centers and chain vertices, plus the
    plotting window and the on-plane cell side."""
    pts = dataset.points
    N = dataset.dim
    side = 1.0 / kept.resolution.a if kept is not None else 0.0
    if N == 1:
        lift = lambda x: np.column_stack([x[:, 0], np.full(len(x), 0.5)])  # noqa: E731
        window = (0.0, 0.0, 1.0, 1.0)
    elif N == 2:
        lift = lambda x: x  # noqa: E731
        window = (0.0, 0.0, 1.0, 1.0)
    else:
        try:
            lift = pca_fit(dataset, 2).project
        except DegenerateCovariance:
            lift = lambda x: np.asarray(x)[:, :2]  # noqa: E731
        proj = lift(pts)
        lo, hi = proj.min(axis=0) - side, proj.max(axis=0) + side
        span = max(float((hi - lo).max()), 1e-12)
        window = (float(lo[0]), float(lo[1]), float(lo[0]) + span, float(lo[1]) + span)
    centers = lift(kept.centers) if kept is not None and kept.K else np.zeros((0, 2))
    verts = lift(chain.vertices) if chain is not None and len(chain) else np.zeros((0, 2))
    return lift(pts), centers, verts, window, side


def render_svg(
    dataset: Dataset,
    kept: KeptCells | None = None,
    manifold: PiecewiseLinearManifold | Chain | None = None,
    title: str = "",
) -> str:
    chain = manifold.chain if isinstance(manifold, PiecewiseLinearManifold) else manifold
    pts, centers, verts, (x0, y0, x1, y1), side = _planar(dataset, kept, chain)

    inner = SIZE - 2 * MARGIN
    sx = inner / (x1 - x0)
    sy = inner / (y1 - y0)

    def X(x):
        return MARGIN + (x - x0) * sx

    def Y(y):
        return SIZE - MARGIN - (y - y0) * sy

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(f'<path d="M0 0H{SIZE}V{SIZE}H0Z" fill="white"/>')
    out.append(
        f'<path d="M{_fmt(X(x0))} {_fmt(Y(y0))}H{_fmt(X(x1))}V{_fmt(Y(y1))}H{_fmt(X(x0))}Z" '
        'fill="none" stroke="#888888" stroke-width="1"/>'
    )

    out.append(f'<g fill="{CELL_COLOR}" fill-opacity="0.3" stroke="{CELL_COLOR}" stroke-width="0.8">')
    w, h = side * sx, side * sy
    for cx, cy in centers:
        out.append(
            f'<rect x="{_fmt(X(cx - side / 2))}" y="{_fmt(Y(cy + side / 2))}" '
            f'width="{_fmt(w)}" height="{_fmt(h)}"/>'
        )
    out.append("</g>")

    out.append(f'<g fill="{POINT_COLOR}">')
    for px, py in pts:
        out.append(f'<circle cx="{_fmt(X(px))}" cy="{_fmt(Y(py))}" r="1.8"/>')
    out.append("</g>")

    out.append('<g stroke="black" stroke-width="1.5">')
    for (ax, ay), (bx, by) in zip(verts[:-1], verts[1:]):
        out.append(f'<line x1="{_fmt(X(ax))}" y1="{_fmt(Y(ay))}" x2="{_fmt(X(bx))}" y2="{_fmt(Y(by))}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(
    dataset: Dataset,
    kept: KeptCells | None,
    manifold: PiecewiseLinearManifold | Chain | None,
    path,
    title: str = "",
) -> None:
    svg = render_svg(dataset, kept, manifold, title)
    try:
        Path(path).write_text(svg)
    except OSError as exc:
        raise IoError(f"cannot write plot to {path}: {exc}") from exc
