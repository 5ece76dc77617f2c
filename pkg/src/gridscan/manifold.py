"""Piecewise-linear manifolds through the centers of kept cells.

The chain visits kept-cell centers greedily: start from the center nearest
the origin, then repeatedly step to the nearest unvisited center. Distance
ties (within ``TIE_TOL``) go to the lexicographically smallest cell index.
An s-dimensional manifold is the set of windows of ``s + 1`` consecutive
chain vertices: edges for s=1, triangles for s=2, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, NoCellsKept
from .scan import KeptCells

__all__ = [
    "Chain",
    "PiecewiseLinearManifold",
    "build_chain",
    "build_manifold",
    "count_tied_steps",
]

TIE_TOL = 1e-12


@dataclass(frozen=True)
class Chain:
    vertices: np.ndarray  # (K, N) cube centers in visiting order
    cells: np.ndarray  # (K, N) cell indices aligned with vertices

    def __len__(self) -> int:
        return int(self.vertices.shape[0])


@dataclass(frozen=True)
class PiecewiseLinearManifold:
    """``simplices`` holds 0-based vertex positions into ``chain``."""

    chain: Chain
    s: int
    simplices: tuple[tuple[int, ...], ...]

    @property
    def degenerate(self) -> bool:
        return not self.simplices


def _lex_sorted(kept: KeptCells) -> tuple[np.ndarray, np.ndarray]:
    idx = np.asarray(kept.indices)
    order = np.lexsort(idx.T[::-1]) if idx.size else np.arange(0)
    return idx[order], np.asarray(kept.centers)[order]


def _greedy_order(centers: np.ndarray) -> tuple[list[int], int]:
    """Visiting order over lexicographically sorted centers, plus the tie count.

    Because rows are pre-sorted, "first minimal row" is the lexicographic
    tie-break.
    """
    K = centers.shape[0]
    start_d = np.linalg.norm(centers, axis=1)
    current = int(np.flatnonzero(start_d <= start_d.min() + TIE_TOL)[0])
    order = [current]
    unvisited = np.ones(K, dtype=bool)
    unvisited[current] = False
    ties = 0
    for _ in range(K - 1):
        d = np.linalg.norm(centers - centers[current], axis=1)
        d[~unvisited] = np.inf
        close = np.flatnonzero(d <= d.min() + TIE_TOL)
        if len(close) > 1:
            ties += 1
        current = int(close[0])
        order.append(current)
        unvisited[current] = False
    return order, ties


def build_chain(kept: KeptCells) -> Chain:
    if kept.K == 0:
        raise NoCellsKept("cannot build a chain from zero kept cells")
    idx, centers = _lex_sorted(kept)
    order, _ = _greedy_order(centers)
    return Chain(vertices=centers[order], cells=idx[order])


def count_tied_steps(kept: KeptCells) -> int:
    """Joining steps where two or more unvisited centers are equally near.

    Each such step is a point where a different, equally valid chain could
    have been built. The choice of the starting cell is not counted.
    """
    if kept.K == 0:
        return 0
    _, centers = _lex_sorted(kept)
    return _greedy_order(centers)[1]


def build_manifold(chain: Chain, s: int = 1) -> PiecewiseLinearManifold:
    if int(s) != s or s < 1:
        raise InvalidDimension(f"manifold dimension must be an integer >= 1, got {s}")
    s = int(s)
    K = len(chain)
    simplices = tuple(tuple(range(k, k + s + 1)) for k in range(max(K - s, 0)))
    return PiecewiseLinearManifold(chain=chain, s=s, simplices=simplices)
