"""Unit-cube normalization and sparse cell bookkeeping on a regular grid.

A grid of resolution ``a`` splits ``[0, 1]^N`` into ``a^N`` half-open cells
``[k/a, (k+1)/a)`` per axis; the top face ``1.0`` belongs to cell ``a - 1``.
Only occupied cells are ever stored, since ``a^N`` explodes with ``N``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    InvalidCoordinate,
    InvalidIndex,
    OutOfDomain,
)

__all__ = [
    "CellHistogram",
    "CellIndex",
    "Dataset",
    "GridResolution",
    "UnitCubeTransform",
    "build_histogram",
    "cell_center",
    "cell_indices",
    "cell_of",
    "merge_histograms",
    "normalize_to_unit_cube",
]

DOMAIN_TOL = 1e-12

CellIndex = tuple[int, ...]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Point cloud inside the unit cube; row ``j`` is the point with id ``j``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise DimensionMismatch(f"expected a (J, N) array with N >= 1, got shape {pts.shape}")
        if pts.shape[0] == 0:
            raise EmptyDataset("dataset has no points")
        if not np.all(np.isfinite(pts)):
            raise InvalidCoordinate("dataset contains non-finite coordinates")
        if pts.min() < 0.0 or pts.max() > 1.0:
            raise OutOfDomain("dataset coordinates must lie in [0, 1]")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class UnitCubeTransform:
    """Per-axis affine map ``y = (x - offset) * scale``."""

    offset: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        offset = np.array(self.offset, dtype=np.float64)
        scale = np.array(self.scale, dtype=np.float64)
        if offset.shape != scale.shape or offset.ndim != 1:
            raise DimensionMismatch("offset and scale must be N-vectors of equal length")
        if not np.all(scale > 0):
            raise ValueError("scale must be strictly positive")
        object.__setattr__(self, "offset", _frozen(offset))
        object.__setattr__(self, "scale", _frozen(scale))

    def apply(self, raw) -> np.ndarray:
        return (np.asarray(raw, dtype=np.float64) - self.offset) * self.scale

    def invert(self, unit) -> np.ndarray:
        return np.asarray(unit, dtype=np.float64) / self.scale + self.offset


def _as_point_array(raw_points) -> np.ndarray:
    if isinstance(raw_points, np.ndarray):
        arr = raw_points
        if arr.ndim == 1 and arr.size == 0:
            raise EmptyDataset("no points given")
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array of points, got {arr.ndim}-d")
    else:
        rows = list(raw_points)
        if not rows:
            raise EmptyDataset("no points given")
        dim = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise DimensionMismatch(f"point {i} has dimension {len(row)}, expected {dim}")
        try:
            arr = np.array(rows, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidCoordinate(f"non-numeric coordinate: {exc}") from exc
    if arr.shape[0] == 0:
        raise EmptyDataset("no points given")
    if arr.shape[1] == 0:
        raise DimensionMismatch("points must have dimension N >= 1")
    return arr.astype(np.float64, copy=False)


def normalize_to_unit_cube(raw_points) -> tuple[Dataset, UnitCubeTransform]:
    """Map the bounding box of ``raw_points`` onto ``[0, 1]^N``.

    Axes with zero extent are sent to ``0.5`` with unit scale so the
    transform stays invertible.
    """
    pts = _as_point_array(raw_points)
    if not np.all(np.isfinite(pts)):
        bad = np.argwhere(~np.isfinite(pts))[0]
        raise InvalidCoordinate(f"non-finite coordinate at point {bad[0]}, axis {bad[1]}")

    lo = pts.min(axis=0)
    extent = pts.max(axis=0) - lo
    degenerate = extent == 0
    scale = np.where(degenerate, 1.0, 1.0 / np.where(degenerate, 1.0, extent))
    offset = np.where(degenerate, lo - 0.5, lo)

    transform = UnitCubeTransform(offset, scale)
    unit = np.clip(transform.apply(pts), 0.0, 1.0)
    return Dataset(unit), transform


@dataclass(frozen=True)
class GridResolution:
    """``a`` cells per axis in ``dim`` dimensions; the side is exactly ``1/a``."""

    a: int
    dim: int

    def __post_init__(self):
        if int(self.a) != self.a or self.a < 1:
            raise ValueError(f"resolution a must be a positive integer, got {self.a!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def r(self) -> Fraction:
        return Fraction(1, self.a)

    @property
    def cell_count(self) -> int:
        """``M = a^N`` as an exact integer."""
        return self.a**self.dim

    @property
    def cell_volume(self) -> Fraction:
        return Fraction(1, self.cell_count)


def cell_indices(points: np.ndarray, a: int) -> np.ndarray:
    """Vectorized :func:`cell_of` for a ``(J, N)`` array; returns int64 indices."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size and (pts.min() < -DOMAIN_TOL or pts.max() > 1.0 + DOMAIN_TOL):
        raise OutOfDomain(f"coordinates must lie in [0, 1] (tolerance {DOMAIN_TOL:g})")
    idx = np.floor(pts * a).astype(np.int64)
    return np.clip(idx, 0, a - 1)


def cell_of(point: Sequence[float], resolution: GridResolution) -> CellIndex:
    pt = np.asarray(point, dtype=np.float64)
    if pt.shape != (resolution.dim,):
        raise DimensionMismatch(f"point has shape {pt.shape}, expected ({resolution.dim},)")
    if not np.all(np.isfinite(pt)):
        raise InvalidCoordinate("point has non-finite coordinates")
    return tuple(int(k) for k in cell_indices(pt[None, :], resolution.a)[0])


def cell_center(index: Sequence[int], resolution: GridResolution) -> tuple[float, ...]:
    if len(index) != resolution.dim:
        raise InvalidIndex(f"index {tuple(index)} has {len(index)} coordinates, expected {resolution.dim}")
    for k in index:
        if int(k) != k or not 0 <= k < resolution.a:
            raise InvalidIndex(f"index {tuple(index)} outside [0, {resolution.a - 1}]")
    return tuple((int(k) + 0.5) / resolution.a for k in index)


@dataclass(frozen=True)
class CellHistogram:
    """Occupied cells at one resolution.

    ``cells[i]`` is the i-th occupied cell (lexicographic order), ``counts[i]``
    its occupant count, and ``members(i)`` the ascending point ids inside it.
    Empty cells are never stored.
    """

    resolution: GridResolution
    cells: np.ndarray
    counts: np.ndarray
    _member_ids: np.ndarray = field(repr=False)
    _offsets: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.cells.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def members(self, i: int) -> np.ndarray:
        return self._member_ids[self._offsets[i] : self._offsets[i + 1]]

    def items(self) -> Iterator[tuple[CellIndex, int, np.ndarray]]:
        for i in range(len(self)):
            yield tuple(int(k) for k in self.cells[i]), int(self.counts[i]), self.members(i)

    def as_dict(self) -> dict[CellIndex, int]:
        return {cell: count for cell, count, _ in self.items()}

    def count_of(self, cell: Sequence[int]) -> int:
        return self.as_dict().get(tuple(int(k) for k in cell), 0)


def _cell_keys(idx: np.ndarray, a: int) -> np.ndarray:
    """Integer keys whose order is the lexicographic order of the index rows."""
    n = idx.shape[1]
    if a**n < 2**62:
        weights = np.array([a ** (n - 1 - i) for i in range(n)], dtype=np.int64)
        return idx @ weights
    # a^N overflows int64: rank rows instead (np.unique sorts lexicographically)
    _, inverse = np.unique(idx, axis=0, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


def _group(resolution: GridResolution, ids: np.ndarray, idx: np.ndarray) -> CellHistogram:
    keys = _cell_keys(idx, resolution.a)
    # lexsort: primary key = cell, secondary = point id, so members come out ascending
    order = np.lexsort((ids, keys))
    sorted_keys = keys[order]
    starts = np.flatnonzero(np.diff(sorted_keys)) + 1
    offsets = np.concatenate(([0], starts, [len(order)])).astype(np.int64)
    first = order[offsets[:-1]]
    return CellHistogram(
        resolution=resolution,
        cells=_frozen(idx[first].copy()),
        counts=_frozen(np.diff(offsets)),
        _member_ids=_frozen(ids[order].copy()),
        _offsets=_frozen(offsets),
    )


def _partial_histogram(points: np.ndarray, resolution: GridResolution, id_offset: int) -> CellHistogram:
    idx = cell_indices(points, resolution.a)
    ids = np.arange(id_offset, id_offset + points.shape[0], dtype=np.int64)
    return _group(resolution, ids, idx)


def merge_histograms(parts: Sequence[CellHistogram]) -> CellHistogram:
    """Combine histograms of disjoint point-id sets at one resolution.

    The merge is associative and order-independent; merging the histograms of
    a partition of the points reproduces the single-pass histogram exactly.
    """
    if not parts:
        raise EmptyDataset("nothing to merge")
    resolution = parts[0].resolution
    if any(p.resolution != resolution for p in parts):
        raise ValueError("cannot merge histograms at different resolutions")
    ids = np.concatenate([p._member_ids for p in parts])
    idx = np.concatenate([np.repeat(p.cells, p.counts, axis=0) for p in parts])
    if len(np.unique(ids)) != len(ids):
        raise ValueError("histograms share point ids")
    return _group(resolution, ids, idx)


def build_histogram(dataset: Dataset, resolution: GridResolution, workers: int = 1) -> CellHistogram:
    """Count points per occupied cell in O(J N log J), independent of ``a^N``.

    With ``workers > 1`` the points are split into contiguous chunks that are
    counted on a thread pool and merged; the result is identical either way.
    """
    if resolution.dim != dataset.dim:
        raise DimensionMismatch(f"resolution is {resolution.dim}-d, dataset is {dataset.dim}-d")
    pts = dataset.points
    if workers <= 1 or dataset.size < 2 * workers:
        return _partial_histogram(pts, resolution, 0)

    bounds = np.linspace(0, dataset.size, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda lohi: _partial_histogram(pts[lohi[0] : lohi[1]], resolution, lohi[0]),
                zip(bounds[:-1], bounds[1:]),
            )
        )
    return merge_histograms(parts)

