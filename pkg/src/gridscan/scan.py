"""Adaptive grid scan: keep dense cells, double the resolution until the kept
cells are both small in volume and large in coverage, or give up.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .geometry import (
    CellHistogram,
    Dataset,
    GridResolution,
    build_histogram,
    cell_indices,
)

__all__ = [
    "AbsoluteDensity",
    "CapPolicy",
    "Found",
    "FractionDensity",
    "KeptCells",
    "NotFound",
    "NotFoundReason",
    "ScanConfig",
    "ScanOutcome",
    "TraceEntry",
    "certificate_violations",
    "coverage_limit",
    "effective_p",
    "filter_cells",
    "integer_root",
    "resolution_cap",
    "scan",
]


def exact(x: float | int | Fraction) -> Fraction:
    """Rational value of a user-facing decimal: ``exact(0.005) == 1/200``.

    Parameters like 0.005 or 0.4 are meant as decimals, not as the nearest
    binary double, so thresholds derived from them are computed exactly.
    """
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class FractionDensity:
    """Density threshold as a fraction of the point count."""

    fraction: float = 0.005

    def __post_init__(self):
        if not 0 < self.fraction < 1:
            raise ValueError(f"density fraction must lie in (0, 1), got {self.fraction}")


@dataclass(frozen=True)
class AbsoluteDensity:
    """Density threshold as a fixed minimum count per cell."""

    p: int

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"absolute density must be an integer >= 1, got {self.p}")


Density = Union[FractionDensity, AbsoluteDensity]


class CapPolicy(str, enum.Enum):
    FULL = "full"  # a <= J^(1/N)
    HALF = "half"  # a <= J^(1/(2N)), the faster variant


@dataclass(frozen=True)
class ScanConfig:
    volume_limit: float = 0.4
    coverage_fraction: float = 0.9
    density: Density = field(default_factory=FractionDensity)
    a_cap_policy: CapPolicy = CapPolicy.FULL
    a_start: int = 2

    def __post_init__(self):
        if not 0 < self.volume_limit <= 1:
            raise ValueError(f"volume_limit must lie in (0, 1], got {self.volume_limit}")
        if not 0 < self.coverage_fraction <= 1:
            raise ValueError(f"coverage_fraction must lie in (0, 1], got {self.coverage_fraction}")
        if not isinstance(self.density, (FractionDensity, AbsoluteDensity)):
            raise TypeError("density must be FractionDensity or AbsoluteDensity")
        if int(self.a_start) != self.a_start or self.a_start < 2:
            raise ValueError(f"a_start must be an integer >= 2, got {self.a_start}")
        object.__setattr__(self, "a_cap_policy", CapPolicy(self.a_cap_policy))


def effective_p(config: ScanConfig, J: int) -> int:
    """Integer density threshold: ``f*J`` rounded up, never below 1."""
    if J < 1:
        raise ValueError("J must be >= 1")
    density = config.density
    if isinstance(density, AbsoluteDensity):
        return int(density.p)
    return max(1, math.ceil(exact(density.fraction) * J))


def coverage_limit(config: ScanConfig, J: int) -> int:
    """``L = ceil(coverage_fraction * J)``; ceiling so coverage is never under-demanded."""
    return math.ceil(exact(config.coverage_fraction) * J)


def integer_root(value: int, degree: int) -> int:
    """Largest integer ``c`` with ``c**degree <= value``."""
    if value < 0 or degree < 1:
        raise ValueError("integer_root needs value >= 0 and degree >= 1")
    if value < 2:
        return value
    c = max(1, int(round(value ** (1.0 / degree))))
    while c**degree > value:
        c -= 1
    while (c + 1) ** degree <= value:
        c += 1
    return c


def resolution_cap(config: ScanConfig, J: int, N: int) -> int:
    if J < 1 or N < 1:
        raise ValueError("J and N must be >= 1")
    degree = N if config.a_cap_policy is CapPolicy.FULL else 2 * N
    return integer_root(J, degree)


@dataclass(frozen=True)
class KeptCells:
    """Cells that survived the density filter, sorted lexicographically by index."""

    resolution: GridResolution
    indices: np.ndarray
    centers: np.ndarray
    counts: np.ndarray
    p: int

    @property
    def K(self) -> int:
        return int(self.indices.shape[0])

    @property
    def volume(self) -> Fraction:
        """Exact total volume ``K / a^N``."""
        return Fraction(self.K, self.resolution.cell_count)

    @property
    def V_t(self) -> float:
        return float(self.volume)

    @property
    def covered(self) -> int:
        return int(self.counts.sum())

    @property
    def cells(self) -> list[tuple[tuple[int, ...], tuple[float, ...], int]]:
        return [
            (tuple(int(k) for k in idx), tuple(float(c) for c in ctr), int(n))
            for idx, ctr, n in zip(self.indices, self.centers, self.counts)
        ]


def filter_cells(hist: CellHistogram, p: int) -> KeptCells:
    """Drop every cell holding fewer than ``p`` points."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    keep = hist.counts >= p
    indices = hist.cells[keep]
    centers = (indices + 0.5) / hist.resolution.a
    return KeptCells(
        resolution=hist.resolution,
        indices=indices,
        centers=centers,
        counts=hist.counts[keep],
        p=int(p),
    )


@dataclass(frozen=True)
class TraceEntry:
    a: int
    occupied: int
    K: int
    V_t: float
    covered: int


class NotFoundReason(str, enum.Enum):
    EMPTY_AFTER_FILTER = "EmptyAfterFilter"
    RESOLUTION_CAP_EXCEEDED = "ResolutionCapExceeded"
    COVERAGE_TOO_LOW = "CoverageTooLow"


@dataclass(frozen=True)
class Found:
    kept: KeptCells
    trace: tuple[TraceEntry, ...]
    p: int
    L: int
    cap: int

    found = True

    @property
    def a(self) -> int:
        return self.kept.resolution.a


@dataclass(frozen=True)
class NotFound:
    reason: NotFoundReason
    trace: tuple[TraceEntry, ...]
    p: int
    L: int
    cap: int

    found = False


ScanOutcome = Union[Found, NotFound]


def scan(dataset: Dataset, config: ScanConfig = ScanConfig(), workers: int = 1) -> ScanOutcome:
    """Run the doubling scan on a normalized dataset.

    The starting resolution is always evaluated; the cap only bounds the
    doubled resolutions. At each resolution: count, filter by ``p``, then
      - nothing kept               -> NotFound(EmptyAfterFilter)
      - volume >= V                -> double ``a``; past the cap -> NotFound(ResolutionCapExceeded)
      - volume < V, covered < L    -> NotFound(CoverageTooLow)
      - volume < V, covered >= L   -> Found
    """
    J, N = dataset.size, dataset.dim
    p = effective_p(config, J)
    L = coverage_limit(config, J)
    cap = resolution_cap(config, J, N)
    V = exact(config.volume_limit)

    trace: list[TraceEntry] = []
    a = int(config.a_start)
    while True:
        hist = build_histogram(dataset, GridResolution(a, N), workers=workers)
        kept = filter_cells(hist, p)
        trace.append(TraceEntry(a, len(hist), kept.K, kept.V_t, kept.covered))
        if kept.K == 0:
            return NotFound(NotFoundReason.EMPTY_AFTER_FILTER, tuple(trace), p, L, cap)
        if kept.volume >= V:
            a *= 2
            if a > cap:
                return NotFound(NotFoundReason.RESOLUTION_CAP_EXCEEDED, tuple(trace), p, L, cap)
            continue
        if kept.covered < L:
            return NotFound(NotFoundReason.COVERAGE_TOO_LOW, tuple(trace), p, L, cap)
        return Found(kept, tuple(trace), p, L, cap)


def certificate_violations(dataset: Dataset, outcome: Found, config: ScanConfig) -> list[str]:
    """Re-check a Found outcome against the raw points, cell by cell.

    Counts are recomputed with a direct membership mask per kept cell rather
    than the sorted grouping used by the scan. Returns an empty list when the
    certificate holds.
    """
    problems = []
    kept = outcome.kept
    a, N = kept.resolution.a, kept.resolution.dim
    p = effective_p(config, dataset.size)
    L = coverage_limit(config, dataset.size)
    owner = cell_indices(dataset.points, a)
    total = 0
    for idx, claimed in zip(kept.indices, kept.counts):
        actual = int(np.all(owner == idx, axis=1).sum())
        total += actual
        if actual != claimed:
            problems.append(f"cell {tuple(idx)}: claimed {claimed} points, found {actual}")
        if actual < p:
            problems.append(f"cell {tuple(idx)}: {actual} points < p={p}")
    if total < L:
        problems.append(f"covered {total} < L={L}")
    if Fraction(kept.K, a**N) >= exact(config.volume_limit):
        problems.append(f"volume {kept.K}/{a**N} not below V={config.volume_limit}")
    if kept.K < 1:
        problems.append("no cells kept")
    return problems
