"""Point-file ingestion and seeded synthetic datasets.

Random numbers come from numpy's PCG64 bit generator, seeded with the given
integer, and only its uniform doubles in [0, 1) are consumed (53 high bits of
each 64-bit output). Gaussian samples are derived from those uniforms by the
Box-Muller transform implemented here, so a dataset depends only on PCG64
and the seed rather than on numpy's distribution code.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, EmptyDataset, IoError, ParseError
from .geometry import Dataset

__all__ = [
    "SYNTHETIC_KINDS",
    "SyntheticSpec",
    "generate",
    "load_points",
    "save_points",
]

Format = Literal["csv", "json"]


def _detect_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")
        return fmt
    return "json" if path.suffix.lower() == ".json" else "csv"


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _load_csv(path: Path, header: bool | None) -> list[list[float]]:
    rows: list[list[float]] = []
    dim = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not cells or cells == [""]:
                continue
            if not rows and dim is None:
                looks_like_header = not all(_is_number(c) for c in cells)
                if header is True or (header is None and looks_like_header):
                    dim = len(cells)
                    continue
            if dim is not None and len(cells) != dim:
                raise DimensionMismatch(f"line {lineno}: {len(cells)} columns, expected {dim}")
            dim = len(cells)
            values = []
            for col, c in enumerate(cells, start=1):
                try:
                    values.append(float(c))
                except ValueError:
                    raise ParseError(f"non-numeric value {c!r}", f"{path}:{lineno}:{col}") from None
            rows.append(values)
    return rows


def _load_json(path: Path) -> list[list[float]]:
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(data, list):
        raise ParseError("top-level value must be an array of points", str(path))
    rows: list[list[float]] = []
    dim = None
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise ParseError("each point must be an array of numbers", f"{path}:row {i}")
        if dim is not None and len(row) != dim:
            raise DimensionMismatch(f"row {i}: {len(row)} coordinates, expected {dim}")
        dim = len(row)
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"non-numeric value {v!r}", f"{path}:row {i}:col {j}")
        rows.append([float(v) for v in row])
    return rows


def load_points(path, format: Format | None = None, header: bool | None = None) -> list[list[float]]:
    """Read raw points from CSV or JSON.

    CSV holds one point per line; a first row that is not entirely numeric is
    treated as a header unless ``header=False``. JSON is an array of arrays.
    The format defaults to the file extension.
    """
    path = Path(path)
    fmt = _detect_format(path, format)
    rows = _load_json(path) if fmt == "json" else _load_csv(path, header)
    if not rows:
        raise EmptyDataset(f"{path}: no points")
    return rows


def save_points(points, path, format: Format | None = None) -> None:
    """Write points so that :func:`load_points` reads back identical floats."""
    path = Path(path)
    fmt = _detect_format(path, format)
    pts = np.asarray(points, dtype=np.float64)
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "json":
                fh.write("[\n")
                fh.write(",\n".join("  [" + ", ".join(repr(float(v)) for v in row) + "]" for row in pts))
                fh.write("\n]\n")
            else:
                for row in pts:
                    fh.write(",".join(repr(float(v)) for v in row) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


SYNTHETIC_KINDS = ("diagonal", "sine-curve", "uniform", "two-clusters")

JITTER_SIGMA = 0.01
CLUSTER_SIGMA = 0.05


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str
    J: int
    N: int = 2
    outlier_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SYNTHETIC_KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {SYNTHETIC_KINDS}")
        if self.J < 1:
            raise ValueError("J must be >= 1")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not 0 <= self.outlier_fraction < 1:
            raise ValueError("outlier_fraction must lie in [0, 1)")


class _Stream:
    def __init__(self, seed: int):
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, shape) -> np.ndarray:
        return self._gen.random(shape)

    def normal(self, shape) -> np.ndarray:
        n = int(np.prod(shape))
        u = self.uniform((2, (n + 1) // 2))
        r = np.sqrt(-2.0 * np.log1p(-u[0]))
        z = np.concatenate([r * np.cos(2 * np.pi * u[1]), r * np.sin(2 * np.pi * u[1])])
        return z[:n].reshape(shape)


def sine_curve(t: np.ndarray, N: int) -> np.ndarray:
    """Smooth curve in [0.1, 0.9] x [0.2, 0.8]^(N-1) for ``t`` in [0, 1].

    Axis 0 runs along ``t``, axis 1 is one full sine period, and further axes
    are cosines of increasing frequency.
    """
    cols = [0.1 + 0.8 * t]
    if N >= 2:
        cols.append(0.5 + 0.3 * np.sin(2 * np.pi * t))
    for k in range(2, N):
        cols.append(0.5 + 0.3 * np.cos(np.pi * k * t))
    return np.stack(cols, axis=1)


def generate(spec: SyntheticSpec) -> Dataset:
    """Deterministic dataset in the unit cube for a given spec and seed."""
    J, N = spec.J, spec.N
    stream = _Stream(spec.seed)

    if spec.kind == "diagonal":
        t = np.arange(J) / (J - 1) if J > 1 else np.array([0.5])
        return Dataset(np.repeat(t[:, None], N, axis=1))
    if spec.kind == "uniform":
        return Dataset(stream.uniform((J, N)))

    n_out = math.floor(spec.outlier_fraction * J + 0.5)
    n_main = J - n_out
    if spec.kind == "sine-curve":
        main = sine_curve(stream.uniform(n_main), N) + JITTER_SIGMA * stream.normal((n_main, N))
    else:  # two-clusters
        centers = np.array([np.full(N, 0.3), np.full(N, 0.7)])
        which = np.arange(n_main) % 2
        main = centers[which] + CLUSTER_SIGMA * stream.normal((n_main, N))
    outliers = stream.uniform((n_out, N))
    return Dataset(np.clip(np.vstack([main, outliers]), 0.0, 1.0))
