"""Wall-clock comparison of the grid scan against the PCA baseline.

Timings are single-threaded unless ``workers > 1`` is asked for; the worker
count is recorded with every row. Each timing is the median of ``repeats``
runs after one untimed warm-up.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .data import SyntheticSpec, generate
from .errors import IoError
from .pca import pca_fit
from .scan import ScanConfig, scan

__all__ = ["BenchRecord", "format_bench_csv", "median_time", "run_bench", "write_bench_csv"]

BENCH_FIELDS = ("method", "J", "N", "millis", "resolution", "iterations", "workers")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    J: int
    N: int
    millis: float
    resolution: int  # last a visited by the scan; 0 for pca
    iterations: int
    workers: int = 1

    def __post_init__(self):
        if self.millis < 0:
            raise ValueError("timings must be non-negative")


def median_time(fn: Callable[[], object], repeats: int = 3) -> tuple[float, object]:
    """Median wall time in milliseconds over ``repeats`` calls, plus the last result."""
    result = fn()  # warm-up
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(times), result


def run_bench(
    sizes: Sequence[int],
    N: int = 2,
    seed: int = 0,
    *,
    repeats: int = 3,
    config: ScanConfig | None = None,
    workers: int = 1,
    outlier_fraction: float = 0.08,
    s: int = 1,
) -> list[BenchRecord]:
    """Time ``scan`` and ``pca_fit`` on seeded sine-curve data at each size."""
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    config = config or ScanConfig(volume_limit=0.5)
    records = []
    for J in sizes:
        ds = generate(SyntheticSpec("sine-curve", int(J), N, outlier_fraction, seed))
        ms, outcome = median_time(lambda: scan(ds, config, workers=workers), repeats)
        a_reached = outcome.trace[-1].a if outcome.trace else 0
        records.append(BenchRecord("scan", int(J), N, ms, a_reached, len(outcome.trace), workers))
        ms, _ = median_time(lambda: pca_fit(ds, min(s, N)), repeats)
        records.append(BenchRecord("pca", int(J), N, ms, 0, min(s, N), 1))
    return records


def format_bench_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_FIELDS)
    for r in records:
        writer.writerow([r.method, r.J, r.N, f"{r.millis:.3f}", r.resolution, r.iterations, r.workers])
    return buf.getvalue()


def write_bench_csv(records: Sequence[BenchRecord], path) -> None:
    try:
        Path(path).write_text(format_bench_csv(records))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
