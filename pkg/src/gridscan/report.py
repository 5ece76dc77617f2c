"""Versioned JSON run reports.

A report is a plain tree of dicts, lists, strings, ints, floats and nulls.
Keys are written in a fixed order and floats with 17 significant digits, so
the same run always produces the same bytes. Schema (version 1)::

    {
      "schema": "gridscan.report",
      "version": 1,
      "config":   {"volume_limit", "coverage_fraction",
                   "density": {"kind": "fraction"|"absolute", "value"},
                   "a_cap_policy", "a_start", "manifold_dim"},
      "dataset":  {"J", "N", "offset": [..], "scale": [..]} | null,
      "outcome":  {"status": "Found"|"NotFound", "reason": str|null,
                   "p", "L", "cap", "a": int|null, "K", "V_t", "covered"},
      "trace":    [{"a", "occupied", "K", "V_t", "covered"}, ...],
      "kept":     [{"index": [..], "center": [..], "count"}, ...],
      "manifold": {"s", "chain": [[cell index], ..],
                   "simplices": [[vertex positions], ..], "tied_steps"} | null,
      "timings_ms": {phase: milliseconds, ...}
    }

Trace-only reports carry empty ``kept`` and a null ``manifold``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import IoError, ParseError
from .geometry import GridResolution, UnitCubeTransform
from .manifold import Chain, PiecewiseLinearManifold
from .scan import AbsoluteDensity, Found, KeptCells, ScanConfig, ScanOutcome

__all__ = [
    "SCHEMA",
    "SCHEMA_VERSION",
    "RunReport",
    "build_report",
    "dumps",
    "emit_report",
    "load_report",
]

SCHEMA = "gridscan.report"
SCHEMA_VERSION = 1


@dataclass
class RunReport:
    config: dict[str, Any]
    outcome: dict[str, Any]
    trace: list[dict[str, Any]]
    kept: list[dict[str, Any]] = field(default_factory=list)
    manifold: dict[str, Any] | None = None
    dataset: dict[str, Any] | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)
    version: int = SCHEMA_VERSION

    @property
    def found(self) -> bool:
        return self.outcome["status"] == "Found"

    def to_tree(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "version": self.version,
            "config": self.config,
            "dataset": self.dataset,
            "outcome": self.outcome,
            "trace": self.trace,
            "kept": self.kept,
            "manifold": self.manifold,
            "timings_ms": self.timings_ms,
        }

    @classmethod
    def from_tree(cls, tree: dict[str, Any]) -> "RunReport":
        if tree.get("schema") != SCHEMA:
            raise ParseError(f"not a {SCHEMA} document")
        if tree.get("version") != SCHEMA_VERSION:
            raise ParseError(f"unsupported report version {tree.get('version')!r}")
        return cls(
            config=tree["config"],
            outcome=tree["outcome"],
            trace=tree["trace"],
            kept=tree["kept"],
            manifold=tree["manifold"],
            dataset=tree["dataset"],
            timings_ms=tree["timings_ms"],
            version=tree["version"],
        )

    def kept_cells(self) -> KeptCells | None:
        """Rebuild the kept cells of a Found report (None otherwise)."""
        if not self.found or not self.kept:
            return None
        N = len(self.kept[0]["index"])
        return KeptCells(
            resolution=GridResolution(self.outcome["a"], N),
            indices=np.array([c["index"] for c in self.kept], dtype=np.int64),
            centers=np.array([c["center"] for c in self.kept], dtype=np.float64),
            counts=np.array([c["count"] for c in self.kept], dtype=np.int64),
            p=self.outcome["p"],
        )

    def chain(self) -> Chain | None:
        if not self.manifold:
            return None
        a = self.outcome["a"]
        cells = np.array(self.manifold["chain"], dtype=np.int64)
        return Chain(vertices=(cells + 0.5) / a, cells=cells)


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _emit(node: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if node is None:
        out.append("null")
    elif isinstance(node, bool):
        out.append("true" if node else "false")
    elif isinstance(node, (int, np.integer)):
        out.append(str(int(node)))
    elif isinstance(node, (float, np.floating)):
        out.append(_float(float(node)))
    elif isinstance(node, str):
        out.append(json.dumps(node))
    elif isinstance(node, dict):
        if not node:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(node.items()):
            out.append(f"{pad}  {json.dumps(str(key))}: ")
            _emit(value, indent + 1, out)
            out.append(",\n" if i < len(node) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(node, (list, tuple)):
        if not node:
            out.append("[]")
        elif all(not isinstance(v, (dict, list, tuple)) for v in node):
            # scalar arrays (coordinates, indices) stay on one line
            parts: list[str] = []
            for v in node:
                _emit(v, 0, parts)
                parts.append(", ")
            out.append("[" + "".join(parts[:-1]) + "]")
        else:
            out.append("[\n")
            for i, value in enumerate(node):
                out.append(pad + "  ")
                _emit(value, indent + 1, out)
                out.append(",\n" if i < len(node) - 1 else "\n")
            out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(node).__name__}")


def dumps(report: RunReport) -> str:
    out: list[str] = []
    _emit(report.to_tree(), 0, out)
    return "".join(out) + "\n"


def emit_report(report: RunReport, path) -> None:
    try:
        Path(path).write_text(dumps(report))
    except OSError as exc:
        raise IoError(f"cannot write report to {path}: {exc}") from exc


def load_report(path) -> RunReport:
    try:
        tree = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    return RunReport.from_tree(tree)


def config_tree(config: ScanConfig, manifold_dim: int) -> dict[str, Any]:
    density = config.density
    if isinstance(density, AbsoluteDensity):
        dens = {"kind": "absolute", "value": int(density.p)}
    else:
        dens = {"kind": "fraction", "value": float(density.fraction)}
    return {
        "volume_limit": float(config.volume_limit),
        "coverage_fraction": float(config.coverage_fraction),
        "density": dens,
        "a_cap_policy": config.a_cap_policy.value,
        "a_start": int(config.a_start),
        "manifold_dim": int(manifold_dim),
    }


def build_report(
    config: ScanConfig,
    outcome: ScanOutcome,
    manifold: PiecewiseLinearManifold | None = None,
    *,
    manifold_dim: int = 1,
    tied_steps: int | None = None,
    transform: UnitCubeTransform | None = None,
    J: int | None = None,
    timings_ms: dict[str, float] | None = None,
    trace_only: bool = False,
) -> RunReport:
    found = isinstance(outcome, Found)
    kept = outcome.kept if found else None
    summary = {
        "status": "Found" if found else "NotFound",
        "reason": None if found else outcome.reason.value,
        "p": int(outcome.p),
        "L": int(outcome.L),
        "cap": int(outcome.cap),
        "a": int(outcome.a) if found else None,
        "K": kept.K if found else None,
        "V_t": kept.V_t if found else None,
        "covered": kept.covered if found else None,
    }
    trace = [
        {"a": e.a, "occupied": e.occupied, "K": e.K, "V_t": float(e.V_t), "covered": e.covered}
        for e in outcome.trace
    ]
    dataset = None
    if transform is not None:
        dataset = {
            "J": int(J) if J is not None else None,
            "N": int(transform.offset.shape[0]),
            "offset": [float(v) for v in transform.offset],
            "scale": [float(v) for v in transform.scale],
        }

    report = RunReport(
        config=config_tree(config, manifold_dim),
        outcome=summary,
        trace=trace,
        dataset=dataset,
        timings_ms=dict(timings_ms or {}),
    )
    if trace_only or not found:
        return report

    report.kept = [
        {"index": list(idx), "center": list(ctr), "count": n} for idx, ctr, n in kept.cells
    ]
    if manifold is not None:
        report.manifold = {
            "s": manifold.s,
            "chain": [[int(k) for k in row] for row in manifold.chain.cells],
            "simplices": [list(t) for t in manifold.simplices],
            "tied_steps": tied_steps,
        }
    return report
