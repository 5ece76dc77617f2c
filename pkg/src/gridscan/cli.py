"""Command-line entry point.

Exit codes: 0 manifold found, 3 no manifold found, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bench import format_bench_csv, run_bench, write_bench_csv
from .data import SYNTHETIC_KINDS, SyntheticSpec, generate, load_points, save_points
from .errors import GridScanError
from .geometry import normalize_to_unit_cube
from .manifold import build_chain, build_manifold, count_tied_steps
from .plot import emit_plot
from .report import build_report, emit_report, load_report
from .scan import AbsoluteDensity, CapPolicy, Found, FractionDensity, ScanConfig, scan

EXIT_FOUND = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOT_FOUND = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return value


def _int_list(raw: str) -> list[int]:
    try:
        return [int(float(x)) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from None


def _add_input_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--input", "-i", required=required, help="point file (CSV or JSON)")
    p.add_argument("--format", choices=("csv", "json"), help="input format (default: from extension)")
    p.add_argument("--no-header", action="store_true", help="never treat the first CSV row as a header")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridscan", description="Detect low-dimensional structure in point clouds by grid scanning.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="run the adaptive grid scan on a point file")
    _add_input_args(p)
    p.add_argument("--volume-limit", type=float, default=0.4, help="V: kept volume must be below this (default 0.4)")
    p.add_argument("--coverage", type=float, default=0.9, help="L as a fraction of the point count (default 0.9)")
    dens = p.add_mutually_exclusive_group()
    dens.add_argument("--density-fraction", type=float, default=None, help="p as a fraction of the point count (default 0.005)")
    dens.add_argument("--density-abs", type=_positive_int, default=None, help="p as an absolute count")
    p.add_argument("--a-cap", choices=[c.value for c in CapPolicy], default="full", help="resolution cap policy")
    p.add_argument("--a-start", type=int, default=2, help="starting resolution (default 2)")
    p.add_argument("--manifold-dim", type=_positive_int, default=1, help="s: dimension of the built manifold")
    p.add_argument("--report", help="write a JSON run report here")
    p.add_argument("--plot", help="write an SVG figure here")
    p.add_argument("--trace-only", action="store_true", help="report omits kept cells and manifold")
    p.add_argument("--no-timings", action="store_true", help="report omits timings (byte-stable output)")
    p.add_argument("--workers", type=_positive_int, default=1, help="threads for histogram counting")

    p = sub.add_parser("gen", help="write a seeded synthetic dataset")
    p.add_argument("--kind", choices=SYNTHETIC_KINDS, required=True)
    p.add_argument("--n-points", "-J", type=_positive_int, required=True)
    p.add_argument("--dim", "-N", type=_positive_int, default=2)
    p.add_argument("--outliers", type=float, default=0.0, help="outlier fraction in [0, 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("bench", help="time scan against the PCA baseline")
    p.add_argument("--sizes", type=_int_list, default=[1000, 2000, 4000])
    p.add_argument("--dim", "-N", type=_positive_int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=_positive_int, default=3)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--output", "-o", help="CSV destination (default: stdout)")

    p = sub.add_parser("plot", help="re-render the SVG figure of a saved report")
    p.add_argument("--report", required=True)
    _add_input_args(p)
    p.add_argument("--output", "-o", required=True)
    return parser


def _scan_config(args) -> ScanConfig:
    if args.density_abs is not None:
        density = AbsoluteDensity(args.density_abs)
    else:
        density = FractionDensity(0.005 if args.density_fraction is None else args.density_fraction)
    return ScanConfig(
        volume_limit=args.volume_limit,
        coverage_fraction=args.coverage,
        density=density,
        a_cap_policy=CapPolicy(args.a_cap),
        a_start=args.a_start,
    )


def _load_dataset(args):
    raw = load_points(args.input, args.format, header=False if args.no_header else None)
    return normalize_to_unit_cube(raw)


def _cmd_scan(args) -> int:
    try:
        config = _scan_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    timings = {}
    t0 = time.perf_counter()
    dataset, transform = _load_dataset(args)
    timings["load"] = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    outcome = scan(dataset, config, workers=args.workers)
    timings["scan"] = (time.perf_counter() - t0) * 1000.0

    manifold = ties = None
    if isinstance(outcome, Found):
        t0 = time.perf_counter()
        chain = build_chain(outcome.kept)
        manifold = build_manifold(chain, args.manifold_dim)
        ties = count_tied_steps(outcome.kept)
        timings["manifold"] = (time.perf_counter() - t0) * 1000.0
        k = outcome.kept
        print(
            f"Found: a={outcome.a} K={k.K} V_t={k.V_t:.4f} covered={k.covered}/{dataset.size} "
            f"p={outcome.p} simplices={len(manifold.simplices)} tied_steps={ties}"
        )
    else:
        last = outcome.trace[-1] if outcome.trace else None
        where = f" at a={last.a}" if last else ""
        print(f"NotFound: {outcome.reason.value}{where} p={outcome.p} L={outcome.L} cap={outcome.cap}")

    if args.plot:
        t0 = time.perf_counter()
        emit_plot(dataset, outcome.kept if manifold else None, manifold, args.plot)
        timings["plot"] = (time.perf_counter() - t0) * 1000.0
    if args.report:
        report = build_report(
            config,
            outcome,
            manifold,
            manifold_dim=args.manifold_dim,
            tied_steps=ties,
            transform=transform,
            J=dataset.size,
            timings_ms=None if args.no_timings else timings,
            trace_only=args.trace_only,
        )
        emit_report(report, args.report)
    return EXIT_FOUND if manifold is not None else EXIT_NOT_FOUND


def _cmd_gen(args) -> int:
    try:
        spec = SyntheticSpec(args.kind, args.n_points, args.dim, args.outliers, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    save_points(generate(spec).points, args.output, args.format)
    return 0


def _cmd_bench(args) -> int:
    try:
        records = run_bench(args.sizes, args.dim, args.seed, repeats=args.repeats, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.output:
        write_bench_csv(records, args.output)
    else:
        sys.stdout.write(format_bench_csv(records))
    return 0


def _cmd_plot(args) -> int:
    report = load_report(args.report)
    dataset, _ = _load_dataset(args)
    emit_plot(dataset, report.kept_cells(), report.chain(), args.output)
    return 0


COMMANDS = {"scan": _cmd_scan, "gen": _cmd_gen, "bench": _cmd_bench, "plot": _cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gridscan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GridScanError, OSError) as exc:
        print(f"gridscan: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
