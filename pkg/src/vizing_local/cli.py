"""Command-line entry point.

Exit codes: 0 success, 2 bad input, 3 escalation cap reached, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .edge_coloring import (
    AlgorithmConfig,
    EscalationCapExceeded,
    auto_config,
    parallel_vizing_edge_coloring,
    pr_baseline_edge_coloring,
    verify_edge_coloring,
)
from .experiments import ALGORITHMS, DEFAULT_SIZES, ExperimentSpec, VerificationFailure, rows_to_csv, run_experiment
from .graph_core import FAMILIES, Graph, GraphInputError, generate, growth_profile
from .graphio import format_graph, parse_graph_file
from .local_runtime import ACCOUNTING_MODES, ADVERSARIAL_PATTERNS, ID_SCHEMES, assign_ids
from .symmetry_breaking import VertexColoring, gps_vertex_coloring, verify_vertex_coloring

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ESCALATION = 3
EXIT_VERIFY = 4


class InputError(Exception):
    pass


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(args) -> Graph:
    if getattr(args, "graph", None):
        try:
            return parse_graph_file(args.graph)
        except OSError as exc:
            raise InputError(f"cannot read {args.graph}: {exc.strerror}") from None
    if getattr(args, "family", None):
        return generate(args.family, *args.dims)
    raise InputError("give a graph file (--graph) or a family (--family with --dims)")


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph file in 'p edge n m' / 'e u v' format")
    p.add_argument("--family", choices=FAMILIES, help="generate a graph instead of reading one")
    p.add_argument("--dims", type=int, nargs="+", default=[], help="family dimensions")


def _add_ids(p: argparse.ArgumentParser) -> None:
    p.add_argument("--id-scheme", choices=ID_SCHEMES, default="sequential")
    p.add_argument("--seed", type=int, default=0, help="seed for the permuted id scheme")
    p.add_argument("--pattern", choices=ADVERSARIAL_PATTERNS, default="zigzag")


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("-R", "--radius", type=int, default=3, dest="R")
    p.add_argument("--auto-R", action="store_true", help="pick R from the growth profile")
    p.add_argument("--assumed-C", type=float, default=1.0)
    p.add_argument("--accounting", choices=ACCOUNTING_MODES, default="optimistic")
    p.add_argument("--max-escalations", type=int, default=16)


def cmd_generate(args) -> int:
    G = generate(args.family, *args.dims)
    _emit(format_graph(G), args.output)
    return EXIT_OK


def cmd_color(args) -> int:
    G = _load_graph(args)
    ids = assign_ids(G, args.id_scheme, seed=args.seed, pattern=args.pattern)
    if args.algorithm == "main":
        kw = dict(max_escalations=args.max_escalations, accounting_mode=args.accounting)
        if args.auto_R:
            config, sel = auto_config(G, assumed_C=args.assumed_C, **kw)
            if sel.warning:
                print("warning: growth bound not met at the largest profiled radius", file=sys.stderr)
        else:
            config = AlgorithmConfig(R=args.R, **kw)
        try:
            report = parallel_vizing_edge_coloring(G, ids, config)
        except EscalationCapExceeded as exc:
            _emit(json.dumps(exc.report.to_json(), indent=2) + "\n", args.output)
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ESCALATION
        violations = verify_edge_coloring(G, report.coloring, G.max_degree + 1, require_total=True)
        doc = report.to_json()
    elif args.algorithm == "baseline":
        res = pr_baseline_edge_coloring(G, ids)
        violations = verify_edge_coloring(G, res.coloring, res.palette, require_total=True)
        doc = {
            "status": "success",
            "max_degree": G.max_degree,
            "palette": res.palette,
            "coloring": res.coloring.to_json(),
            "transcript": res.transcript.to_json(),
            "total_rounds": res.transcript.total_rounds,
        }
    else:
        coloring, transcript = gps_vertex_coloring(G, ids)
        violations = verify_vertex_coloring(G, coloring)
        doc = {
            "status": "success",
            "max_degree": G.max_degree,
            "palette": coloring.palette_size,
            "coloring": coloring.to_json(),
            "transcript": transcript.to_json(),
            "total_rounds": transcript.total_rounds,
        }
    if violations:
        _dump_violations(violations)
        return EXIT_VERIFY
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def _dump_violations(violations, limit: int = 20) -> None:
    print(f"verification failed: {len(violations)} violation(s)", file=sys.stderr)
    for v in violations[:limit]:
        print("  " + " ".join(map(str, v)), file=sys.stderr)


def _read_coloring(path: str) -> tuple[dict[int, int], int | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    palette = None
    if isinstance(doc, dict) and "coloring" in doc:
        palette = doc.get("palette")
        doc = doc["coloring"]
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object mapping index to color")
    try:
        return {int(k): int(v) for k, v in doc.items()}, palette
    except (TypeError, ValueError):
        raise InputError(f"{path}: indices and colors must be integers") from None


def cmd_verify(args) -> int:
    G = _load_graph(args)
    coloring, palette = _read_coloring(args.coloring)
    if args.palette is not None:
        palette = args.palette
    if args.kind == "edge":
        palette = palette if palette is not None else G.max_degree + 1
        violations = verify_edge_coloring(G, coloring, palette, require_total=not args.partial)
    else:
        palette = palette if palette is not None else G.max_degree + 1
        unknown = [v for v in coloring if not 0 <= v < G.vertex_count]
        missing = [v for v in range(G.vertex_count) if v not in coloring]
        if unknown or missing:
            violations = [("unknown-vertex", v) for v in unknown] + [("uncolored", v) for v in missing]
        else:
            cols = [coloring[v] for v in range(G.vertex_count)]
            violations = verify_vertex_coloring(G, VertexColoring(np.asarray(cols, dtype=np.int64), palette))
    if violations:
        _dump_violations(violations)
        return EXIT_VERIFY
    print(f"ok: proper {args.kind} coloring within {palette} colors")
    return EXIT_OK


def cmd_growth(args) -> int:
    G = _load_graph(args)
    prof = growth_profile(G, args.r_max)
    lines = ["R,max_ball_size"] + [f"{R},{s}" for R, s in enumerate(prof.max_ball_size)]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = ExperimentSpec(
        family=args.family,
        sizes=tuple(args.sizes),
        algorithm=args.algorithm,
        id_scheme=args.id_scheme,
        seed=args.seed,
        pattern=args.pattern,
        R=args.R,
        accounting_mode=args.accounting,
        max_escalations=args.max_escalations,
        output=args.output,
    )
    try:
        rows = run_experiment(spec)
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        _dump_violations(exc.violations)
        return EXIT_VERIFY
    except EscalationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESCALATION
    _emit(rows_to_csv(rows), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vizing-local", description="Distributed edge coloring on bounded-growth graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a family member in graph-file format")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("dims", type=int, nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("color", help="run an algorithm and write a JSON report")
    _add_graph_source(p)
    _add_ids(p)
    _add_config(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="main")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="check a coloring JSON against a graph")
    _add_graph_source(p)
    p.add_argument("-c", "--coloring", required=True, help="JSON map {index: color} or a report from 'color'")
    p.add_argument("--kind", choices=("edge", "vertex"), default="edge")
    p.add_argument("--palette", type=int, help="palette size (default: report palette or max degree + 1)")
    p.add_argument("--partial", action="store_true", help="allow uncolored edges")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("growth", help="max ball size per radius as CSV")
    _add_graph_source(p)
    p.add_argument("--r-max", type=int, default=10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("bench", help="size sweep as CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--sizes", type=int, nargs="*", default=list(DEFAULT_SIZES))
    p.add_argument("--algorithm", choices=ALGORITHMS, default="main")
    _add_ids(p)
    _add_config(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, GraphInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
