"""Benchmark sweeps: one verified CSV row per (family, n) cell."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .edge_coloring import (
    AlgorithmConfig,
    EscalationCapExceeded,
    parallel_vizing_edge_coloring,
    pr_baseline_edge_coloring,
    verify_edge_coloring,
)
from .graph_core import FAMILIES, Graph, generate
from .local_runtime import assign_ids
from .symmetry_breaking import gps_vertex_coloring, verify_vertex_coloring

ALGORITHMS = ("main", "baseline", "gps")
DEFAULT_SIZES = (10**2, 10**3, 10**4, 10**5)
WORKERS_ENV = "VIZING_LOCAL_WORKERS"

CSV_COLUMNS = (
    "family",
    "n",
    "delta",
    "R",
    "algorithm",
    "palette_used",
    "total_rounds_optimistic",
    "total_rounds_faithful",
    "escalations",
    "max_chain_size",
    "verified",
)

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "edge coloring run report",
    "type": "object",
    "required": [
        "status",
        "max_degree",
        "palette",
        "coloring",
        "transcript",
        "accounting_mode",
        "total_rounds_optimistic",
        "total_rounds_faithful",
        "class_sizes",
        "chain_size_histogram",
        "escalations",
    ],
    "properties": {
        "status": {"enum": ["success", "escalation_cap"]},
        "max_degree": {"type": "integer", "minimum": 0},
        "palette": {"type": "integer", "minimum": 1},
        "coloring": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
        "transcript": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["phase", "radius", "rounds"],
                "properties": {
                    "phase": {"type": "string"},
                    "radius": {"type": "integer", "minimum": 0},
                    "rounds": {"type": "integer", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "accounting_mode": {"enum": ["optimistic", "faithful"]},
        "total_rounds_optimistic": {"type": "integer", "minimum": 0},
        "total_rounds_faithful": {"type": "integer", "minimum": 0},
        "radii": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "class_counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "class_sizes": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "chain_size_histogram": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        "escalations": {"type": "integer", "minimum": 0},
        "parallel_checks": {"type": "integer", "minimum": 0},
        "parallel_violations": {"type": "integer", "minimum": 0},
    },
}


class VerificationFailure(RuntimeError):
    def __init__(self, message: str, violations: list):
        super().__init__(message)
        self.violations = violations


@dataclass
class ExperimentSpec:
    family: str
    sizes: Sequence[int] = DEFAULT_SIZES
    algorithm: str = "main"
    id_scheme: str = "permuted"
    seed: int = 0
    pattern: str = "zigzag"
    R: int = 3
    accounting_mode: str = "optimistic"
    max_escalations: int = 16
    output: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        sizes = list(self.sizes)
        if any(s <= 0 for s in sizes) or any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sweep sizes must be positive and strictly increasing")
        self.sizes = tuple(sizes)


def instance_for_size(family: str, n: int) -> Graph:
    """Member of ``family`` with (about) ``n`` vertices."""
    if family in ("grid", "torus"):
        side = max(3 if family == "torus" else 1, round(math.sqrt(n)))
        return generate(family, side, side)
    if family == "matching":
        return generate(family, max(1, n // 2))
    if family == "star":
        return generate(family, max(1, n - 1))
    if family == "binary_tree":
        return generate(family, max(0, int(math.log2(n + 1)) - 1))
    return generate(family, n)


def run_cell(spec: ExperimentSpec, n: int) -> dict:
    G = instance_for_size(spec.family, n)
    ids = assign_ids(G, spec.id_scheme, seed=spec.seed, pattern=spec.pattern)
    delta = G.max_degree
    row = {"family": spec.family, "n": G.vertex_count, "delta": delta, "algorithm": spec.algorithm}
    if spec.algorithm == "main":
        config = AlgorithmConfig(R=spec.R, max_escalations=spec.max_escalations, accounting_mode=spec.accounting_mode)
        report = parallel_vizing_edge_coloring(G, ids, config)
        violations = verify_edge_coloring(G, report.coloring, delta + 1, require_total=True)
        row.update(
            R=spec.R,
            palette_used=report.coloring.colors_used(),
            total_rounds_optimistic=report.rounds_optimistic,
            total_rounds_faithful=report.rounds_faithful,
            escalations=report.escalations,
            max_chain_size=report.max_chain_size,
        )
    elif spec.algorithm == "baseline":
        res = pr_baseline_edge_coloring(G, ids)
        violations = verify_edge_coloring(G, res.coloring, res.palette, require_total=True)
        rounds = res.transcript.total_rounds
        row.update(R="", palette_used=res.coloring.colors_used(), total_rounds_optimistic=rounds,
                   total_rounds_faithful=rounds, escalations=0, max_chain_size=0)
    else:
        coloring, transcript = gps_vertex_coloring(G, ids)
        violations = verify_vertex_coloring(G, coloring)
        if coloring.palette_size > delta + 1:
            violations.append(("palette-size", coloring.palette_size))
        rounds = transcript.total_rounds
        row.update(R="", palette_used=coloring.colors_used(), total_rounds_optimistic=rounds,
                   total_rounds_faithful=rounds, escalations=0, max_chain_size=0)
    if violations:
        raise VerificationFailure(f"{spec.family} n={n} {spec.algorithm}: {len(violations)} violations", violations)
    row["verified"] = True
    return {k: row[k] for k in CSV_COLUMNS}


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> list[dict]:
    """Run every size of the sweep; rows come back sorted by (family, n).

    ``workers`` (default: env ``VIZING_LOCAL_WORKERS`` or 1) only changes
    wall-clock time.  Raises :class:`VerificationFailure` on any bad coloring
    and :class:`EscalationCapExceeded` if the main algorithm gives up.
    """
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    jobs = [(spec, n) for n in spec.sizes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell_args, jobs))
    else:
        rows = [run_cell(*job) for job in jobs]
    rows.sort(key=lambda r: (r["family"], r["n"]))
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_csv(rows: Sequence[dict], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows))


__all__ = [
    "ALGORITHMS",
    "CSV_COLUMNS",
    "DEFAULT_SIZES",
    "EscalationCapExceeded",
    "ExperimentSpec",
    "REPORT_SCHEMA",
    "VerificationFailure",
    "instance_for_size",
    "run_cell",
    "run_experiment",
    "rows_to_csv",
    "write_csv",
]
