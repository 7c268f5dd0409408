"""Distributed (Δ+1)-edge-coloring for bounded-growth graphs, the (2Δ-1) baseline, verifiers.

The main algorithm splits the edges into classes whose members are more than
``2R`` apart, then sweeps the classes in order.  Every edge of a class is
augmented inside its own radius-R ball against the same snapshot; the balls of
one class are disjoint, so the recolorings are merged simultaneously.  Edges
whose chain does not stay within distance ``R - 1`` are deferred and retried
with a doubled radius.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .graph_core import Graph, GrowthProfile, PowerGraph, growth_profile, power_graph_on_edges
from .local_runtime import ACCOUNTING_MODES, NodeIdentifiers, RoundTranscript
from .symmetry_breaking import color_power_graph, distance_edge_classes
from .vizing_engine import ConfinementFailure, PartialEdgeColoring, augment_in_ball


class EscalationCapExceeded(RuntimeError):
    """Some edges were still deferred after ``max_escalations`` radius doublings."""

    def __init__(self, message: str, report: "ColoringRunReport"):
        super().__init__(message)
        self.report = report


class ParallelSafetyError(AssertionError):
    """Two augmentations of the same class touched a common vertex."""


@dataclass(frozen=True)
class RSelection:
    R: int
    epsilon: Fraction
    R_eps: int
    warning: bool


def select_R(profile: GrowthProfile, delta: int, assumed_C: float = 1) -> RSelection:
    """Radius from the growth bound: ``eps = 1 / (3 C f(1)^7)``, ``R = max(R(eps), ceil(1/eps), 3)``.

    ``R(eps)`` is the least recorded radius from which ``f(R) < exp(eps R)``
    holds for every larger recorded radius.  If the bound fails at the largest
    recorded radius, the profile's maximum radius is used and ``warning`` is set.
    """
    if profile.max_radius < 1:
        raise ValueError("profile must record radius 1")
    if assumed_C < 1:
        raise ValueError("assumed_C must be at least 1")
    f1 = profile(1)
    if delta > f1 - 1:
        raise ValueError(f"max degree {delta} exceeds f(1) - 1 = {f1 - 1}")
    eps = 1 / (3 * Fraction(assumed_C) * f1**7)
    eps_f = float(eps)
    r_eps = None
    for R in range(profile.max_radius, -1, -1):
        if math.log(profile(R)) < eps_f * R:
            r_eps = R
        else:
            break
    warning = r_eps is None
    if warning:
        r_eps = profile.max_radius
    return RSelection(max(r_eps, math.ceil(1 / eps), 3), eps, r_eps, warning)


@dataclass
class AlgorithmConfig:
    R: int = 3
    escalation_factor: int = 2
    max_escalations: int = 16
    accounting_mode: str = "optimistic"
    assumed_C: float | None = None  # recorded when R came from select_R

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("R must be at least 1")
        if self.escalation_factor < 2:
            raise ValueError("escalation factor must be at least 2")
        if self.max_escalations < 0:
            raise ValueError("escalation cap must be nonnegative")
        if self.accounting_mode not in ACCOUNTING_MODES:
            raise ValueError(f"accounting mode must be one of {ACCOUNTING_MODES}")


def auto_config(G: Graph, assumed_C: float = 1, r_max: int = 16, **kw) -> tuple[AlgorithmConfig, RSelection]:
    """Config with R from :func:`select_R`.

    R is clamped to the vertex count: beyond it every ball is a whole
    component, so larger radii behave identically.
    """
    prof = growth_profile(G, max(1, r_max))
    sel = select_R(prof, G.max_degree, assumed_C)
    return AlgorithmConfig(R=max(1, min(sel.R, G.vertex_count)), assumed_C=assumed_C, **kw), sel


def class_phase_cost(R: int) -> tuple[int, int]:
    """(radius, rounds) charged per class sweep: gather the radius-(R+1) view, write back R hops."""
    return R + 1, 2 * R + 1


@dataclass
class ColoringRunReport:
    coloring: PartialEdgeColoring
    transcript: RoundTranscript
    rounds_optimistic: int
    rounds_faithful: int
    max_degree: int
    palette: int
    radii: list[int] = field(default_factory=list)
    class_counts: list[int] = field(default_factory=list)
    class_sizes: list[list[int]] = field(default_factory=list)
    chain_sizes: Counter = field(default_factory=Counter)
    escalations: int = 0
    parallel_checks: int = 0
    parallel_violations: int = 0
    status: str = "success"

    @property
    def max_chain_size(self) -> int:
        return max(self.chain_sizes, default=0)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "max_degree": self.max_degree,
            "palette": self.palette,
            "coloring": self.coloring.to_json(),
            "transcript": self.transcript.to_json(),
            "accounting_mode": self.transcript.accounting_mode,
            "total_rounds_optimistic": self.rounds_optimistic,
            "total_rounds_faithful": self.rounds_faithful,
            "radii": self.radii,
            "class_counts": self.class_counts,
            "class_sizes": self.class_sizes,
            "chain_size_histogram": {str(k): v for k, v in sorted(self.chain_sizes.items())},
            "escalations": self.escalations,
            "parallel_checks": self.parallel_checks,
            "parallel_violations": self.parallel_violations,
        }


def parallel_vizing_edge_coloring(
    G: Graph,
    ids: NodeIdentifiers,
    config: AlgorithmConfig | None = None,
    power_graph: PowerGraph | None = None,
) -> ColoringRunReport:
    """Proper (Δ+1)-edge-coloring by class-parallel in-ball augmentation.

    ``power_graph`` may pass a precomputed distance-``2R`` power graph of ``G``
    for the first sweep.  Raises :class:`EscalationCapExceeded` (carrying the
    partial report) if edges remain after ``config.max_escalations`` doublings.
    """
    config = config or AlgorithmConfig()
    delta = G.max_degree
    phi = PartialEdgeColoring(G, delta + 1)
    optimistic = RoundTranscript("optimistic")
    faithful = RoundTranscript("faithful")
    report = ColoringRunReport(phi, optimistic, 0, 0, delta, delta + 1)
    stamp = [-1] * G.vertex_count
    token = 0
    pending: list[int] | None = None  # None = all edges
    R = config.R
    sweep = 0
    while pending is None or pending:
        if sweep > 0:
            report.escalations += 1
            if report.escalations > config.max_escalations:
                report.status = "escalation_cap"
                _finish(report, optimistic, faithful, config)
                raise EscalationCapExceeded(
                    f"{len(pending)} edges still deferred after {config.max_escalations} escalations", report
                )
        if pending is None and power_graph is not None and power_graph.distance_bound == 2 * R:
            pg = power_graph
        else:
            pg = power_graph_on_edges(G, 2 * R, members=pending)
        classes, t = distance_edge_classes(G, R, ids, power_graph=pg)
        tag = f"sweep{sweep}(R={R})/"
        optimistic.extend(t, tag)
        faithful.extend(t, tag)
        radius, cost = class_phase_cost(R)
        deferred: list[int] = []
        sizes = []
        for ci, group in enumerate(classes.groups()):
            sizes.append(len(group))
            if len(group) == 0:
                continue
            token += 1
            plans = []
            for e in group.tolist():
                res = augment_in_ball(G, phi, e, R, commit=False)
                if isinstance(res, ConfinementFailure):
                    deferred.append(e)
                else:
                    plans.append(res)
            for res in plans:
                for w in res.touched_vertices(G):
                    if stamp[w] == token:
                        report.parallel_violations += 1
                        raise ParallelSafetyError(f"class {ci} of sweep {sweep}: vertex {w} touched twice")
                    stamp[w] = token
            report.parallel_checks += len(plans)
            for res in plans:
                res.apply(phi)
                report.chain_sizes[len(res.modified_edges)] += 1
            optimistic.charge(f"{tag}class-{ci}", radius, cost)
            faithful.charge(f"{tag}class-{ci}", radius, cost)
        nonempty = sum(1 for s in sizes if s)
        worst_case_classes = (2 * delta) ** (2 * R)
        faithful.charge(f"{tag}empty-classes", radius, max(0, worst_case_classes - nonempty) * cost)
        report.radii.append(R)
        report.class_counts.append(classes.class_count)
        report.class_sizes.append(sizes)
        pending = sorted(deferred)
        R *= config.escalation_factor
        sweep += 1
    _finish(report, optimistic, faithful, config)
    return report


def _finish(report: ColoringRunReport, optimistic: RoundTranscript, faithful: RoundTranscript, config: AlgorithmConfig):
    report.rounds_optimistic = optimistic.total_rounds
    report.rounds_faithful = faithful.total_rounds
    report.transcript = faithful if config.accounting_mode == "faithful" else optimistic


@dataclass
class BaselineResult:
    coloring: PartialEdgeColoring
    transcript: RoundTranscript
    palette: int


def pr_baseline_edge_coloring(G: Graph, ids: NodeIdentifiers) -> BaselineResult:
    """(2Δ-1)-edge-coloring: (Δ+1)-vertex-coloring of the line graph.

    The line graph has maximum degree at most ``2Δ - 2``; each of its rounds
    costs two rounds on ``G``.  Rounds are ``O(Δ + log* n)``.
    """
    delta = G.max_degree
    palette = max(1, 2 * delta - 1)
    phi = PartialEdgeColoring(G, palette)
    transcript = RoundTranscript()
    if G.edge_count == 0:
        return BaselineResult(phi, transcript, palette)
    line = power_graph_on_edges(G, 0)

    def cost(t: RoundTranscript, label: str, rounds: int):
        t.charge(f"line-graph/{label}", 2, 2 * rounds)

    colors, _ = color_power_graph(line, ids, transcript, per_round_cost=cost)
    for e, c in zip(line.members.tolist(), colors.tolist()):
        phi.assign(e, c)
    return BaselineResult(phi, transcript, palette)


def verify_edge_coloring(
    G: Graph,
    coloring: PartialEdgeColoring | Mapping[int, int] | Sequence[int],
    palette: int,
    require_total: bool = False,
) -> list[tuple]:
    """Every violation, as tuples:

    ``("conflict", v, e1, e2, color)``, ``("palette", e, color)``,
    ``("uncolored", e)``, ``("unknown-edge", e)``.  Empty list means ok.
    """
    if isinstance(coloring, PartialEdgeColoring):
        assigned = {e: c for e, c in enumerate(coloring.colors) if c >= 0}
    elif isinstance(coloring, Mapping):
        assigned = {int(e): int(c) for e, c in coloring.items() if c is not None and int(c) >= 0}
    else:
        assigned = {e: int(c) for e, c in enumerate(coloring) if c is not None and int(c) >= 0}
    out: list[tuple] = []
    for e in sorted(assigned):
        if not 0 <= e < G.edge_count:
            out.append(("unknown-edge", e))
    for e, c in sorted(assigned.items()):
        if 0 <= e < G.edge_count and not 0 <= c < palette:
            out.append(("palette", e, c))
    for v in range(G.vertex_count):
        seen: dict[int, int] = {}
        for e in G.incident[v]:
            c = assigned.get(e)
            if c is None:
                continue
            if c in seen:
                out.append(("conflict", v, seen[c], e, c))
            else:
                seen[c] = e
    if require_total:
        out.extend(("uncolored", e) for e in range(G.edge_count) if e not in assigned)
    return out
