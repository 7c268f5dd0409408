"""Deterministic distributed vertex coloring and distance-2R edge classes.

Pipeline for a proper (Δ+1)-coloring from unique identifiers:

1. Linial color reduction.  A color ``c < q`` is read as a polynomial over
   ``F_p`` of degree ``<= d`` (its base-p digits).  Each vertex moves to
   ``x * p + P_c(x)`` for the smallest ``x`` at which its polynomial differs
   from every neighbor's.  Two distinct polynomials agree on at most ``d``
   points, so ``p > Δ d`` guarantees such an ``x``.  Repeated until the
   palette is at most ``p0 ** 2`` with ``p0`` the least prime ``>= 2Δ + 1``.
2. Additive-group reduction.  Color ``c`` becomes the pair
   ``(a, b) = divmod(c, p0)``.  Each round an unsettled vertex (``a != 0``)
   whose ``b`` is not shared by any neighbor settles to ``(0, b)``; otherwise
   it moves to ``(a, b + a mod p0)``.  A neighbor can block a vertex at most
   twice in ``p0`` consecutive rounds, so after ``p0`` rounds everybody has
   settled and the palette is ``p0``.
3. Color elimination.  Colors ``p0 - 1, ..., Δ + 1`` are removed one per
   round; each class is independent, so its vertices recolor simultaneously
   with the smallest color unused in their neighborhood.

The schedule depends only on ``(q, Δ)``: ``L(q, Δ) + 2 p0 - Δ - 1`` rounds,
where ``L`` is the number of Linial steps (``log* q + O(1)``).  With
``p0 <= 4Δ + 2`` this is below ``A Δ^2 + log* n + B`` for the module
constants ``GPS_ROUND_A`` and ``GPS_ROUND_B``.

Every step is implemented twice: as a per-vertex rule driven through the ball
view simulator (:func:`gps_vertex_coloring_reference`) and vectorized over a
CSR adjacency (:func:`gps_vertex_coloring`).  Tests check they agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph_core import Graph, ImproperColoringError, PowerGraph, log_star, power_graph_on_edges
from .local_runtime import (
    BallView,
    NodeIdentifiers,
    Phase,
    RoundTranscript,
    charge_power_graph_phase,
    run_phased_algorithm,
)

GPS_ROUND_A = 10
GPS_ROUND_B = 3


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def _int_root_ceil(q: int, k: int) -> int:
    """Smallest integer r with r**k >= q."""
    r = max(1, int(round(q ** (1.0 / k))))
    while r**k < q:
        r += 1
    while r > 1 and (r - 1) ** k >= q:
        r -= 1
    return r


def linial_parameters(q: int, delta: int) -> tuple[int, int]:
    """Degree ``d`` and prime ``p`` minimizing the next palette ``p**2``.

    Needs ``p > delta * d`` (a free evaluation point exists) and
    ``p ** (d + 1) >= q`` (every color gets its own polynomial).
    """
    if delta < 1:
        raise ValueError("linial_parameters needs delta >= 1")
    best = None
    d = 1
    while True:
        p = next_prime(max(delta * d + 1, _int_root_ceil(q, d + 1), 2))
        if best is None or p < best[1]:
            best = (d, p)
        if delta * d + 1 > best[1]:
            break
        d += 1
    return best


def settle_prime(delta: int, q: int = 0) -> int:
    """Prime used by the additive-group stage: least prime ``>= 2Δ+1`` with ``p**2 >= q``."""
    p = next_prime(2 * delta + 1)
    while p * p < q:
        p = next_prime(p + 1)
    return p


def gps_schedule(q: int, delta: int) -> list[tuple]:
    """Fixed round schedule for reducing a proper ``q``-coloring to ``delta + 1`` colors.

    Entries: ``("linial", d, p)`` (1 round each), ``("additive", p)`` (``p`` rounds),
    ``("eliminate", p, delta)`` (``p - delta - 1`` rounds).
    """
    if delta == 0 or q <= delta + 1:
        return []
    steps: list[tuple] = []
    target = settle_prime(delta) ** 2
    while q > target:
        d, p = linial_parameters(q, delta)
        if p * p >= q:
            break
        steps.append(("linial", d, p))
        q = p * p
    p = settle_prime(delta, q)
    steps.append(("additive", p))
    steps.append(("eliminate", p, delta))
    return steps


def schedule_rounds(step: tuple) -> int:
    kind = step[0]
    if kind == "linial":
        return 1
    if kind == "additive":
        return step[1]
    return step[1] - step[2] - 1


# --- per-vertex rules (reference semantics) ------------------------------------


def _poly_eval(c: int, d: int, p: int, x: int) -> int:
    coeffs = [(c // p**i) % p for i in range(d + 1)]
    val = 0
    for a in reversed(coeffs):
        val = (val * x + a) % p
    return val


def linial_rule(own: int, neighbor_colors: Sequence[int], d: int, p: int) -> int:
    for x in range(p):
        mine = _poly_eval(own, d, p, x)
        if all(_poly_eval(c, d, p, x) != mine for c in neighbor_colors):
            return x * p + mine
    raise ImproperColoringError("no free evaluation point; input coloring improper or palette too large")


def additive_rule(own: int, neighbor_colors: Sequence[int], p: int) -> int:
    a, b = divmod(own, p)
    if a == 0:
        return own
    if any(c % p == b for c in neighbor_colors):
        return a * p + (b + a) % p
    return b


def eliminate_rule(own: int, neighbor_colors: Sequence[int], target: int, delta: int) -> int:
    if own != target:
        return own
    used = set(neighbor_colors)
    return next(c for c in range(delta + 1) if c not in used)


# --- vectorized implementation over CSR adjacency ---------------------------------


class _Csr:
    def __init__(self, indptr: np.ndarray, indices: np.ndarray):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.n = len(self.indptr) - 1
        self.deg = np.diff(self.indptr)
        self.src = np.repeat(np.arange(self.n, dtype=np.int64), self.deg)

    @property
    def max_degree(self) -> int:
        return int(self.deg.max()) if self.n else 0

    @classmethod
    def of_graph(cls, G: Graph) -> "_Csr":
        A = G.csr()
        return cls(A.indptr, A.indices)

    @classmethod
    def of_power_graph(cls, pg: PowerGraph) -> "_Csr":
        return cls(pg.indptr, pg.indices)

    def neighbor_slots(self, vs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Positions into ``indices`` for the rows ``vs`` plus the owning row number."""
        lens = self.deg[vs]
        total = int(lens.sum())
        owner = np.repeat(np.arange(len(vs)), lens)
        starts = np.repeat(self.indptr[vs] - np.concatenate(([0], np.cumsum(lens)[:-1])), lens)
        return starts + np.arange(total), owner


def _linial_step_vec(adj: _Csr, colors: np.ndarray, d: int, p: int) -> np.ndarray:
    coef = np.stack([(colors // p**i) % p for i in range(d + 1)], axis=1)
    new = np.full(adj.n, -1, dtype=np.int64)
    pending = np.ones(adj.n, dtype=bool)
    src, dst = adj.src, adj.indices
    for x in range(p):
        vals = coef[:, d].copy()
        for i in range(d - 1, -1, -1):
            vals = (vals * x + coef[:, i]) % p
        bad = np.zeros(adj.n, dtype=bool)
        bad[src[vals[src] == vals[dst]]] = True
        ok = pending & ~bad
        new[ok] = x * p + vals[ok]
        pending &= bad
        if not pending.any():
            return new
        keep = pending[src]
        src, dst = src[keep], dst[keep]
    raise ImproperColoringError("no free evaluation point; input coloring improper or palette too large")


def _additive_vec(adj: _Csr, colors: np.ndarray, p: int) -> np.ndarray:
    a, b = colors // p, colors % p
    src, dst = adj.src, adj.indices
    for _ in range(p):
        active = a != 0
        if not active.any():
            break
        keep = active[src]
        src, dst = src[keep], dst[keep]
        blocked = np.zeros(adj.n, dtype=bool)
        blocked[src[b[src] == b[dst]]] = True
        b = np.where(active & blocked, (b + a) % p, b)
        a = np.where(active & ~blocked, 0, a)
    if (a != 0).any():
        raise RuntimeError("additive-group stage did not settle within p rounds")
    return b


def _eliminate_vec(adj: _Csr, colors: np.ndarray, p: int, delta: int) -> np.ndarray:
    colors = colors.copy()
    order = np.argsort(colors, kind="stable")
    bounds = np.searchsorted(colors[order], np.arange(p + 1))
    for c in range(p - 1, delta, -1):
        vs = order[bounds[c] : bounds[c + 1]]
        if len(vs) == 0:
            continue
        slots, owner = adj.neighbor_slots(vs)
        nc = colors[adj.indices[slots]]
        low = nc <= delta
        used = np.zeros((len(vs), delta + 2), dtype=bool)
        used[owner[low], nc[low]] = True
        colors[vs] = np.argmin(used, axis=1)
    return colors


def _run_schedule(adj: _Csr, colors: np.ndarray, q: int) -> tuple[np.ndarray, int, list[tuple[str, int]]]:
    """Returns (colors, palette, [(phase label, rounds), ...])."""
    delta = adj.max_degree
    if adj.n == 0:
        return colors, 0, []
    if delta == 0:
        return np.zeros(adj.n, dtype=np.int64), 1, []
    charges = []
    palette = q
    for i, step in enumerate(gps_schedule(q, delta)):
        kind = step[0]
        if kind == "linial":
            colors = _linial_step_vec(adj, colors, step[1], step[2])
            palette = step[2] ** 2
            charges.append((f"linial-{i}", 1))
        elif kind == "additive":
            colors = _additive_vec(adj, colors, step[1])
            palette = step[1]
            charges.append(("additive-group", step[1]))
        else:
            colors = _eliminate_vec(adj, colors, step[1], step[2])
            palette = delta + 1
            charges.append(("color-elimination", schedule_rounds(step)))
    return colors, palette, charges


# --- public types and operations ------------------------------------------------


@dataclass(frozen=True, eq=False)
class VertexColoring:
    colors: np.ndarray
    palette_size: int

    def __len__(self) -> int:
        return len(self.colors)

    def colors_used(self) -> int:
        return len(np.unique(self.colors)) if len(self.colors) else 0

    def to_json(self) -> dict[str, int]:
        return {str(v): int(c) for v, c in enumerate(self.colors)}


def verify_vertex_coloring(G: Graph, coloring: VertexColoring) -> list[tuple]:
    """Violations: ``("conflict", u, v, color)`` and ``("palette", v, color)``."""
    out: list[tuple] = []
    cols = np.asarray(coloring.colors)
    for v, c in enumerate(cols.tolist()):
        if not (0 <= c < coloring.palette_size):
            out.append(("palette", v, c))
    for u, v in G.edges:
        if cols[u] == cols[v]:
            out.append(("conflict", u, v, int(cols[u])))
    return out


def _check_proper(adj: _Csr, colors: np.ndarray, palette: int) -> None:
    if len(colors) and (colors.min() < 0 or colors.max() >= palette):
        raise ImproperColoringError("color outside the palette")
    if (colors[adj.src] == colors[adj.indices]).any():
        raise ImproperColoringError("adjacent vertices share a color")


def linial_reduce(G: Graph, current: VertexColoring) -> VertexColoring:
    """One radius-1 Linial reduction step.

    Returns ``current`` unchanged when no prime/degree choice shrinks the palette
    (the reduction has reached its ``O(Δ^2)`` fixed point).
    """
    adj = _Csr.of_graph(G)
    colors = np.asarray(current.colors, dtype=np.int64)
    _check_proper(adj, colors, current.palette_size)
    delta = adj.max_degree
    if delta == 0:
        return VertexColoring(np.zeros(adj.n, dtype=np.int64), 1)
    d, p = linial_parameters(current.palette_size, delta)
    if p * p >= current.palette_size:
        return current
    return VertexColoring(_linial_step_vec(adj, colors, d, p), p * p)


def linial_fixed_point(delta: int) -> int:
    """Palette bound at which Linial reduction hands over to the additive stage."""
    return settle_prime(delta) ** 2 if delta else 1


def gps_round_bound(delta: int, n: int) -> int:
    """Documented round bound ``A Δ^2 + log* n + B``."""
    return GPS_ROUND_A * delta * delta + log_star(max(n, 1)) + GPS_ROUND_B


def gps_vertex_coloring(G: Graph, ids: NodeIdentifiers) -> tuple[VertexColoring, RoundTranscript]:
    """Proper (Δ+1)-vertex-coloring from identifiers; every phase has radius 1."""
    adj = _Csr.of_graph(G)
    colors0 = np.asarray(ids.ids, dtype=np.int64) - 1
    colors, palette, charges = _run_schedule(adj, colors0, G.vertex_count)
    transcript = RoundTranscript()
    for label, rounds in charges:
        transcript.charge(label, 1, rounds)
    return VertexColoring(colors, palette if G.vertex_count else 0), transcript


def gps_vertex_coloring_reference(G: Graph, ids: NodeIdentifiers, order_seed: int | None = None):
    """Same schedule as :func:`gps_vertex_coloring`, one ball-view phase per round.

    Only practical on small graphs; used to cross-check the vectorized path.
    """
    delta = G.max_degree
    n = G.vertex_count
    if n == 0:
        return VertexColoring(np.zeros(0, dtype=np.int64), 0), RoundTranscript()
    if delta == 0:
        return VertexColoring(np.zeros(n, dtype=np.int64), 1), RoundTranscript()

    def local(rule, *args):
        def step(view: BallView):
            v = view.center
            return rule(view.latest(v), [view.latest(u) for u in view.neighbors(v)], *args)

        return step

    phases = []
    palette = n
    for i, step in enumerate(gps_schedule(n, delta)):
        if step[0] == "linial":
            phases.append(Phase(f"linial-{i}", 1, local(linial_rule, step[1], step[2])))
            palette = step[2] ** 2
        elif step[0] == "additive":
            p = step[1]
            phases += [Phase(f"additive-{t}", 1, local(additive_rule, p)) for t in range(p)]
            palette = p
        else:
            p = step[1]
            phases += [Phase(f"eliminate-{c}", 1, local(eliminate_rule, c, delta)) for c in range(p - 1, delta, -1)]
            palette = delta + 1
    inputs = [i - 1 for i in ids.ids]
    out, transcript = run_phased_algorithm(G, ids, phases, inputs=inputs, order_seed=order_seed)
    return VertexColoring(np.asarray(out, dtype=np.int64), palette), transcript


@dataclass(frozen=True, eq=False)
class EdgeClassColoring:
    """Class index per base edge in ``edges``; same-class edges are more than
    ``distance_bound`` apart (minimum endpoint distance)."""

    edges: np.ndarray
    classes: np.ndarray
    class_count: int
    distance_bound: int

    def class_of(self) -> dict[int, int]:
        return dict(zip(self.edges.tolist(), self.classes.tolist()))

    def groups(self) -> list[np.ndarray]:
        """Edge indices of every class, ascending class index, edges ascending."""
        order = np.lexsort((self.edges, self.classes))
        bounds = np.searchsorted(self.classes[order], np.arange(self.class_count + 1))
        return [self.edges[order[bounds[c] : bounds[c + 1]]] for c in range(self.class_count)]

    def to_json(self) -> dict[str, int]:
        return {str(e): int(c) for e, c in zip(self.edges.tolist(), self.classes.tolist())}


def edge_identifiers(G: Graph, ids: NodeIdentifiers, edges: np.ndarray) -> np.ndarray:
    """Rank (1-based) of each edge by the pair (max endpoint id, min endpoint id)."""
    if len(edges) == 0:
        return np.zeros(0, dtype=np.int64)
    uv = np.asarray(G.edges, dtype=np.int64)[edges]
    idarr = np.asarray(ids.ids, dtype=np.int64)
    a, b = idarr[uv[:, 0]], idarr[uv[:, 1]]
    hi, lo = np.maximum(a, b), np.minimum(a, b)
    order = np.lexsort((lo, hi))
    rank = np.empty(len(edges), dtype=np.int64)
    rank[order] = np.arange(1, len(edges) + 1)
    return rank


def color_power_graph(pg: PowerGraph, ids: NodeIdentifiers, transcript: RoundTranscript, per_round_cost=None):
    """GPS on a power graph whose nodes are base edges; returns (classes, palette).

    Each simulated round is charged through ``per_round_cost(transcript, label, rounds)``
    (defaults to :func:`charge_power_graph_phase` at the graph's distance bound).
    """
    G = pg.base
    ranks = edge_identifiers(G, ids, pg.members)
    transcript.charge("edge-identifiers", 1, 1)
    adj = _Csr.of_power_graph(pg)
    colors, palette, charges = _run_schedule(adj, ranks - 1, pg.node_count)
    for label, rounds in charges:
        if per_round_cost is None:
            charge_power_graph_phase(transcript, pg.distance_bound, rounds, label=label)
        else:
            per_round_cost(transcript, label, rounds)
    return colors, palette


def distance_edge_classes(
    G: Graph,
    R: int,
    ids: NodeIdentifiers,
    members: Sequence[int] | None = None,
    power_graph: PowerGraph | None = None,
) -> tuple[EdgeClassColoring, RoundTranscript]:
    """Partition the edges (or ``members``) into classes at pairwise distance > 2R."""
    if R < 1:
        raise ValueError("R must be at least 1")
    pg = power_graph if power_graph is not None else power_graph_on_edges(G, 2 * R, members)
    transcript = RoundTranscript()
    if pg.node_count == 0:
        return EdgeClassColoring(pg.members, np.zeros(0, dtype=np.int64), 0, 2 * R), transcript
    classes, palette = color_power_graph(pg, ids, transcript)
    return EdgeClassColoring(pg.members, classes, palette, 2 * R), transcript
