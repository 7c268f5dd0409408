"""Partial edge colorings, Vizing fans and alternating paths, in-ball augmentation.

Augmentations are computed as *plans* (``recolor``: edge -> new color) against
the current coloring and only then applied, so several plans computed from the
same snapshot can be merged when they touch disjoint vertex sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph_core import Graph, ImproperColoringError, bfs_distances

ORACLE_MAX_EDGES = 8


class OracleScaleError(ValueError):
    """The exhaustive augmenting-subgraph oracle refuses instances above its scale guard."""


class PartialEdgeColoring:
    """Proper partial edge coloring with colors ``0..palette_size-1``.

    ``colors[e]`` is ``-1`` for uncolored edges.  A per-vertex table maps each
    color to the incident edge carrying it, so missing-color and
    alternating-path queries are O(palette).
    """

    __slots__ = ("graph", "palette_size", "colors", "_at")

    def __init__(self, graph: Graph, palette_size: int):
        self.graph = graph
        self.palette_size = palette_size
        self.colors = [-1] * graph.edge_count
        self._at = [[-1] * palette_size for _ in range(graph.vertex_count)]

    @classmethod
    def from_mapping(cls, graph: Graph, palette_size: int, mapping: Mapping[int, int]) -> "PartialEdgeColoring":
        out = cls(graph, palette_size)
        for e, c in sorted(mapping.items()):
            out.assign(int(e), int(c))
        return out

    def copy(self) -> "PartialEdgeColoring":
        out = PartialEdgeColoring.__new__(PartialEdgeColoring)
        out.graph = self.graph
        out.palette_size = self.palette_size
        out.colors = list(self.colors)
        out._at = [list(row) for row in self._at]
        return out

    def color(self, e: int) -> int | None:
        c = self.colors[e]
        return None if c < 0 else c

    def is_colored(self, e: int) -> bool:
        return self.colors[e] >= 0

    def assign(self, e: int, c: int) -> None:
        if not 0 <= c < self.palette_size:
            raise ImproperColoringError(f"color {c} outside palette 0..{self.palette_size - 1}")
        u, v = self.graph.edges[e]
        for w in (u, v):
            holder = self._at[w][c]
            if holder >= 0 and holder != e:
                raise ImproperColoringError(f"edge {e} and edge {holder} would share color {c} at vertex {w}")
        self.uncolor(e)
        self.colors[e] = c
        self._at[u][c] = e
        self._at[v][c] = e

    def uncolor(self, e: int) -> None:
        c = self.colors[e]
        if c >= 0:
            u, v = self.graph.edges[e]
            self._at[u][c] = -1
            self._at[v][c] = -1
            self.colors[e] = -1

    def edge_at(self, v: int, c: int) -> int:
        """Edge at ``v`` colored ``c``, or -1."""
        return self._at[v][c]

    def missing(self, v: int) -> list[int]:
        return [c for c, e in enumerate(self._at[v]) if e < 0]

    def domain(self) -> list[int]:
        return [e for e, c in enumerate(self.colors) if c >= 0]

    def __len__(self) -> int:
        return sum(1 for c in self.colors if c >= 0)

    def as_dict(self) -> dict[int, int]:
        return {e: c for e, c in enumerate(self.colors) if c >= 0}

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in enumerate(self.colors) if c >= 0}

    def colors_used(self) -> int:
        return len({c for c in self.colors if c >= 0})


def missing_colors(G: Graph, phi: PartialEdgeColoring, v: int) -> set[int]:
    G.check_vertex(v)
    return set(phi.missing(v))


@dataclass(frozen=True)
class VizingFan:
    pivot: int
    vertices: tuple[int, ...]  # z_0 = other endpoint of the uncolored edge
    chosen: tuple[int, ...]  # chosen[i] is missing at z_i; edge x-z_{i+1} has color chosen[i]
    closed: bool


@dataclass
class AugmentationResult:
    recolor: dict[int, int]
    modified_edges: frozenset
    newly_colored: int
    confinement_ok: bool = True
    fan: VizingFan | None = None
    flipped_path: tuple[int, ...] = ()
    coloring: PartialEdgeColoring | None = field(default=None, repr=False)

    def touched_vertices(self, G: Graph) -> set[int]:
        return {w for f in self.modified_edges for w in G.edges[f]}

    def apply(self, phi: PartialEdgeColoring) -> PartialEdgeColoring:
        for f in self.recolor:
            phi.uncolor(f)
        for f, c in self.recolor.items():
            phi.assign(f, c)
        self.coloring = phi
        return phi


@dataclass(frozen=True)
class ConfinementFailure:
    """Signal from :func:`augment_in_ball`: the chain left the radius-(R-1) core."""

    edge: int
    radius: int
    reach: int  # largest distance from {x, y} of a modified-edge endpoint

    def __bool__(self) -> bool:
        return False


def _check_uncolored(phi: PartialEdgeColoring, e: int) -> None:
    if phi.colors[e] >= 0:
        raise ValueError(f"edge {e} is already colored")


def extend_greedy(G: Graph, phi: PartialEdgeColoring, e: int, commit: bool = True) -> AugmentationResult | None:
    """Color ``e`` with the smallest color missing at both endpoints; ``None`` if there is none."""
    _check_uncolored(phi, e)
    u, v = G.edges[e]
    at_u, at_v = phi._at[u], phi._at[v]
    for c in range(phi.palette_size):
        if at_u[c] < 0 and at_v[c] < 0:
            res = AugmentationResult({e: c}, frozenset((e,)), e)
            if commit:
                res.apply(phi)
            return res
    return None


def alternating_path(phi: PartialEdgeColoring, start: int, first: int, second: int) -> tuple[list[int], list[int]]:
    """Maximal path from ``start`` whose edges alternate ``first, second, first, ...``.

    Returns (edges, vertices); ``start`` must miss ``second`` so the walk cannot close.
    """
    edges, verts = [], [start]
    v, cur = start, first
    limit = phi.graph.edge_count + 1
    while len(edges) < limit:
        f = phi._at[v][cur]
        if f < 0:
            return edges, verts
        a, b = phi.graph.edges[f]
        v = b if a == v else a
        edges.append(f)
        verts.append(v)
        cur = second if cur == first else first
    raise RuntimeError("alternating walk did not terminate; coloring is inconsistent")


def vizing_chain_augment(
    H: Graph, psi: PartialEdgeColoring, e: int, pivot: int | None = None, commit: bool = True
) -> AugmentationResult:
    """Extend ``psi`` to the uncolored edge ``e`` by a fan rotation, flipping one
    alpha/beta path first when the fan closes on a repeated color.

    ``pivot`` (default: smaller endpoint) is the fan center ``x``.  Ties are
    always broken toward the smallest color.
    """
    _check_uncolored(psi, e)
    if H.max_degree >= psi.palette_size:
        raise ValueError("palette must exceed the maximum degree")
    a, b = H.edges[e]
    x = a if pivot is None else pivot
    if x not in (a, b):
        raise ValueError(f"pivot {pivot} is not an endpoint of edge {e}")
    y = b if x == a else a
    at = psi._at
    at_x = at[x]
    free_x = [c for c in range(psi.palette_size) if at_x[c] < 0]
    alpha = free_x[0]

    fan_v, fan_e, chosen = [y], [e], []
    position = {y: 0}
    while True:
        z = fan_v[-1]
        at_z = at[z]
        common = next((c for c in free_x if at_z[c] < 0), None)
        if common is not None:
            # free end: rotate the whole fan and close with the common color
            recolor = {fan_e[i]: chosen[i] for i in range(len(chosen))}
            recolor[fan_e[-1]] = common
            fan = VizingFan(x, tuple(fan_v), tuple(chosen) + (common,), False)
            res = AugmentationResult(recolor, frozenset(recolor), e, fan=fan)
            break
        beta = next(c for c in range(psi.palette_size) if at_z[c] < 0)
        f = at_x[beta]
        s, t = H.edges[f]
        w = t if s == x else s
        if w not in position:
            position[w] = len(fan_v)
            fan_v.append(w)
            fan_e.append(f)
            chosen.append(beta)
            continue
        # closed fan: beta is missing at z_k and at z_{j-1}, where x-z_j is colored beta
        j = position[w]
        k = len(fan_v) - 1
        fan = VizingFan(x, tuple(fan_v), tuple(chosen) + (beta,), True)
        path_e, path_v = alternating_path(psi, fan_v[j - 1], alpha, beta)
        if x not in path_v:
            stop = j - 1
        else:
            path_e, path_v = alternating_path(psi, fan_v[k], alpha, beta)
            if x in path_v:
                raise RuntimeError("both alternating paths reach the pivot; coloring is improper")
            stop = k
        recolor = {g: (beta if psi.colors[g] == alpha else alpha) for g in path_e}
        for i in range(stop):
            recolor[fan_e[i]] = chosen[i]
        recolor[fan_e[stop]] = alpha
        res = AugmentationResult(recolor, frozenset(recolor), e, fan=fan, flipped_path=tuple(path_e))
        break
    if commit:
        res.apply(psi)
    return res


def induced_ball(G: Graph, e: int, R: int):
    """``G[N^R[x] ∪ N^R[y]]`` for ``e = xy``.

    Returns (H, vertex map G->H, edge list H->G, dist_x, dist_y).  Vertex and
    edge order follow G, so smallest-index tie-breaks agree across the two graphs.
    """
    x, y = G.edges[e]
    dx = bfs_distances(G, (x,), R)
    dy = bfs_distances(G, (y,), R)
    ball = sorted(set(dx) | set(dy))
    local = {v: i for i, v in enumerate(ball)}
    eids = []
    for v in ball:
        for w, f in zip(G.adjacency[v], G.incident[v]):
            if v < w and w in local:
                eids.append(f)
    eids.sort()
    H = Graph.from_edges(len(ball), ((local[G.edges[f][0]], local[G.edges[f][1]]) for f in eids))
    return H, local, eids, dx, dy


def augment_in_ball(
    G: Graph, phi: PartialEdgeColoring, e: int, R: int, commit: bool = True
) -> AugmentationResult | ConfinementFailure:
    """Augment ``phi`` at ``e = xy`` using only the ball ``H = G[N^R[x] ∪ N^R[y]]``.

    The plan is accepted iff every endpoint of every modified edge lies within
    distance ``R - 1`` of ``x`` or ``y``; such vertices have all their G-edges
    inside ``H``, so merging the recoloring of ``H`` back into ``phi`` stays
    proper.  On failure nothing is mutated.
    """
    if R < 1:
        raise ValueError("R must be at least 1")
    _check_uncolored(phi, e)
    # both endpoints see all their edges at any R >= 1, so the greedy answer is the fan's answer
    res = extend_greedy(G, phi, e, commit=False)
    if res is None:
        H, local, eids, dx, dy = induced_ball(G, e, R)
        psi = PartialEdgeColoring(H, phi.palette_size)
        for i, f in enumerate(eids):
            if phi.colors[f] >= 0:
                psi.assign(i, phi.colors[f])
        e_local = eids.index(e)
        sub = vizing_chain_augment(H, psi, e_local, pivot=local[G.edges[e][0]], commit=False)
        recolor = {eids[f]: c for f, c in sub.recolor.items()}
        far = R + 1
        reach = max(
            min(dx.get(w, far), dy.get(w, far)) for f in recolor for w in G.edges[f]
        )
        if reach > R - 1:
            return ConfinementFailure(e, R, reach)
        res = AugmentationResult(
            recolor,
            frozenset(recolor),
            e,
            True,
            sub.fan,
            tuple(eids[f] for f in sub.flipped_path),
        )
    if commit:
        res.apply(phi)
    return res


def is_augmenting(G: Graph, phi: PartialEdgeColoring, H_edges: Iterable[int], e: int, limit: int = ORACLE_MAX_EDGES) -> bool:
    """Decide whether recoloring only the edges of ``H`` can add ``e`` to the domain.

    Exhaustive backtracking over all palette assignments to
    ``(E(H) ∩ dom(phi)) ∪ {e}``; edges outside ``H`` keep their colors and
    uncolored edges of ``H`` other than ``e`` stay uncolored.
    """
    H = set(H_edges)
    if e not in H:
        raise ValueError("H must contain e")
    _check_uncolored(phi, e)
    free = sorted([f for f in H if phi.colors[f] >= 0] + [e])
    if len(free) > limit:
        raise OracleScaleError(f"{len(free)} free edges exceed the oracle guard of {limit}")
    fixed: dict[int, set[int]] = {}
    for f in free:
        for v in G.edges[f]:
            if v not in fixed:
                fixed[v] = {
                    phi.colors[g] for g in G.incident[v] if g not in H and phi.colors[g] >= 0
                }
    used: dict[int, set[int]] = {v: set() for v in fixed}
    palette = range(phi.palette_size)

    def search(i: int) -> bool:
        if i == len(free):
            return True
        u, v = G.edges[free[i]]
        for c in palette:
            if c in fixed[u] or c in fixed[v] or c in used[u] or c in used[v]:
                continue
            used[u].add(c)
            used[v].add(c)
            if search(i + 1):
                return True
            used[u].discard(c)
            used[v].discard(c)
        return False

    return search(0)


def _connected(G: Graph, edge_set: Iterable[int]) -> bool:
    edge_set = list(edge_set)
    if not edge_set:
        return True
    adj: dict[int, list[int]] = {}
    for f in edge_set:
        u, v = G.edges[f]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def minimal_augmenting_subgraph(G: Graph, phi: PartialEdgeColoring, e: int, max_edges: int = ORACLE_MAX_EDGES):
    """Smallest connected e-augmenting edge set (by exhaustive search), or ``None``."""
    others = [f for f in range(G.edge_count) if f != e]
    for size in range(0, min(max_edges, G.edge_count)):
        for combo in itertools.combinations(others, size):
            cand = (e,) + combo
            if _connected(G, cand) and is_augmenting(G, phi, cand, e, limit=max_edges):
                return frozenset(cand)
    return None


def sequential_vizing_coloring(G: Graph) -> PartialEdgeColoring:
    """Total proper (Δ+1)-edge-coloring by augmenting edges one at a time in index order."""
    phi = PartialEdgeColoring(G, G.max_degree + 1)
    for e in range(G.edge_count):
        vizing_chain_augment(G, phi, e)
    return phi
