"""Immutable bounded-degree graphs, balls, growth profiles and edge power graphs."""

from __future__ import annotations

import math
import weakref
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse


class GraphInputError(ValueError):
    """Raised for malformed graph input (bad vertex, self-loop, duplicate edge...)."""


class ImproperColoringError(ValueError):
    """A coloring violates properness or its palette where a proper one is required."""


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite simple graph on vertices ``0..vertex_count-1``.

    ``adjacency[v]`` and ``incident[v]`` are aligned: the i-th neighbor of ``v``
    is reached through edge ``incident[v][i]``.  Edges are stored as ``(u, v)``
    with ``u < v``.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    incident: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    edge_lookup: dict = field(repr=False)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if vertex_count < 0:
            raise GraphInputError(f"negative vertex count {vertex_count}")
        adj: list[list[int]] = [[] for _ in range(vertex_count)]
        inc: list[list[int]] = [[] for _ in range(vertex_count)]
        canon: list[tuple[int, int]] = []
        lookup: dict[tuple[int, int], int] = {}
        for raw in edges:
            u, v = int(raw[0]), int(raw[1])
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphInputError(f"edge {raw!r} references a vertex outside 0..{vertex_count - 1}")
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u}")
            key = _pair(u, v)
            if key in lookup:
                raise GraphInputError(f"duplicate edge {key}")
            lookup[key] = len(canon)
            adj[u].append(v)
            adj[v].append(u)
            inc[u].append(len(canon))
            inc[v].append(len(canon))
            canon.append(key)
        return cls(
            vertex_count,
            tuple(map(tuple, adj)),
            tuple(map(tuple, inc)),
            tuple(canon),
            lookup,
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_index(self, u: int, v: int) -> int:
        return self.edge_lookup[_pair(u, v)]

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.vertex_count):
            raise GraphInputError(f"invalid vertex {v!r} (graph has {self.vertex_count} vertices)")

    def csr(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix (cached)."""
        cached = _CSR_CACHE.get(self)
        if cached is None:
            m = self.edge_count
            if m:
                uv = np.asarray(self.edges, dtype=np.int64)
                rows = np.concatenate([uv[:, 0], uv[:, 1]])
                cols = np.concatenate([uv[:, 1], uv[:, 0]])
            else:
                rows = cols = np.zeros(0, dtype=np.int64)
            data = np.ones(len(rows), dtype=np.int32)
            n = self.vertex_count
            cached = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
            cached.sort_indices()
            _CSR_CACHE[self] = cached
        return cached

    def incidence(self) -> sparse.csr_matrix:
        """Edge-by-vertex incidence matrix (m x n)."""
        m, n = self.edge_count, self.vertex_count
        if m:
            uv = np.asarray(self.edges, dtype=np.int64)
            rows = np.repeat(np.arange(m), 2)
            cols = uv.reshape(-1)
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
        return sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(m, n))


_CSR_CACHE: "weakref.WeakKeyDictionary[Graph, sparse.csr_matrix]" = weakref.WeakKeyDictionary()


def bfs_distances(G: Graph, sources: Iterable[int], radius: int | None = None) -> dict[int, int]:
    """Multi-source BFS; returns ``{vertex: distance}`` truncated at ``radius``."""
    dist: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    adjacency = G.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if radius is not None and du >= radius:
            continue
        for w in adjacency[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def closed_ball(G: Graph, v: int, R: int) -> set[int]:
    """All vertices reachable from ``v`` by a path of at most ``R`` edges."""
    G.check_vertex(v)
    if R < 0:
        raise GraphInputError(f"radius must be nonnegative, got {R}")
    return set(bfs_distances(G, (v,), R))


@dataclass(frozen=True)
class GrowthProfile:
    max_ball_size: tuple[int, ...]  # index = radius
    vertex_count: int
    max_degree: int

    @property
    def max_radius(self) -> int:
        return len(self.max_ball_size) - 1

    def __call__(self, R: int) -> int:
        return self.max_ball_size[R]


def _reach_step(M: sparse.csr_matrix, step: sparse.csr_matrix) -> sparse.csr_matrix:
    out = (M @ step).tocsr()
    out.data[:] = 1
    return out


def growth_profile(G: Graph, R_max: int) -> GrowthProfile:
    """Max closed-ball size for every radius ``0..R_max``.

    Balls are grown for all vertices at once as the sparsity pattern of
    ``(I + A)^R``; stops early once every ball covers its component.
    """
    if R_max < 0:
        raise GraphInputError(f"R_max must be nonnegative, got {R_max}")
    n = G.vertex_count
    if n == 0:
        return GrowthProfile(tuple(0 for _ in range(R_max + 1)), 0, 0)
    step = (sparse.identity(n, dtype=np.int32, format="csr") + G.csr()).tocsr()
    reach = sparse.identity(n, dtype=np.int32, format="csr")
    sizes = [1]
    while len(sizes) <= R_max:
        nxt = _reach_step(reach, step)
        sizes.append(int(np.diff(nxt.indptr).max()))
        if nxt.nnz == reach.nnz:
            sizes.extend([sizes[-1]] * (R_max + 1 - len(sizes)))
            break
        reach = nxt
    return GrowthProfile(tuple(sizes[: R_max + 1]), n, G.max_degree)


@dataclass(frozen=True, eq=False)
class PowerGraph:
    """Conflict graph on the edges of ``base``: two edges are adjacent when some
    endpoint of one is within distance ``distance_bound`` of some endpoint of the other.

    When built for a subset of base edges, ``members[i]`` is the base edge of node ``i``.
    """

    base: Graph
    distance_bound: int
    indptr: np.ndarray
    indices: np.ndarray
    members: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.members)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.node_count else 0

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.neighbors(i).tolist()) for i in range(self.node_count)]

    def as_graph(self) -> Graph:
        """The power graph as a plain :class:`Graph` on nodes ``0..node_count-1``."""
        pairs = []
        for i in range(self.node_count):
            for j in self.neighbors(i).tolist():
                if i < j:
                    pairs.append((i, j))
        return Graph.from_edges(self.node_count, pairs)


_POWER_CACHE: "weakref.WeakKeyDictionary[Graph, dict[int, PowerGraph]]" = weakref.WeakKeyDictionary()

_CHUNK_ROWS = 16384


def power_graph_on_edges(G: Graph, k: int, members: Sequence[int] | None = None, cache: bool = True) -> PowerGraph:
    """Build the distance-``k`` conflict graph on ``E(G)`` (or on the edge subset ``members``).

    Computed as the pattern of ``B (I + A)^k B^T`` minus the diagonal, where ``B`` is
    the edge-vertex incidence matrix; rows are processed in chunks to bound memory.
    """
    if k < 0:
        raise GraphInputError(f"distance bound must be nonnegative, got {k}")
    full = members is None
    if full and cache:
        hit = _POWER_CACHE.get(G, {}).get(k)
        if hit is not None:
            return hit
    sel = np.arange(G.edge_count, dtype=np.int64) if full else np.asarray(sorted(set(members)), dtype=np.int64)
    N = len(sel)
    if N == 0:
        pg = PowerGraph(G, k, np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int32), sel)
    else:
        B = G.incidence()[sel]
        BT = B.T.tocsr()
        step = (sparse.identity(G.vertex_count, dtype=np.int32, format="csr") + G.csr()).tocsr()
        ptr_parts = [np.zeros(1, dtype=np.int64)]
        idx_parts = []
        offset = 0
        for lo in range(0, N, _CHUNK_ROWS):
            hi = min(N, lo + _CHUNK_ROWS)
            Q = B[lo:hi]
            for _ in range(k):
                Q = _reach_step(Q, step)
            P = (Q @ BT).tocsr()
            P.sort_indices()
            rows = np.repeat(np.arange(lo, hi), np.diff(P.indptr))
            keep = P.indices != rows
            counts = np.bincount(rows[keep] - lo, minlength=hi - lo)
            idx_parts.append(P.indices[keep].astype(np.int32))
            ptr_parts.append(offset + np.cumsum(counts))
            offset += int(counts.sum())
        pg = PowerGraph(G, k, np.concatenate(ptr_parts), np.concatenate(idx_parts), sel)
    if full and cache:
        _POWER_CACHE.setdefault(G, {})[k] = pg
    return pg


# --- generators -------------------------------------------------------------

FAMILIES = ("path", "cycle", "grid", "torus", "matching", "star", "binary_tree")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphInputError(msg)


def path_graph(n: int) -> Graph:
    _require(n >= 1, "path needs at least 1 vertex")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    _require(n >= 3, "cycle length must be at least 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def grid_graph(rows: int, cols: int) -> Graph:
    _require(rows >= 1 and cols >= 1, "grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def torus_graph(rows: int, cols: int) -> Graph:
    # sides below 3 would create parallel edges
    _require(rows >= 3 and cols >= 3, "torus dimensions must be at least 3")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            edges.append((v, r * cols + (c + 1) % cols))
            edges.append((v, ((r + 1) % rows) * cols + c))
    return Graph.from_edges(rows * cols, edges)


def matching_graph(k: int) -> Graph:
    _require(k >= 1, "matching needs at least one edge")
    return Graph.from_edges(2 * k, ((2 * i, 2 * i + 1) for i in range(k)))


def star_graph(leaves: int) -> Graph:
    _require(leaves >= 1, "star needs at least one leaf")
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def binary_tree_graph(depth: int) -> Graph:
    _require(depth >= 0, "depth must be nonnegative")
    n = 2 ** (depth + 1) - 1
    return Graph.from_edges(n, ((i, (i - 1) // 2) for i in range(1, n)))


def generate(family: str, *dims: int) -> Graph:
    """Build a named graph family.

    ``path(n)``, ``cycle(n)``, ``grid(rows, cols)``, ``torus(rows, cols)``,
    ``matching(k)``, ``star(leaves)``, ``binary_tree(depth)``.
    """
    builders = {
        "path": (path_graph, 1),
        "cycle": (cycle_graph, 1),
        "grid": (grid_graph, 2),
        "torus": (torus_graph, 2),
        "matching": (matching_graph, 1),
        "star": (star_graph, 1),
        "binary_tree": (binary_tree_graph, 1),
    }
    if family not in builders:
        raise GraphInputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    fn, arity = builders[family]
    if family in ("grid", "torus") and len(dims) == 1:
        dims = (dims[0], dims[0])
    if len(dims) != arity:
        raise GraphInputError(f"{family} takes {arity} dimension(s), got {len(dims)}")
    return fn(*(int(d) for d in dims))


def log_star(n: float) -> int:
    """Iterated base-2 logarithm: applications of log2 until the value is <= 1."""
    if n < 1:
        raise GraphInputError(f"log_star is defined for n >= 1, got {n}")
    count = 0
    x = n
    while x > 1:
        x = math.log2(x)
        count += 1
    return count
