"""Round-synchronous simulator of the deterministic LOCAL model.

A radius-T phase hands every vertex its :class:`BallView` (the induced subgraph
on its closed T-ball plus identifiers, inputs and earlier-phase outputs
restricted to that ball) and charges T rounds.  A step never sees anything
else, so locality holds by construction.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Callable, Mapping, Sequence

from .graph_core import Graph, GraphInputError, bfs_distances

ACCOUNTING_MODES = ("optimistic", "faithful")
ID_SCHEMES = ("sequential", "permuted", "adversarial")
ADVERSARIAL_PATTERNS = ("sorted", "reversed", "zigzag")


class LocalityViolation(RuntimeError):
    """A step tried to read data outside its ball view."""


@dataclass(frozen=True)
class NodeIdentifiers:
    """Bijection ``vertex -> {1..n}``; ``ids[v]`` is the identifier of ``v``."""

    ids: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.ids) != list(range(1, len(self.ids) + 1)):
            raise ValueError("identifiers must be a bijection onto {1..n}")

    def __getitem__(self, v: int) -> int:
        return self.ids[v]

    def __len__(self) -> int:
        return len(self.ids)


def assign_ids(G: Graph, scheme: str = "sequential", seed: int = 0, pattern: str = "zigzag") -> NodeIdentifiers:
    """Assign unique identifiers.

    ``sequential`` gives vertex i the id i+1; ``permuted`` is a seeded random
    bijection; ``adversarial`` lays ids out along the vertex order according to
    ``pattern`` (``sorted``, ``reversed`` or ``zigzag`` = 1, n, 2, n-1, ...).
    """
    n = G.vertex_count
    if scheme == "sequential":
        return NodeIdentifiers(tuple(range(1, n + 1)))
    if scheme == "permuted":
        ids = list(range(1, n + 1))
        random.Random(seed).shuffle(ids)
        return NodeIdentifiers(tuple(ids))
    if scheme == "adversarial":
        if pattern == "sorted":
            ids = list(range(1, n + 1))
        elif pattern == "reversed":
            ids = list(range(n, 0, -1))
        elif pattern == "zigzag":
            lo, hi, ids = 1, n, []
            for i in range(n):
                if i % 2 == 0:
                    ids.append(lo)
                    lo += 1
                else:
                    ids.append(hi)
                    hi -= 1
        else:
            raise ValueError(f"unknown adversarial pattern {pattern!r}")
        return NodeIdentifiers(tuple(ids))
    raise ValueError(f"unknown id scheme {scheme!r}; choose from {', '.join(ID_SCHEMES)}")


@dataclass(frozen=True)
class BallView:
    center: int
    radius: int
    vertices: frozenset
    adjacency: Mapping[int, tuple[int, ...]]
    distance: Mapping[int, int]
    ids: Mapping[int, int]
    inputs: Mapping[int, Any]
    history: Mapping[str, Mapping[int, Any]]

    def neighbors(self, v: int) -> tuple[int, ...]:
        if v not in self.vertices:
            raise LocalityViolation(f"vertex {v} lies outside the radius-{self.radius} ball of {self.center}")
        return self.adjacency[v]

    def input(self, v: int) -> Any:
        if v not in self.vertices:
            raise LocalityViolation(f"vertex {v} lies outside the radius-{self.radius} ball of {self.center}")
        return self.inputs[v]

    def output(self, phase: str, v: int) -> Any:
        if v not in self.vertices:
            raise LocalityViolation(f"vertex {v} lies outside the radius-{self.radius} ball of {self.center}")
        return self.history[phase][v]

    def latest(self, v: int) -> Any:
        """Output of the most recent phase at ``v`` (its input before any phase ran)."""
        if not self.history:
            return self.input(v)
        last = next(reversed(self.history))
        return self.output(last, v)


class _Restricted(Mapping):
    """Read-only view of a per-vertex mapping, restricted to a vertex set."""

    def __init__(self, data, keys: frozenset, center: int, radius: int):
        self._data, self._keys, self._center, self._radius = data, keys, center, radius

    def __getitem__(self, v):
        if v not in self._keys:
            raise LocalityViolation(f"vertex {v} lies outside the radius-{self._radius} ball of {self._center}")
        return self._data[v]

    def __iter__(self):
        return iter(sorted(self._keys))

    def __len__(self):
        return len(self._keys)


def ball_view(
    G: Graph,
    ids: NodeIdentifiers,
    inputs: Sequence[Any] | None,
    v: int,
    T: int,
    history: Mapping[str, Sequence[Any]] | None = None,
) -> BallView:
    G.check_vertex(v)
    if T < 0:
        raise GraphInputError(f"radius must be nonnegative, got {T}")
    dist = bfs_distances(G, (v,), T)
    keys = frozenset(dist)
    adj = {u: tuple(w for w in G.adjacency[u] if w in keys) for u in keys}
    inputs = inputs if inputs is not None else [None] * G.vertex_count
    hist = {
        label: _Restricted(values, keys, v, T) for label, values in (history or {}).items()
    }
    return BallView(
        center=v,
        radius=T,
        vertices=keys,
        adjacency=MappingProxyType(adj),
        distance=MappingProxyType(dist),
        ids=_Restricted(ids.ids, keys, v, T),
        inputs=_Restricted(inputs, keys, v, T),
        history=MappingProxyType(hist),
    )


@dataclass(frozen=True)
class PhaseRecord:
    phase: str
    radius: int
    rounds: int


@dataclass
class RoundTranscript:
    accounting_mode: str = "optimistic"
    phases: list[PhaseRecord] = field(default_factory=list)

    def __post_init__(self):
        if self.accounting_mode not in ACCOUNTING_MODES:
            raise ValueError(f"accounting mode must be one of {ACCOUNTING_MODES}")

    @property
    def total_rounds(self) -> int:
        return sum(p.rounds for p in self.phases)

    def charge(self, phase: str, radius: int, rounds: int) -> "RoundTranscript":
        if rounds < 0 or radius < 0:
            raise ValueError("rounds and radius must be nonnegative")
        self.phases.append(PhaseRecord(phase, int(radius), int(rounds)))
        return self

    def extend(self, other: "RoundTranscript", prefix: str = "") -> "RoundTranscript":
        for p in other.phases:
            self.phases.append(PhaseRecord(prefix + p.phase, p.radius, p.rounds))
        return self

    def to_json(self) -> list[dict]:
        return [{"phase": p.phase, "radius": p.radius, "rounds": p.rounds} for p in self.phases]

    def dumps(self) -> str:
        return json.dumps({"accounting_mode": self.accounting_mode, "phases": self.to_json(), "total_rounds": self.total_rounds})


def power_graph_round_cost(k: int) -> int:
    """G-rounds needed to simulate one round on the distance-k power graph."""
    return k + 1


def charge_power_graph_phase(
    transcript: RoundTranscript, k: int, rounds_on_power_graph: int, label: str = "power-graph"
) -> RoundTranscript:
    """Charge ``rounds_on_power_graph`` simulated rounds at ``k + 1`` base rounds each."""
    if k < 1:
        raise ValueError("power graph distance bound must be at least 1")
    cost = power_graph_round_cost(k)
    return transcript.charge(label, cost, cost * rounds_on_power_graph)


@dataclass(frozen=True)
class Phase:
    """One synchronous phase: ``step(view) -> output`` evaluated at every vertex."""

    label: str
    radius: int
    step: Callable[[BallView], Any]


def run_phased_algorithm(
    G: Graph,
    ids: NodeIdentifiers,
    phases: Sequence[Phase],
    inputs: Sequence[Any] | None = None,
    transcript: RoundTranscript | None = None,
    order_seed: int | None = None,
) -> tuple[list[Any], RoundTranscript]:
    """Execute ``phases`` in order; returns the last phase's per-vertex outputs.

    Outputs of a phase become visible only after the whole phase has been
    evaluated.  ``order_seed`` shuffles the per-vertex evaluation order, which
    must not (and cannot) change the result.
    """
    transcript = transcript if transcript is not None else RoundTranscript()
    history: dict[str, list[Any]] = {}
    outputs: list[Any] = list(inputs) if inputs is not None else [None] * G.vertex_count
    order = list(range(G.vertex_count))
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    for ph in phases:
        if ph.label in history:
            raise ValueError(f"duplicate phase label {ph.label!r}")
        new: list[Any] = [None] * G.vertex_count
        for v in order:
            new[v] = ph.step(ball_view(G, ids, inputs, v, ph.radius, history))
        history[ph.label] = new
        outputs = new
        transcript.charge(ph.label, ph.radius, ph.radius)
    return outputs, transcript
