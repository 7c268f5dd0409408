"""DIMACS-like edge-list format: ``p edge <n> <m>`` header, ``e <u> <v>`` lines, 1-based labels.

Lines starting with ``c`` and blank lines are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import TextIO

from .graph_core import Graph, GraphInputError


class GraphParseError(GraphInputError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


def parse_graph_text(text: str, source: str = "<input>") -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphParseError("second header line", lineno, source)
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphParseError(f"malformed header {raw.strip()!r}; expected 'p edge <n> <m>'", lineno, source)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphParseError(f"non-integer counts in header {raw.strip()!r}", lineno, source) from None
            if n < 0 or m < 0:
                raise GraphParseError("negative counts in header", lineno, source)
        elif tag == "e":
            if n is None:
                raise GraphParseError("edge line before the 'p edge' header", lineno, source)
            if len(parts) != 3:
                raise GraphParseError(f"malformed edge line {raw.strip()!r}", lineno, source)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(f"non-integer vertex label in {raw.strip()!r}", lineno, source) from None
            for label in (u, v):
                if not 1 <= label <= n:
                    raise GraphParseError(f"vertex label {label} outside 1..{n}", lineno, source)
            if u == v:
                raise GraphParseError(f"self-loop at vertex {u}", lineno, source)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphParseError(f"duplicate edge {u} {v} (first on line {seen[key]})", lineno, source)
            seen[key] = lineno
            edges.append((u - 1, v - 1))
        else:
            raise GraphParseError(f"unknown line type {tag!r}", lineno, source)
    if n is None:
        raise GraphParseError("missing 'p edge <n> <m>' header", None, source)
    if len(edges) != m:
        raise GraphParseError(f"header declares {m} edges but {len(edges)} were given", None, source)
    return Graph.from_edges(n, edges)


def parse_graph_file(path: str | Path) -> Graph:
    path = Path(path)
    return parse_graph_text(path.read_text(), source=str(path))


def format_graph(G: Graph) -> str:
    lines = [f"p edge {G.vertex_count} {G.edge_count}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in G.edges]
    return "\n".join(lines) + "\n"


def write_graph(G: Graph, out: str | Path | TextIO) -> None:
    text = format_graph(G)
    if hasattr(out, "write"):
        out.write(text)
    else:
        Path(out).write_text(text)
