"""Immutable undirected graphs with indexed edges and burn sets.

Edge indices follow construction (or document) order and never change, so
bitmasks over edges are stable across the whole package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class GraphError(ValueError):
    """Malformed graph input: bad document, self-loop, duplicate edge, bad index."""


@dataclass(frozen=True)
class BurnSet:
    """Set of erased edge indices, stored as an integer bitmask."""

    mask: int = 0

    def __contains__(self, edge: int) -> bool:
        return bool(self.mask >> edge & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[int]:
        m, e = self.mask, 0
        while m:
            if m & 1:
                yield e
            m >>= 1
            e += 1

    def add(self, edge: int) -> "BurnSet":
        return BurnSet(self.mask | (1 << edge))

    def issubset(self, other: "BurnSet") -> bool:
        return self.mask & ~other.mask == 0

    @classmethod
    def of(cls, edges: Iterable[int]) -> "BurnSet":
        m = 0
        for e in edges:
            m |= 1 << e
        return cls(m)


EMPTY = BurnSet()


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on vertices ``0..vertex_count-1``.

    ``adjacency[v]`` lists ``(neighbor, edge_index)`` pairs in ascending
    neighbor order. ``labels`` is an optional role map and plays no part in
    identity or game rules.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    labels: Mapping[int, str] = field(default_factory=dict)
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {n}")
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        index: dict[tuple[int, int], int] = {}
        canon = []
        for e, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {e} ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"edge {e} ({u}, {v}) is a self-loop")
            key = (min(u, v), max(u, v))
            if key in index:
                raise GraphError(f"edge {e} ({u}, {v}) duplicates edge {index[key]}")
            index[key] = e
            canon.append((u, v))
            adj[u].append((v, e))
            adj[v].append((u, e))
        for v, lab in self.labels.items():
            if not 0 <= int(v) < n:
                raise GraphError(f"label for vertex {v} outside 0..{n - 1}")
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "labels", {int(v): str(l) for v, l in self.labels.items()})

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def _check(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise GraphError(f"vertex {v} outside 0..{self.vertex_count - 1}")

    def neighbors(self, v: int) -> list[int]:
        self._check(v)
        return [u for u, _ in self.adjacency[v]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.vertex_count, self.edges, dict(self.labels)) == (
            other.vertex_count,
            other.edges,
            dict(other.labels),
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


def neighbors_live(g: Graph, b: BurnSet, v: int) -> list[int]:
    """Neighbors of ``v`` through edges not in ``b``, ascending."""
    g._check(v)
    mask = b.mask
    return [u for u, e in g.adjacency[v] if not mask >> e & 1]


def edge_index(g: Graph, u: int, v: int) -> int | None:
    g._check(u)
    g._check(v)
    return g._index.get((min(u, v), max(u, v)))


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for h in graphs:
        edges.extend((u + off, v + off) for u, v in h.edges)
        off += h.vertex_count
    return Graph(off, tuple(edges))


# -- serialization ----------------------------------------------------------


def graph_to_doc(g: Graph) -> dict:
    doc: dict = {"n": g.vertex_count, "edges": [[u, v] for u, v in g.edges]}
    if g.labels:
        doc["labels"] = {str(v): g.labels[v] for v in sorted(g.labels)}
    return doc


def render_graph(g: Graph) -> str:
    return json.dumps(graph_to_doc(g), separators=(",", ":"))


def graph_from_doc(doc: object) -> Graph:
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    if "n" not in doc or "edges" not in doc:
        raise GraphError("graph document needs keys 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphError(f"'n' must be a nonnegative integer, got {n!r}")
    raw = doc["edges"]
    if not isinstance(raw, list):
        raise GraphError("'edges' must be a list")
    edges = []
    for i, pair in enumerate(raw):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise GraphError(f"edge {i} must be a pair of integers, got {pair!r}")
        edges.append((pair[0], pair[1]))
    labels_raw = doc.get("labels", {})
    if not isinstance(labels_raw, dict):
        raise GraphError("'labels' must be an object")
    labels = {}
    for key, role in labels_raw.items():
        try:
            labels[int(key)] = str(role)
        except ValueError:
            raise GraphError(f"label key {key!r} is not a vertex index") from None
    return Graph(n, tuple(edges), labels)


def parse_graph(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}") from None
    return graph_from_doc(doc)


def canonical_doc(doc: dict) -> dict:
    """Canonical form used by the round-trip property: edges as sorted pairs."""
    out = {"n": doc["n"], "edges": sorted([min(u, v), max(u, v)] for u, v in doc["edges"])}
    if doc.get("labels"):
        out["labels"] = {str(k): v for k, v in sorted(doc["labels"].items(), key=lambda kv: int(kv[0]))}
    return out


def render_dot(g: Graph, burn: BurnSet | None = None, name: str = "G") -> str:
    """DOT text for ``g``; edges in ``burn`` are drawn dashed."""
    lines = [f"graph {name} {{"]
    for v in range(g.vertex_count):
        lab = g.labels.get(v)
        lines.append(f'  {v} [label="{lab}"];' if lab else f"  {v};")
    for e, (u, v) in enumerate(g.edges):
        style = " [style=dashed]" if burn is not None and e in burn else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_edges(n: int, edges: Sequence[tuple[int, int]], labels: Mapping[int, str] | None = None) -> Graph:
    return Graph(n, tuple(edges), dict(labels or {}))
