"""Graph generators: the classical benchmark families and the G_k construction.

G_k vertex layout (1-based role indices, 0-based vertex ids), frozen so that
golden data stays stable::

    p_1..p_3n | q_1..q_3n | x_1 x_2 | X (3n) | Y (3n) | a (3n) | b (3n)
    | u^1 (3n) | ... | u^(k-3) (3n) | doors | holes

Doors are listed in the order of ``GkDescriptor.doors`` and hole ``i`` is the
pendant of door ``i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .graph import BurnSet, Graph, GraphError


def path(n: int) -> Graph:
    _positive(n=n)
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs at least 3 vertices, got {n}")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_bipartite(m: int, n: int) -> Graph:
    _positive(m=m, n=n)
    return Graph(m + n, tuple((i, m + j) for i in range(m) for j in range(n)))


def complete(n: int) -> Graph:
    _positive(n=n)
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def hypercube(d: int) -> Graph:
    _positive(d=d)
    edges = [(v, v ^ (1 << i)) for v in range(1 << d) for i in range(d) if v < v ^ (1 << i)]
    return Graph(1 << d, tuple(edges))


def grid(m: int, n: int) -> Graph:
    """m rows by n columns; vertex ``r * n + c``."""
    _positive(m=m, n=n)
    edges = []
    for r in range(m):
        for c in range(n):
            v = r * n + c
            if c + 1 < n:
                edges.append((v, v + 1))
            if r + 1 < m:
                edges.append((v, v + n))
    return Graph(m * n, tuple(edges))


def empty(n: int) -> Graph:
    return Graph(n, ())


def random_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); each pair (i < j) in lexicographic order draws once."""
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    if n < 0:
        raise GraphError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, tuple(pr for pr, k in zip(pairs, keep) if k))


def _positive(**sizes: int) -> None:
    for name, v in sizes.items():
        if v < 1:
            raise GraphError(f"{name} must be positive, got {v}")


# -- G_k ------------------------------------------------------------------------


class Role(NamedTuple):
    """``kind`` is one of P, Q, X1, X2, Xset, Yset, A, B, U, Door, Hole."""

    kind: str
    index: tuple = ()

    def __str__(self) -> str:
        if self.kind in ("X1", "X2"):
            return self.kind.lower()
        if self.kind in ("Door", "Hole"):
            return ("d" if self.kind == "Door" else "h") + "[" + ",".join(map(str, self.index)) + "]"
        if self.kind == "U":
            return f"u{self.index[0]}_{self.index[1]}"
        short = {"P": "p", "Q": "q", "Xset": "X", "Yset": "Y", "A": "a", "B": "b"}[self.kind]
        return f"{short}{self.index[0]}"


@dataclass(frozen=True, eq=False)
class GkDescriptor:
    graph: Graph
    k: int
    n: int
    roles: dict[int, Role]
    doors: tuple[tuple[int, int], ...]
    cycles: dict[str, tuple[int, ...]]
    vertex: dict[str, int] = field(repr=False)

    @property
    def x1(self) -> int:
        return self.vertex["x1"]

    @property
    def x2(self) -> int:
        return self.vertex["x2"]

    @property
    def xset(self) -> tuple[int, ...]:
        return tuple(self.vertex[f"X{i}"] for i in range(1, 3 * self.n + 1))

    @property
    def yset(self) -> tuple[int, ...]:
        return tuple(self.vertex[f"Y{i}"] for i in range(1, 3 * self.n + 1))

    @property
    def door_vertices(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.doors)

    def standard_position(self) -> tuple[int, ...]:
        """Charlie on x_1 and every other cop on index 1 of its cycle."""
        return tuple(self.cycles[name][0] for name in self.cop_cycles())

    def cop_cycles(self) -> list[str]:
        """Cycle names in cascade order: Charlie, Alex, Blake, u^1, ..."""
        return ["pqx", "a", "b"] + [f"u{j}" for j in range(1, self.k - 2)]


def gk_vertex_count(k: int, n: int) -> int:
    """Vertex count of the construction as generated here.

    Blocks of 3n: p, q, X, Y, a, b and k-3 u-cycles; plus x_1, x_2 and a
    door/hole pair for each of 23 + 7(k-3) doors.
    """
    return 3 * n * (k + 3) + 2 + 2 * (23 + 7 * (k - 3))


def build_gk(k: int, n: int) -> GkDescriptor:
    if k < 3:
        raise GraphError(f"the construction needs k >= 3, got {k}")
    if n < 1:
        raise GraphError(f"n must be positive, got {n}")
    N = 3 * n
    roles: list[Role] = []

    def block(kind: str, count: int, *prefix) -> list[int]:
        start = len(roles)
        roles.extend(Role(kind, (*prefix, i)) for i in range(1, count + 1))
        return list(range(start, start + count))

    P = block("P", N)
    Q = block("Q", N)
    x1 = len(roles)
    roles.append(Role("X1"))
    x2 = len(roles)
    roles.append(Role("X2"))
    X = block("Xset", N)
    Y = block("Yset", N)
    A = block("A", N)
    B = block("B", N)
    U = {j: block("U", N, j) for j in range(1, k - 2)}

    door_names: list[tuple] = [("x",), ("X", 1), ("X", 2), ("Y", 1), ("Y", 2), ("a",), ("a", 1), ("a", 2)]
    door_names += [("a", i, l) for i in range(1, 4) for l in (1, 2)]
    door_names += [("b",), ("b", 1), ("b", 2)]
    door_names += [("b", i, l) for i in range(1, 4) for l in (1, 2)]
    for j in range(1, k - 2):
        door_names += [(f"u{j}",)] + [(f"u{j}", i, l) for i in range(1, 4) for l in (1, 2)]
    door = {}
    for name in door_names:
        door[name] = len(roles)
        roles.append(Role("Door", name))
    hole = {}
    for name in door_names:
        hole[name] = len(roles)
        roles.append(Role("Hole", name))

    edges: list[tuple[int, int]] = []
    add = edges.append
    XY = X + Y
    cyc_pqx = [x1, *P, x2, *reversed(Q)]

    # the {x, p, q} cycle; p_3n and q_3n attach to x_2 so that it closes
    for i in range(N - 1):
        add((P[i], P[i + 1]))
        add((Q[i], Q[i + 1]))
    for v in (P[0], Q[0]):
        add((v, x1))
    for v in (P[-1], Q[-1]):
        add((v, x2))
    for v in cyc_pqx:
        add((v, door[("x",)]))
    # bipartite core and the x_1 / x_2 completeness edges
    for v in X:
        add((x1, v))
    for v in Y:
        add((x2, v))
    for u in X:
        for v in Y:
            add((u, v))
    for name in (("X", 1), ("X", 2), ("Y", 1), ("Y", 2)):
        for v in cyc_pqx:
            add((v, door[name]))
    for v in X:
        add((v, door[("X", 1)]))
        add((v, door[("X", 2)]))
    for v in Y:
        add((v, door[("Y", 1)]))
        add((v, door[("Y", 2)]))

    def ring(vs: list[int]) -> None:
        for i in range(N):
            add((vs[i], vs[(i + 1) % N]))

    def segment(vs: list[int], i: int) -> list[int]:
        return vs[(i - 1) * n : i * n]

    def off_class(vs: list[int], i: int) -> list[int]:
        # 1-based index j with j != i (mod 3)
        return [v for j, v in enumerate(vs, start=1) if j % 3 != i % 3]

    for label, cyc, hub in (("a", A, x1), ("b", B, x2)):
        ring(cyc)
        for v in cyc:
            add((v, door[(label,)]))
            add((v, door[(label, 1)]))
            add((v, door[(label, 2)]))
            add((v, hub))
        for v in XY:
            add((v, door[(label, 1)]))
            add((v, door[(label, 2)]))
    for i in range(1, 4):
        for l in (1, 2):
            d = door[("a", i, l)]
            for v in XY:
                add((v, d))
            add((x1, d))
            add((x2, d))
            for v in off_class(P, i) + off_class(Q, i):
                add((v, d))
            for v in segment(A, i):
                add((v, d))
            d = door[("b", i, l)]
            for v in XY:
                add((v, d))
            for v in off_class(A, i):
                add((v, d))
            for v in segment(B, i):
                add((v, d))
    below = B
    for j in range(1, k - 2):
        cyc = U[j]
        ring(cyc)
        for v in cyc:
            add((v, door[(f"u{j}",)]))
        for i in range(1, 4):
            for l in (1, 2):
                d = door[(f"u{j}", i, l)]
                for v in XY:
                    add((v, d))
                for v in off_class(below, i):
                    add((v, d))
                for v in segment(cyc, i):
                    add((v, d))
        below = cyc
    for name in door_names:
        add((door[name], hole[name]))

    labels = {v: str(r) for v, r in enumerate(roles)}
    g = Graph(len(roles), tuple(edges), labels)
    cycles = {"pqx": tuple(cyc_pqx), "a": tuple(A), "b": tuple(B)}
    cycles.update({f"u{j}": tuple(U[j]) for j in U})
    return GkDescriptor(
        graph=g,
        k=k,
        n=n,
        roles=dict(enumerate(roles)),
        doors=tuple((door[nm], hole[nm]) for nm in door_names),
        cycles=cycles,
        vertex={lab: v for v, lab in labels.items()},
    )


def doors_unguarded(d: GkDescriptor, cop_positions, burn: BurnSet = BurnSet()) -> list[int]:
    """Doors neither occupied by a cop nor adjacent to one along a live edge."""
    g = d.graph
    guarded = set(cop_positions)
    for c in cop_positions:
        for u, e in g.adjacency[c]:
            if e not in burn:
                guarded.add(u)
    return [dv for dv in d.door_vertices if dv not in guarded]
