"""Scripted play on G_k: the cops' door-guarding cascade, the robber's
delayed Eulerian walk through the X-Y core, and a referee.

Cops are numbered in cascade order: 0 is Charlie on the {x, p, q} cycle,
1 is Alex on the a-cycle, 2 is Blake on the b-cycle, then one cop per
u^j-cycle. Cop ``m + 1`` covers the class doors shared with cop ``m``, so
whenever cop ``m`` has a mod-3 class (anywhere except x_1, x_2) cop
``m + 1`` must sit in the segment of that class.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterator

from .families import GkDescriptor, doors_unguarded
from .game import (
    PASS,
    ContractError,
    CopStep,
    GameState,
    Move,
    PlaceCops,
    PlaceRobber,
    RobberStep,
    Turn,
    apply,
    initial_state,
    is_capture,
    is_legal,
)
from .graph import BurnSet, Graph, edge_index, neighbors_live


class WalkExhausted(Exception):
    """The delay walk has no unburned edge left when the robber must move."""


class Policy:
    """Decision maker for one side. Subclasses keep their own memory."""

    def place(self, s: GameState) -> Move:
        raise NotImplementedError

    def decide(self, s: GameState) -> Move:
        raise NotImplementedError


# -- door coverage ---------------------------------------------------------------


class Coverage:
    """Door guarding check with a bitmask fast path.

    While no edge at a door is burned, the guard set of a vertex is fixed and
    coverage is an OR over cops; otherwise the exact live-edge check runs.
    """

    def __init__(self, d: GkDescriptor):
        self.d = d
        g = d.graph
        slot = {dv: i for i, dv in enumerate(d.door_vertices)}
        self.full = (1 << len(slot)) - 1
        self.guard = [0] * g.vertex_count
        door_edges = 0
        for v in range(g.vertex_count):
            m = 1 << slot[v] if v in slot else 0
            for u, e in g.adjacency[v]:
                if u in slot:
                    m |= 1 << slot[u]
                    door_edges |= 1 << e
            self.guard[v] = m
        self.door_edges = door_edges

    def covered(self, cops, burn: BurnSet = BurnSet()) -> bool:
        if burn.mask & self.door_edges:
            return not doors_unguarded(self.d, cops, burn)
        m = 0
        for c in cops:
            m |= self.guard[c]
        return m == self.full

    def unguarded(self, cops, burn: BurnSet = BurnSet()) -> list[int]:
        if self.covered(cops, burn):
            return []
        return doors_unguarded(self.d, cops, burn)


# -- cop side ---------------------------------------------------------------------


class _Cops(Policy):
    """Shared bookkeeping: cop m's position is an index into its home cycle."""

    def __init__(self, d: GkDescriptor):
        self.d = d
        self.g = d.graph
        self.homes = [d.cycles[name] for name in d.cop_cycles()]
        self.pos = [0] * len(self.homes)
        self.coverage = Coverage(d)
        self.core = set(d.xset) | set(d.yset)

    def vertices(self) -> list[int]:
        return [home[i] for home, i in zip(self.homes, self.pos)]

    def place(self, s: GameState) -> Move:
        if s.k != len(self.homes):
            raise ContractError(f"G_{self.d.k} needs exactly {len(self.homes)} cops, state has {s.k}")
        self.pos = [0] * len(self.homes)
        return PlaceCops(tuple(self.vertices()))

    def _sync(self, s: GameState) -> None:
        if tuple(sorted(self.vertices())) != s.cops:
            raise ContractError(f"cop policy lost track: believes {sorted(self.vertices())}, state {s.cops}")

    def _step_move(self, s: GameState, new_vertices: list[int]) -> CopStep:
        # s.cops is sorted; pair each sorted slot with the cop standing there
        cur = self.vertices()
        order = sorted(range(len(cur)), key=cur.__getitem__)
        return CopStep(tuple(new_vertices[m] for m in order))

    def _capture(self, s: GameState) -> CopStep | None:
        r = s.robber
        assert r is not None
        verts = self.vertices()
        for m, v in enumerate(verts):
            if v == r or r in neighbors_live(self.g, s.burn, v):
                new = list(verts)
                new[m] = r
                return self._step_move(s, new)
        return None

    # breadth-first chase through door-covering configurations
    def _cycle_neighbors(self, m: int, i: int, burn: BurnSet) -> list[int]:
        home = self.homes[m]
        L = len(home)
        out = [i]
        for j in ((i + 1) % L, (i - 1) % L):
            e = edge_index(self.g, home[i], home[j])
            if e is not None and e not in burn and j not in out:
                out.append(j)
        return out

    def _chase(self, s: GameState) -> CopStep:
        r = s.robber
        assert r is not None
        burn = s.burn
        goal = {r, *neighbors_live(self.g, burn, r)}
        start = tuple(self.pos)
        parent = {start: None}
        queue = deque([start])
        found = None
        while queue:
            cfg = queue.popleft()
            if any(self.homes[m][i] in goal for m, i in enumerate(cfg)) and cfg != start:
                found = cfg
                break
            options = [self._cycle_neighbors(m, i, burn) for m, i in enumerate(cfg)]
            for nxt in _product(options):
                if nxt in parent:
                    continue
                verts = [self.homes[m][i] for m, i in enumerate(nxt)]
                if r in verts or not self.coverage.covered(verts, burn):
                    continue
                parent[nxt] = cfg
                queue.append(nxt)
        if found is None:
            return self._step_move(s, self.vertices())
        while parent[found] != start:
            found = parent[found]
        new = [self.homes[m][i] for m, i in enumerate(found)]
        move = self._step_move(s, new)
        self.pos = list(found)
        return move


def _product(options: list[list[int]]) -> Iterator[tuple[int, ...]]:
    if not options:
        yield ()
        return
    for head in options[0]:
        for tail in _product(options[1:]):
            yield (head, *tail)


class CascadePolicy(_Cops):
    """Charlie shuttles between x_1 and x_2; everyone else keeps the doors covered.

    A step of cop ``m`` that changes its class makes cop ``m + 1`` cross into
    the neighbouring segment in the same turn, which in turn makes cop
    ``m + 2`` cross, and so on. Before such a joint step every lower cop is
    walked to the boundary of its segment, deepest requirement last.
    """

    def __init__(self, d: GkDescriptor):
        super().__init__(d)
        self.N = 3 * d.n
        self._plan: Iterator[dict[int, int]] | None = None

    def place(self, s: GameState) -> Move:
        move = super().place(s)
        self._plan = self._oscillate()
        return move

    # classes and segments
    def cls(self, m: int, i: int) -> int | None:
        if m == 0:
            if i == 0 or i == self.N + 1:
                return None
            j = i if i <= self.N else 2 * self.N + 2 - i  # p_j, or q_j on the way back
            return j % 3
        return (i + 1) % 3

    def seg_class(self, m: int, i: int) -> int:
        return (i // self.d.n + 1) % 3

    def _oscillate(self) -> Iterator[dict[int, int]]:
        x2 = self.N + 1
        while True:
            target = x2 if self.pos[0] == 0 else 0
            delta = 1 if target > self.pos[0] else -1
            while self.pos[0] != target:
                yield from self._step(0, self.pos[0] + delta)

    def _step(self, m: int, new: int) -> Iterator[dict[int, int]]:
        group = {m: new}
        old_c, new_c = self.cls(m, self.pos[m]), self.cls(m, new)
        j = m
        while j + 1 < len(self.homes) and new_c is not None and new_c != old_c:
            if old_c is None:
                yield from self._to_segment(j + 1, new_c)
                break
            delta = 1 if (new_c - old_c) % 3 == 1 else -1
            yield from self._to_boundary(j + 1, delta)
            nxt = (self.pos[j + 1] + delta) % self.N
            group[j + 1] = nxt
            old_c, new_c = self.cls(j + 1, self.pos[j + 1]), self.cls(j + 1, nxt)
            j += 1
        for c, i in group.items():
            self.pos[c] = i
        yield group

    def _to_boundary(self, m: int, delta: int) -> Iterator[dict[int, int]]:
        n = self.d.n
        seg = self.pos[m] // n
        target = seg * n + (n - 1 if delta == 1 else 0)
        while self.pos[m] != target:
            yield from self._step(m, self.pos[m] + delta)

    def _to_segment(self, m: int, want: int) -> Iterator[dict[int, int]]:
        have = self.seg_class(m, self.pos[m])
        if have == want:
            return
        delta = 1 if (want - have) % 3 == 1 else -1
        while self.seg_class(m, self.pos[m]) != want:
            yield from self._step(m, (self.pos[m] + delta) % self.N)

    def decide(self, s: GameState) -> Move:
        self._sync(s)
        cap = self._capture(s)
        if cap is not None:
            return cap
        if s.robber not in self.core:
            return self._chase(s)
        assert self._plan is not None
        before = self.vertices()
        group = next(self._plan)
        new = list(before)
        for m, i in group.items():
            new[m] = self.homes[m][i]
        # _step already advanced self.pos; pair slots using the old positions
        order = sorted(range(len(before)), key=before.__getitem__)
        return CopStep(tuple(new[m] for m in order))


class GreedyCyclePolicy(_Cops):
    """Capture a robber who starts on one of the cops' home cycles.

    Cops stay on their cycles and only move between door-covering
    configurations, taking a shortest route (in joint cop turns) to a
    configuration adjacent to the robber's current vertex.
    """

    def __init__(self, d: GkDescriptor, robber_cycle: str):
        super().__init__(d)
        if robber_cycle not in d.cycles:
            raise ContractError(f"unknown cycle {robber_cycle!r}")
        self.robber_cycle = robber_cycle

    def decide(self, s: GameState) -> Move:
        self._sync(s)
        cap = self._capture(s)
        if cap is not None:
            return cap
        return self._chase(s)


def cop_cascade_policy(d: GkDescriptor) -> CascadePolicy:
    return CascadePolicy(d)


def greedy_cycle_capture(d: GkDescriptor, robber_cycle: str) -> GreedyCyclePolicy:
    return GreedyCyclePolicy(d, robber_cycle)


# -- robber side ------------------------------------------------------------------


def eulerian_circuit(adj: dict[int, list[int]], start: int) -> list[int]:
    """Hierholzer's algorithm; ``adj`` must be connected with all degrees even."""
    remaining = {v: list(reversed(nb)) for v, nb in adj.items()}
    used: set[tuple[int, int]] = set()
    stack, circuit = [start], []
    while stack:
        v = stack[-1]
        nb = remaining[v]
        while nb and (min(v, nb[-1]), max(v, nb[-1])) in used:
            nb.pop()
        if nb:
            u = nb.pop()
            used.add((min(v, u), max(v, u)))
            stack.append(u)
        else:
            circuit.append(stack.pop())
    return circuit[::-1]


def core_walk(d: GkDescriptor, start: int) -> list[int]:
    """Closed trail through the X-Y core starting at ``start``.

    With 3n even this is an Eulerian circuit over all 9n^2 core edges. With
    3n odd every core vertex has odd degree, so the perfect matching
    X_i Y_i is left out and the circuit covers the other 9n^2 - 3n edges.
    """
    X, Y = d.xset, d.yset
    skip = set()
    if len(X) % 2 == 1:
        skip = {(x, y) for x, y in zip(X, Y)}
    adj: dict[int, list[int]] = {v: [] for v in (*X, *Y)}
    for x in X:
        for y in Y:
            if (x, y) not in skip:
                adj[x].append(y)
                adj[y].append(x)
    return eulerian_circuit(adj, start)


class RobberDelayPolicy(Policy):
    """Follow a fixed core walk, advancing only when a cop is adjacent."""

    def __init__(self, d: GkDescriptor, start: int | None = None):
        self.d = d
        self.g = d.graph
        core = set(d.xset) | set(d.yset)
        start = d.yset[0] if start is None else start
        if start not in core:
            raise ContractError("the delay walk must start in X or Y")
        self.walk = core_walk(d, start)
        self.i = 0

    def place(self, s: GameState) -> Move:
        self.i = 0
        return PlaceRobber(self.walk[0])

    def decide(self, s: GameState) -> Move:
        r = s.robber
        assert r is not None and r == self.walk[self.i]
        live = neighbors_live(self.g, s.burn, r)
        if not any(c in live for c in s.cops):
            return PASS
        if self.i + 1 >= len(self.walk):
            raise WalkExhausted
        nxt = self.walk[self.i + 1]
        if nxt not in live:
            raise WalkExhausted
        self.i += 1
        return RobberStep(nxt)


def robber_delay_policy(d: GkDescriptor, start: int | None = None) -> RobberDelayPolicy:
    return RobberDelayPolicy(d, start)


class FleeRobber(Policy):
    """Start at a given vertex; when threatened, step to the safe neighbour farthest from the cops."""

    def __init__(self, g: Graph, start: int):
        self.g = g
        self.start = start

    def place(self, s: GameState) -> Move:
        return PlaceRobber(self.start)

    def decide(self, s: GameState) -> Move:
        r = s.robber
        assert r is not None
        g, burn = self.g, s.burn
        danger = set(s.cops)
        for c in s.cops:
            danger.update(neighbors_live(g, burn, c))
        if r not in danger:
            return PASS
        dist = _bfs(g, burn, s.cops)
        best, best_d = None, -1
        for u in neighbors_live(g, burn, r):
            if u not in danger and dist.get(u, 1 << 30) > best_d:
                best, best_d = u, dist.get(u, 1 << 30)
        return PASS if best is None else RobberStep(best)


def _bfs(g: Graph, burn: BurnSet, sources) -> dict[int, int]:
    dist = {v: 0 for v in sources}
    q = deque(sources)
    while q:
        v = q.popleft()
        for u in neighbors_live(g, burn, v):
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    return dist


# -- referee ----------------------------------------------------------------------


@dataclass(frozen=True)
class Outcome:
    kind: str  # Captured | WalkExhausted | DoorBreach | RoundCap
    round: int
    door: int | None = None


@dataclass
class SimulationTrace:
    rounds_played: int = 0
    robber_forced_moves: int = 0
    cop_steps_per_oscillation: list[int] = field(default_factory=list)
    outcome: Outcome | None = None
    door_coverage_violations: int = 0
    confinement_violations: int = 0

    def to_json(self) -> dict:
        o = self.outcome
        return {
            "rounds_played": self.rounds_played,
            "robber_forced_moves": self.robber_forced_moves,
            "cop_steps_per_oscillation": self.cop_steps_per_oscillation,
            "outcome": None if o is None else {"kind": o.kind, "round": o.round, "door": o.door},
            "door_coverage_violations": self.door_coverage_violations,
            "confinement_violations": self.confinement_violations,
        }


def default_round_cap(d: GkDescriptor) -> int:
    return 10 * (3 * d.n) ** (d.k + 2)


def simulate(
    d: GkDescriptor,
    cops: Policy,
    robber: Policy,
    round_cap: int | None = None,
    trace_out: IO[str] | None = None,
) -> SimulationTrace:
    """Play ``cops`` against ``robber`` under the game rules and record costs.

    Every move is checked for legality. After each cop turn the doors must be
    covered (a lapse ends the game as DoorBreach) and, while the robber is in
    the core, every cop must stand on its home cycle.
    """
    if round_cap is None:
        round_cap = default_round_cap(d)
    if round_cap <= 0:
        raise ValueError("round_cap must be positive")
    g = d.graph
    cov = Coverage(d)
    core = set(d.xset) | set(d.yset)
    home_cycles = [set(d.cycles[name]) for name in d.cop_cycles()]
    ends = {d.x1, d.x2}
    tr = SimulationTrace()

    def play(s: GameState, policy: Policy, mover: str, fn) -> GameState:
        m = fn(s)
        if not is_legal(g, s, m):
            raise ContractError(f"{mover} policy emitted illegal move {m} in {s}")
        s2 = apply(g, s, m, check=False)
        if trace_out is not None:
            trace_out.write(
                json.dumps(
                    {
                        "round": _trace_round(s, s2),
                        "mover": mover,
                        "move": _move_json(m),
                        "burn": len(s2.burn),
                        "unguarded": cov.unguarded(s2.cops, s2.burn) if s2.cops else [],
                    }
                )
                + "\n"
            )
        return s2

    s = initial_state(len(d.cop_cycles()))
    s = play(s, cops, "cops", cops.place)
    s = play(s, robber, "robber", robber.place)
    if is_capture(s):
        tr.outcome = Outcome("Captured", 0)
        return tr
    last_end = next((v for v in s.cops if v in ends), None)
    turns_since = 0
    while s.round < round_cap:
        tr.rounds_played = s.round + 1
        s = play(s, cops, "cops", cops.decide)
        turns_since += 1
        if is_capture(s):
            tr.outcome = Outcome("Captured", s.round + 1)
            return tr
        if s.robber in core and not all(any(c in h for h in home_cycles) for c in s.cops):
            tr.confinement_violations += 1
        open_doors = cov.unguarded(s.cops, s.burn)
        if open_doors:
            tr.door_coverage_violations += 1
            tr.outcome = Outcome("DoorBreach", s.round + 1, open_doors[0])
            return tr
        at_end = next((v for v in s.cops if v in ends), None)
        if at_end is not None and at_end != last_end:
            if last_end is not None:
                tr.cop_steps_per_oscillation.append(turns_since)
            last_end = at_end
            turns_since = 0
        try:
            before = s.robber
            s = play(s, robber, "robber", robber.decide)
        except WalkExhausted:
            tr.outcome = Outcome("WalkExhausted", s.round + 1)
            return tr
        if s.robber != before:
            tr.robber_forced_moves += 1
        if is_capture(s):
            tr.outcome = Outcome("Captured", s.round)
            return tr
    tr.outcome = Outcome("RoundCap", s.round)
    return tr


def _trace_round(before: GameState, after: GameState) -> int:
    # placement is round 0; a cop turn opens round r + 1, the robber's step closes it
    if before.turn in (Turn.COP_PLACEMENT, Turn.ROBBER_PLACEMENT):
        return 0
    if before.turn is Turn.COPS_TO_MOVE:
        return before.round + 1
    return after.round


def _move_json(m: Move):
    if isinstance(m, PlaceCops):
        return {"place_cops": list(m.cops)}
    if isinstance(m, PlaceRobber):
        return {"place_robber": m.vertex}
    if isinstance(m, CopStep):
        return {"cops": list(m.dests)}
    return {"robber": m.to}


def run_cascade(k: int, n: int, round_cap: int | None = None, trace_out: IO[str] | None = None) -> SimulationTrace:
    from .families import build_gk

    d = build_gk(k, n)
    return simulate(d, cop_cascade_policy(d), robber_delay_policy(d), round_cap, trace_out)
