"""Random legal playouts with invariant checks, shared by the engine tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from burncops.game import RobberStep, Turn, apply, initial_state, is_capture, is_legal, legal_moves
from burncops.graph import Graph

NEXT_TURN = {
    Turn.COP_PLACEMENT: Turn.ROBBER_PLACEMENT,
    Turn.ROBBER_PLACEMENT: Turn.COPS_TO_MOVE,
    Turn.COPS_TO_MOVE: Turn.ROBBER_TO_MOVE,
    Turn.ROBBER_TO_MOVE: Turn.COPS_TO_MOVE,
}


@dataclass
class FuzzStats:
    playouts: int = 0
    moves: int = 0
    violations: int = 0
    captures: int = 0


def random_graph(rng: random.Random, n_max: int = 10) -> Graph:
    n = rng.randint(1, n_max)
    p = rng.random()
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p))


def playout(g: Graph, k: int, rng: random.Random, stats: FuzzStats, max_rounds: int = 30) -> None:
    s = initial_state(k)
    robber_steps = 0
    stats.playouts += 1
    while True:
        m = rng.choice(legal_moves(g, s))
        ok = is_legal(g, s, m)
        nxt = apply(g, s, m, check=False)
        if isinstance(m, RobberStep) and m.to is not None and m.to != s.robber:
            robber_steps += 1
        ok = (
            ok
            and nxt.turn is NEXT_TURN[s.turn]
            and s.burn.issubset(nxt.burn)
            and len(nxt.burn) == robber_steps
            and list(nxt.cops) == sorted(nxt.cops)
            and len(nxt.cops) == k
            and nxt.round == s.round + (s.turn is Turn.ROBBER_TO_MOVE)
        )
        stats.moves += 1
        stats.violations += not ok
        s = nxt
        if s.robber is not None and is_capture(s):
            stats.captures += 1
            return
        if s.round >= max_rounds:
            return


def fuzz(count: int, seed: int, n_max: int = 10, k_max: int = 3) -> FuzzStats:
    rng = random.Random(seed)
    stats = FuzzStats()
    for _ in range(count):
        g = random_graph(rng, n_max)
        playout(g, rng.randint(1, k_max), rng, stats)
    return stats
