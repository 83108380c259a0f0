from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burncops import families, kernels, solver
from burncops.game import GameState, Turn, apply, legal_moves
from burncops.graph import BurnSet, Graph, disjoint_union
from burncops.solver import CapacityError, capture_time, compare_tables, cop_number, solve_k, value_table

K1 = Graph(1, ())
P2 = families.path(2)
TWO_K1 = families.empty(2)

# Frozen from the value-iteration oracle; the layered solver reproduces them.
# name -> (k, cops_win, capture_time, optimal_cop_start)
GOLDEN = {
    "P3": (families.path(3), 1, True, 1, (1,)),
    "P4": (families.path(4), 1, True, 2, (1,)),
    "P5": (families.path(5), 1, True, 2, (2,)),
    "P6": (families.path(6), 1, False, None, (0,)),
    "P7": (families.path(7), 1, False, None, (0,)),
    "P8": (families.path(8), 1, False, None, (0,)),
    "C3": (families.cycle(3), 1, True, 1, (0,)),
    "C4": (families.cycle(4), 1, True, 3, (0,)),
    "C5": (families.cycle(5), 1, True, 4, (0,)),
    "C6": (families.cycle(6), 1, True, 6, (0,)),
    "C7": (families.cycle(7), 1, True, 7, (0,)),
    "C8": (families.cycle(8), 1, True, 9, (0,)),
    "K2,2": (families.complete_bipartite(2, 2), 1, True, 3, (0,)),
    "K2,3": (families.complete_bipartite(2, 3), 1, True, 3, (0,)),
    "Q3": (families.hypercube(3), 1, True, 7, (0,)),
    "grid3x3": (families.grid(3, 3), 1, True, 4, (4,)),
    "P6 two cops": (families.path(6), 2, True, 1, (1, 4)),
}


@pytest.mark.parametrize("method", ["retro", "vi"])
def test_hand_values(method):
    r = solve_k(K1, 1, method)
    assert r.cops_win and r.capture_time == 0
    r = solve_k(P2, 1, method)
    assert (r.cops_win, r.capture_time, r.optimal_cop_start, r.robber_best_start) == (True, 1, (0,), 1)
    assert not solve_k(TWO_K1, 1, method).cops_win
    r = solve_k(TWO_K1, 2, method)
    assert r.cops_win and r.capture_time == 0 and r.optimal_cop_start == (0, 1)


@pytest.mark.parametrize("name", list(GOLDEN))
@pytest.mark.parametrize("method", ["retro", "vi"])
def test_golden(name, method):
    g, k, win, capt, start = GOLDEN[name]
    r = solve_k(g, k, method)
    assert (r.cops_win, r.capture_time, r.optimal_cop_start) == (win, capt, start)
    assert r.method == solver.METHOD_NAMES[method]


def test_cop_number_examples():
    assert cop_number(TWO_K1, 3)[0] == 2
    cb, results = cop_number(families.path(5), 2)
    assert cb == 1 and len(results) == 1
    assert cop_number(families.path(7), 1)[0] is None
    assert capture_time(K1) == (1, 0)
    assert capture_time(P2) == (1, 1)
    assert capture_time(families.complete_bipartite(2, 2)) == (1, 3)


def test_more_cops_than_vertices_allowed():
    r = solve_k(P2, 3)
    assert r.cops_win and r.capture_time == 0 and r.optimal_cop_start == (0, 0, 1)


def test_capacity_error():
    with pytest.raises(CapacityError):
        solve_k(families.complete(12), 1)
    with pytest.raises(ValueError):
        solve_k(P2, 0)
    with pytest.raises(ValueError):
        solve_k(P2, 1, "nope")  # type: ignore[arg-type]


def test_result_json():
    doc = solve_k(P2, 1).to_json()
    assert doc["optimal_cop_start"] == [0] and doc["method"] == "LayeredRetrograde"


# -- independent oracle: depth-limited search through the game engine -------------

HORIZON = 14


def engine_capture_time(g: Graph, k: int) -> int | None:
    """Capture time by iterative deepening over engine moves, None if beyond HORIZON."""

    @lru_cache(maxsize=None)
    def cops_within(s: GameState, t: int) -> bool:
        # cops to move; can they force capture within t more rounds?
        if t == 0:
            return False
        for m in legal_moves(g, s):
            s2 = apply(g, s, m, check=False)
            if s2.robber in s2.cops:
                return True
            if t > 1 and all(
                (s3 := apply(g, s2, rm, check=False)).robber in s3.cops or cops_within(s3, t - 1)
                for rm in legal_moves(g, s2)
            ):
                return True
        return False

    def start_value(cops: tuple[int, ...], r: int) -> int | None:
        if r in cops:
            return 0
        s = GameState(k, cops, r, BurnSet(), Turn.COPS_TO_MOVE, 0)
        return next((t for t in range(1, HORIZON + 1) if cops_within(s, t)), None)

    best: int | None = None
    for cops in itertools.combinations_with_replacement(range(g.vertex_count), k):
        vals = [start_value(cops, r) for r in range(g.vertex_count)]
        if None in vals:
            continue
        worst = max(vals)
        if best is None or worst < best:
            best = worst
    return best


TINY = [
    K1,
    P2,
    TWO_K1,
    families.path(3),
    families.path(4),
    families.cycle(3),
    families.cycle(4),
    families.complete_bipartite(1, 3),
    Graph(4, ((0, 1), (1, 2), (2, 0), (0, 3))),  # triangle with a pendant
    disjoint_union(P2, K1),
    families.complete(4),
]


@pytest.mark.parametrize("gi", range(len(TINY)))
@pytest.mark.parametrize("k", [1, 2])
def test_engine_oracle_agrees(gi, k):
    g = TINY[gi]
    expect = engine_capture_time(g, k)
    for method in ("retro", "vi"):
        r = solve_k(g, k, method)
        assert r.capture_time == expect, method


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.floats(0.2, 0.9), st.integers(0, 2**32))
def test_engine_oracle_random(n, p, seed):
    g = families.random_gnp(n, p, seed)
    if g.edge_count > 6:
        return
    assert solve_k(g, 1).capture_time == engine_capture_time(g, 1)


# -- cross-checks and structural properties ----------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.floats(0.1, 0.9), st.integers(0, 2**32), st.integers(1, 2))
def test_methods_agree_on_every_shared_position(n, p, seed, k):
    g = families.random_gnp(n, p, seed)
    a, b = value_table(g, k, "retro"), value_table(g, k, "vi")
    assert compare_tables(a, b) == []
    ra, rb = solve_k(g, k, "retro"), solve_k(g, k, "vi")
    assert (ra.cops_win, ra.capture_time, ra.optimal_cop_start) == (rb.cops_win, rb.capture_time, rb.optimal_cop_start)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.floats(0.2, 0.8), st.integers(0, 2**32))
def test_more_cops_never_hurt(n, p, seed):
    g = families.random_gnp(n, p, seed)
    prev = None
    for k in (1, 2, 3):
        r = solve_k(g, k)
        cur = r.capture_time if r.cops_win else float("inf")
        if prev is not None:
            assert cur <= prev
        prev = cur


def test_pendant_is_a_refuge():
    # triangle 0-1-2 with hole 3 hanging off door 0
    g = Graph(4, ((0, 1), (1, 2), (2, 0), (0, 3)))
    door, hole, e = 0, 3, 3
    table = value_table(g, 1, "vi")
    for i, (m, r) in enumerate(zip(table.masks, table.robbers)):
        if r != door or int(m) >> e & 1:
            continue
        for t, cops in enumerate(table.tuples):
            if all(c not in (door, hole) and door not in g.neighbors(c) for c in cops):
                assert table.values[i, t] == kernels.INF


def test_values_are_capture_rounds():
    # P3 with the cop at 0 and robber at 2: cop walks 0->1 (robber can't pass through), captures in round 2
    table = value_table(families.path(3), 1, "retro")
    row = table.lookup()[(0, 2)]
    assert table.values[row, 0] == 2
    assert table.values[row, 1] == 1
    assert table.values[row, 2] == 0


def test_cop_tuple_ranks():
    tuples = solver.cop_tuples(5, 3)
    prefix = solver.rank_prefix(5, 3)
    for i, t in enumerate(tuples):
        assert kernels.tuple_rank(np.asarray(t), 3, prefix) == i
