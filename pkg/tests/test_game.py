from __future__ import annotations

import pytest

from burncops.game import (
    PASS,
    ContractError,
    CopStep,
    GameState,
    PlaceCops,
    PlaceRobber,
    RobberStep,
    Turn,
    apply,
    capture_round,
    initial_state,
    is_capture,
    is_legal,
    legal_moves,
)
from burncops.graph import BurnSet, Graph
from playouts import fuzz

P3 = Graph(3, ((0, 1), (1, 2)))
K1 = Graph(1, ())


def state(cops, robber, turn, burn=(), rnd=0):
    return GameState(len(cops), tuple(cops), robber, BurnSet.of(burn), turn, rnd)


def test_cop_moves_on_path():
    moves = legal_moves(P3, state([1], 2, Turn.COPS_TO_MOVE))
    assert sorted(m.dests for m in moves) == [(0,), (1,), (2,)]


def test_robber_isolated_by_own_burn():
    assert legal_moves(P3, state([0], 2, Turn.ROBBER_TO_MOVE, burn=[1])) == [PASS]


def test_k1_robber_forced_onto_cop():
    s = apply(K1, initial_state(1), PlaceCops((0,)))
    assert legal_moves(K1, s) == [PlaceRobber(0)]
    s = apply(K1, s, PlaceRobber(0))
    assert is_capture(s) and capture_round(s) == 0


def test_robber_step_burns_and_pass_does_not():
    s = state([0], 1, Turn.ROBBER_TO_MOVE)
    moved = apply(P3, s, RobberStep(2))
    assert moved.robber == 2 and list(moved.burn) == [1] and moved.round == 1
    stayed = apply(P3, s, PASS)
    assert stayed.burn == s.burn and stayed.round == 1


def test_cop_step_never_burns():
    s = state([0, 2], 1, Turn.COPS_TO_MOVE, burn=[0])
    for m in legal_moves(P3, s):
        assert apply(P3, s, m).burn == s.burn


def test_burned_edge_blocks_cops_too():
    s = state([0], 2, Turn.COPS_TO_MOVE, burn=[0])
    assert [m.dests for m in legal_moves(P3, s)] == [(0,)]
    with pytest.raises(ContractError):
        apply(P3, s, CopStep((1,)))


def test_is_capture_examples():
    assert is_capture(state([0], 0, Turn.COPS_TO_MOVE))
    assert not is_capture(state([0, 2], 1, Turn.COPS_TO_MOVE))
    with pytest.raises(ContractError):
        is_capture(initial_state(1))


def test_terminal_state_has_no_moves():
    with pytest.raises(ContractError):
        legal_moves(P3, state([1], 1, Turn.ROBBER_TO_MOVE))


def test_capture_round_counts():
    s = state([0], 2, Turn.COPS_TO_MOVE, rnd=3)
    s = apply(P3, s, CopStep((1,)))
    s = apply(P3, s, PASS)
    s = apply(P3, s, CopStep((2,)))
    assert is_capture(s) and capture_round(s) == 5


def test_state_invariants_and_text():
    with pytest.raises(ContractError):
        GameState(2, (2, 1), 0, turn=Turn.COPS_TO_MOVE)
    with pytest.raises(ContractError):
        GameState(1, (0,), None, turn=Turn.COPS_TO_MOVE)
    s = state([0, 2], 1, Turn.ROBBER_TO_MOVE, burn=[1], rnd=4)
    assert str(s) == "cops=[0, 2] rob=1 burn={1} turn=RobberToMove round=4"


def test_cop_order_is_relabelled():
    s = state([0, 2], 1, Turn.COPS_TO_MOVE, burn=[0])
    # the cop at 2 steps to 1, listed out of slot order
    assert is_legal(P3, s, CopStep((1, 0)))
    assert apply(P3, s, CopStep((1, 0))).cops == (0, 1)


def test_cop_moves_are_deduplicated():
    s = state([1, 1], 0, Turn.COPS_TO_MOVE)
    g = Graph(3, ((1, 2), (0, 2)))
    outcomes = [tuple(sorted(m.dests)) for m in legal_moves(g, s)]
    assert len(outcomes) == len(set(outcomes)) == 3


def test_fuzz_small():
    stats = fuzz(2000, seed=11, n_max=7)
    assert stats.violations == 0
    assert stats.captures > 0
