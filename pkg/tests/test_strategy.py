from __future__ import annotations

import io
import json

import pytest

from burncops.families import build_gk
from burncops.game import PASS, ContractError, GameState, RobberStep, Turn, initial_state
from burncops.graph import BurnSet, edge_index, neighbors_live
from burncops.strategy import (
    CascadePolicy,
    FleeRobber,
    RobberDelayPolicy,
    WalkExhausted,
    cop_cascade_policy,
    core_walk,
    eulerian_circuit,
    greedy_cycle_capture,
    robber_delay_policy,
    run_cascade,
    simulate,
)

# Frozen from the first conforming runs of cascade vs delay walk.
# (k, n) -> (rounds_played, robber_forced_moves, steady per-traversal cop turns)
CASCADE_GOLDEN = {
    (3, 1): (28, 6, 4),
    (3, 2): (706, 36, 19),
    (3, 3): (4826, 72, None),
    (4, 1): (28, 6, 4),
    (4, 2): (1302, 36, 35),
}


def walk_edges(walk):
    return [frozenset(p) for p in zip(walk, walk[1:])]


def test_eulerian_circuit_small():
    adj = {0: [2, 3], 1: [2, 3], 2: [0, 1], 3: [0, 1]}
    walk = eulerian_circuit(adj, 0)
    assert walk[0] == walk[-1] == 0
    assert len(set(walk_edges(walk))) == len(walk) - 1 == 4


@pytest.mark.parametrize("n, length", [(1, 6), (2, 36), (3, 72), (4, 144)])
def test_core_walk_length(n, length):
    d = build_gk(3, n)
    walk = core_walk(d, d.yset[0])
    edges = walk_edges(walk)
    assert len(edges) == len(set(edges)) == length
    core = set(d.xset) | set(d.yset)
    assert set(walk) <= core and walk[0] == d.yset[0]


def in_core_state(d, cops, robber, burn=BurnSet()):
    return GameState(len(cops), tuple(sorted(cops)), robber, burn, Turn.ROBBER_TO_MOVE, 0)


def test_delay_robber_waits_until_threatened():
    d = build_gk(3, 2)
    pol = robber_delay_policy(d)
    s = GameState(3, (), None)
    place = pol.place(s)
    assert place.vertex == d.yset[0]
    quiet = in_core_state(d, d.standard_position(), d.yset[0])
    assert pol.decide(quiet) == PASS


def test_delay_robber_steps_when_charlie_arrives():
    d = build_gk(3, 2)
    x = d.xset[2]
    pol = RobberDelayPolicy(d, start=x)
    pol.place(initial_state(3))
    # Charlie on x_1 is adjacent to every X vertex
    s = in_core_state(d, d.standard_position(), x)
    assert x in neighbors_live(d.graph, BurnSet(), d.x1)
    move = pol.decide(s)
    assert isinstance(move, RobberStep) and move.to in d.yset
    assert edge_index(d.graph, x, move.to) is not None


def test_delay_robber_rejects_start_outside_core():
    d = build_gk(3, 1)
    with pytest.raises(ContractError):
        RobberDelayPolicy(d, start=d.x1)


def test_walk_exhaustion_raises():
    d = build_gk(3, 1)
    pol = RobberDelayPolicy(d)
    pol.place(initial_state(3))
    pol.i = len(pol.walk) - 1
    threatened = in_core_state(d, (d.x2, d.cycles["a"][0], d.cycles["b"][0]), pol.walk[-1])
    with pytest.raises(WalkExhausted):
        pol.decide(threatened)


def test_cascade_places_standard_position():
    d = build_gk(3, 2)
    pol = cop_cascade_policy(d)
    move = pol.place(initial_state(3))
    assert tuple(sorted(move.cops)) == tuple(sorted(d.standard_position()))
    with pytest.raises(ContractError):
        pol.place(initial_state(2))


def test_cascade_classes():
    d = build_gk(3, 2)
    pol = CascadePolicy(d)
    N = 3 * d.n
    assert pol.cls(0, 0) is None and pol.cls(0, N + 1) is None
    assert [pol.cls(0, i) for i in (1, 2, 3)] == [1, 2, 0]
    # q_1 sits at the end of the cycle list and shares p_1's class
    assert pol.cls(0, 2 * N + 1) == 1
    assert [pol.cls(1, i) for i in range(3)] == [1, 2, 0]
    assert [pol.seg_class(1, i) for i in range(N)] == [1, 1, 2, 2, 0, 0]


@pytest.mark.parametrize("k, n", list(CASCADE_GOLDEN))
def test_cascade_golden(k, n):
    rounds, forced, steady = CASCADE_GOLDEN[k, n]
    tr = run_cascade(k, n)
    assert tr.outcome is not None and tr.outcome.kind == "WalkExhausted"
    assert tr.door_coverage_violations == 0 and tr.confinement_violations == 0
    assert (tr.rounds_played, tr.robber_forced_moves) == (rounds, forced)
    assert tr.rounds_played >= tr.robber_forced_moves
    osc = tr.cop_steps_per_oscillation
    if steady is not None:
        assert min(osc) == steady and osc[-1] == steady
    # rounds >= (3n)^2 * (cheapest traversal) / 2, using the forced-move count as the walk length
    if n % 2 == 0:
        assert tr.rounds_played >= (3 * n) ** 2 * min(osc) / 2


def test_round_cap_is_an_outcome():
    tr = run_cascade(3, 2, round_cap=50)
    assert tr.outcome.kind == "RoundCap" and tr.outcome.round == 50
    with pytest.raises(ValueError):
        run_cascade(3, 2, round_cap=0)


def test_trace_lines():
    buf = io.StringIO()
    tr = run_cascade(3, 1, trace_out=buf)
    lines = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert lines[0]["mover"] == "cops" and lines[0]["round"] == 0 and "place_cops" in lines[0]["move"]
    assert lines[1]["mover"] == "robber" and lines[1]["round"] == 0
    assert {"round", "mover", "move", "burn", "unguarded"} <= set(lines[2])
    assert all(x["unguarded"] == [] for x in lines)
    burns = [x["burn"] for x in lines]
    assert burns == sorted(burns) and burns[-1] == tr.robber_forced_moves
    assert max(x["round"] for x in lines) == tr.rounds_played


# Frozen capture rounds for a fleeing robber against cops who keep the doors covered.
GREEDY = [
    (3, 1, "a", "a2", 1),
    (3, 1, "b", "b3", 1),
    (3, 1, "pqx", "q2", 7),
    (3, 2, "pqx", "q2", 29),
    (4, 1, "pqx", "q2", 7),
]


@pytest.mark.parametrize("k, n, cycle, start, rounds", GREEDY)
def test_greedy_cycle_capture(k, n, cycle, start, rounds):
    d = build_gk(k, n)
    tr = simulate(d, greedy_cycle_capture(d, cycle), FleeRobber(d.graph, d.vertex[start]), round_cap=5000)
    assert tr.outcome.kind == "Captured" and tr.outcome.round == rounds
    assert tr.door_coverage_violations == 0


@pytest.mark.parametrize("door", ["d[x]", "d[a,1,1]", "d[b]", "d[Y,2]"])
def test_robber_on_door_is_cornered(door):
    d = build_gk(3, 2)
    tr = simulate(d, greedy_cycle_capture(d, "pqx"), FleeRobber(d.graph, d.vertex[door]), round_cap=100)
    assert tr.outcome.kind == "Captured" and tr.outcome.round <= 1


def test_greedy_rejects_unknown_cycle():
    with pytest.raises(ContractError):
        greedy_cycle_capture(build_gk(3, 1), "zz")
