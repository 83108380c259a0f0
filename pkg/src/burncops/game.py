"""Rules of bridge-burning cops and robbers as a state machine.

Turn order is cop placement, robber placement, then rounds of (all cops
step, robber steps). A robber step along ``uv`` erases ``uv`` for everyone.
Cops are interchangeable, so the cop tuple is always kept sorted.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from typing import Union

from .graph import EMPTY, BurnSet, Graph, edge_index, neighbors_live


class ContractError(RuntimeError):
    """A rule was violated: illegal move, move in a terminal state, etc."""


class Turn(enum.Enum):
    COP_PLACEMENT = "CopPlacement"
    ROBBER_PLACEMENT = "RobberPlacement"
    COPS_TO_MOVE = "CopsToMove"
    ROBBER_TO_MOVE = "RobberToMove"


@dataclass(frozen=True)
class PlaceCops:
    cops: tuple[int, ...]


@dataclass(frozen=True)
class PlaceRobber:
    vertex: int


@dataclass(frozen=True)
class CopStep:
    """Destinations listed in the same order as ``GameState.cops``."""

    dests: tuple[int, ...]


@dataclass(frozen=True)
class RobberStep:
    """``to=None`` is a pass."""

    to: int | None = None


PASS = RobberStep(None)

Move = Union[PlaceCops, PlaceRobber, CopStep, RobberStep]


@dataclass(frozen=True)
class GameState:
    k: int
    cops: tuple[int, ...] = ()
    robber: int | None = None
    burn: BurnSet = EMPTY
    turn: Turn = Turn.COP_PLACEMENT
    round: int = 0

    def __post_init__(self) -> None:
        if list(self.cops) != sorted(self.cops):
            raise ContractError(f"cop tuple {self.cops} is not sorted")
        if self.turn in (Turn.COPS_TO_MOVE, Turn.ROBBER_TO_MOVE) and self.robber is None:
            raise ContractError("robber must be placed before play starts")

    def __str__(self) -> str:
        rob = "-" if self.robber is None else self.robber
        burn = ",".join(map(str, self.burn))
        return f"cops={list(self.cops)} rob={rob} burn={{{burn}}} turn={self.turn.value} round={self.round}"


def initial_state(k: int) -> GameState:
    if k < 0:
        raise ContractError("cop count must be nonnegative")
    return GameState(k=k)


def is_capture(s: GameState) -> bool:
    if s.robber is None:
        raise ContractError("is_capture needs a placed robber")
    return s.robber in s.cops


def is_terminal(s: GameState) -> bool:
    return s.robber is not None and s.robber in s.cops


def capture_round(s: GameState) -> int:
    """Round in which the capture recorded by ``s`` happened.

    Placement captures are round 0. A capture made by the cops happens in
    round ``s.round + 1`` (that round is not yet complete); one made by the
    robber stepping onto a cop completes round ``s.round``.
    """
    if not is_capture(s):
        raise ContractError("state is not a capture")
    if s.turn is Turn.ROBBER_TO_MOVE:
        return s.round + 1
    return s.round


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise ContractError(f"vertex {v} outside 0..{g.vertex_count - 1}")


def legal_moves(g: Graph, s: GameState) -> list[Move]:
    if s.robber is not None and is_terminal(s):
        raise ContractError("no moves in a terminal state")
    n = g.vertex_count
    if s.turn is Turn.COP_PLACEMENT:
        return [PlaceCops(t) for t in itertools.combinations_with_replacement(range(n), s.k)]
    if s.turn is Turn.ROBBER_PLACEMENT:
        return [PlaceRobber(v) for v in range(n)]
    if s.turn is Turn.COPS_TO_MOVE:
        options = [[c, *neighbors_live(g, s.burn, c)] for c in s.cops]
        seen: set[tuple[int, ...]] = set()
        out: list[Move] = []
        for dests in itertools.product(*options):
            key = tuple(sorted(dests))
            if key not in seen:
                seen.add(key)
                out.append(CopStep(tuple(dests)))
        return out
    assert s.robber is not None
    return [PASS, *(RobberStep(v) for v in neighbors_live(g, s.burn, s.robber))]


def is_legal(g: Graph, s: GameState, m: Move) -> bool:
    """Membership test equivalent to ``m in legal_moves(g, s)`` up to cop relabeling."""
    if s.robber is not None and is_terminal(s):
        return False
    n = g.vertex_count
    if s.turn is Turn.COP_PLACEMENT:
        return isinstance(m, PlaceCops) and len(m.cops) == s.k and all(0 <= c < n for c in m.cops)
    if s.turn is Turn.ROBBER_PLACEMENT:
        return isinstance(m, PlaceRobber) and 0 <= m.vertex < n
    if s.turn is Turn.COPS_TO_MOVE:
        if not isinstance(m, CopStep) or len(m.dests) != len(s.cops):
            return False
        if _cop_step_ok(g, s.burn, s.cops, m.dests):
            return True
        # Cops are interchangeable; accept any assignment of destinations.
        return any(
            _cop_step_ok(g, s.burn, s.cops, perm) for perm in set(itertools.permutations(m.dests))
        )
    if not isinstance(m, RobberStep):
        return False
    if m.to is None:
        return True
    assert s.robber is not None
    if not 0 <= m.to < n:
        return False
    e = edge_index(g, s.robber, m.to)
    return e is not None and e not in s.burn


def _cop_step_ok(g: Graph, burn: BurnSet, cops, dests) -> bool:
    for c, d in zip(cops, dests):
        if d == c:
            continue
        if not 0 <= d < g.vertex_count:
            return False
        e = edge_index(g, c, d)
        if e is None or e in burn:
            return False
    return True


def apply(g: Graph, s: GameState, m: Move, *, check: bool = True) -> GameState:
    if check and not is_legal(g, s, m):
        raise ContractError(f"illegal move {m} in state {s}")
    if s.turn is Turn.COP_PLACEMENT:
        assert isinstance(m, PlaceCops)
        return replace(s, cops=tuple(sorted(m.cops)), turn=Turn.ROBBER_PLACEMENT)
    if s.turn is Turn.ROBBER_PLACEMENT:
        assert isinstance(m, PlaceRobber)
        return replace(s, robber=m.vertex, turn=Turn.COPS_TO_MOVE, round=0)
    if s.turn is Turn.COPS_TO_MOVE:
        assert isinstance(m, CopStep)
        return replace(s, cops=tuple(sorted(m.dests)), turn=Turn.ROBBER_TO_MOVE)
    assert isinstance(m, RobberStep) and s.robber is not None
    burn = s.burn
    robber = s.robber
    if m.to is not None and m.to != robber:
        e = edge_index(g, robber, m.to)
        assert e is not None
        burn = burn.add(e)
        robber = m.to
    return replace(s, robber=robber, burn=burn, turn=Turn.COPS_TO_MOVE, round=s.round + 1)
