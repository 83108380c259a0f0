"""Bridge-burning cops and robbers: exact solver, G_k construction and simulator."""

from __future__ import annotations

__version__ = "0.1.0"

from .game import GameState, Turn, apply, initial_state, is_capture, legal_moves  # noqa: E402
from .graph import BurnSet, Graph, GraphError, parse_graph, render_graph  # noqa: E402
from .solver import CapacityError, SolveResult, capture_time, cop_number, solve_k  # noqa: E402

__all__ = [
    "BurnSet",
    "CapacityError",
    "GameState",
    "Graph",
    "GraphError",
    "SolveResult",
    "Turn",
    "__version__",
    "apply",
    "capture_time",
    "cop_number",
    "initial_state",
    "is_capture",
    "legal_moves",
    "parse_graph",
    "render_graph",
    "solve_k",
]
