"""Exact values of the bridge-burning game for k cops.

Two independent algorithms compute the same table of capture times:

``retro``
    layered retrograde analysis over burn sets, largest first;
``vi``
    plain value iteration over every position until a fixed point.

Both fold the placement phase into a final min-over-cop-tuples,
max-over-robber-starts step.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass
from math import comb
from typing import Literal

import numpy as np

from . import kernels
from .graph import Graph

logger = logging.getLogger(__name__)

Method = Literal["retro", "vi"]
METHOD_NAMES = {"retro": "LayeredRetrograde", "vi": "ValueIteration"}

MAX_EDGES = 64
MAX_TABLE_CELLS = 150_000_000
MAX_VI_CODES = 1 << 24


class CapacityError(ValueError):
    """The instance is beyond what the exact solver accepts."""


@dataclass(frozen=True)
class SolveResult:
    cops_win: bool
    capture_time: int | None
    optimal_cop_start: tuple[int, ...]
    robber_best_start: int | None
    states_explored: int
    method: str
    k: int

    def to_json(self) -> dict:
        d = asdict(self)
        d["optimal_cop_start"] = list(self.optimal_cop_start)
        return d


@dataclass
class ValueTable:
    """Cops-to-move capture times for every solved (burn mask, robber) pair."""

    masks: np.ndarray  # int64 view of the burn bitmask
    robbers: np.ndarray
    values: np.ndarray  # (pairs, tuples) int32, kernels.INF for robber wins
    tuples: np.ndarray

    def lookup(self) -> dict[tuple[int, int], int]:
        return {(int(m), int(r)): i for i, (m, r) in enumerate(zip(self.masks, self.robbers))}


# -- shared preprocessing ---------------------------------------------------


def _adjacency_arrays(g: Graph):
    n = g.vertex_count
    ptr = np.zeros(n + 1, np.int64)
    nbr, eid = [], []
    for v in range(n):
        for u, e in g.adjacency[v]:
            nbr.append(u)
            eid.append(e)
        ptr[v + 1] = len(nbr)
    maxdeg = max((g.degree(v) for v in range(n)), default=0)
    bits = np.array([1 << e for e in range(max(g.edge_count, 1))], dtype=np.uint64).view(np.int64)
    return ptr, np.array(nbr, np.int64), np.array(eid, np.int64), bits, maxdeg


def cop_tuples(n: int, k: int) -> np.ndarray:
    """All sorted k-tuples over ``range(n)`` in lexicographic order."""
    rows = list(itertools.combinations_with_replacement(range(n), k))
    return np.array(rows, dtype=np.int64).reshape(len(rows), k)


def rank_prefix(n: int, k: int) -> np.ndarray:
    """``prefix[rem, v]`` counts sorted ``rem``-tails starting below ``v``."""
    prefix = np.zeros((max(k, 1), n + 1), np.int64)
    for rem in range(k):
        acc = 0
        for v in range(n + 1):
            prefix[rem, v] = acc
            if v < n:
                acc += comb(n - v + rem - 1, rem)
    return prefix


def _check_capacity(g: Graph, k: int) -> None:
    if g.vertex_count < 1:
        raise CapacityError("graph must have at least one vertex")
    if k < 1:
        raise ValueError("need at least one cop")
    if g.edge_count > MAX_EDGES:
        raise CapacityError(f"graph has {g.edge_count} edges; the exact solver handles at most {MAX_EDGES}")


def _retro_pairs(g: Graph):
    """(mask, robber, active) for every pair a play can reach, vectorized by layer.

    A pair is *active* when some vertex is outside the robber's closed live
    neighbourhood: only then can a cops-to-move position avoid immediate
    capture, so only active pairs ever see a robber step.
    """
    n = g.vertex_count
    adj_ptr, adj_nbr, adj_eid, bits, maxdeg = _adjacency_arrays(g)
    width = max(maxdeg, 1)
    nbr_pad = np.full((n, width), -1, np.int64)
    bit_pad = np.zeros((n, width), np.int64)
    for v in range(n):
        d = adj_ptr[v + 1] - adj_ptr[v]
        nbr_pad[v, :d] = adj_nbr[adj_ptr[v]:adj_ptr[v + 1]]
        bit_pad[v, :d] = bits[adj_eid[adj_ptr[v]:adj_ptr[v + 1]]]
    layers_m, layers_r, layers_a = [], [], []
    masks = np.zeros(n, np.int64)
    robs = np.arange(n, dtype=np.int64)
    while masks.size:
        live = (nbr_pad[robs] >= 0) & ((masks[:, None] & bit_pad[robs]) == 0)
        active = live.sum(axis=1) < n - 1
        layers_m.append(masks)
        layers_r.append(robs)
        layers_a.append(active)
        step = live & active[:, None]
        rows, cols = np.nonzero(step)
        if rows.size == 0:
            break
        nm = masks[rows] | bit_pad[robs[rows], cols]
        nr = nbr_pad[robs[rows], cols]
        uniq = np.unique(np.stack([nm, nr], axis=1), axis=0)
        masks, robs = uniq[:, 0].copy(), uniq[:, 1].copy()
    return layers_m, layers_r, layers_a


def _vi_pairs(g: Graph) -> list[tuple[int, int]]:
    """Every (burned edge set, endpoint) of a robber trail, by plain BFS."""
    frontier = {(0, r) for r in range(g.vertex_count)}
    seen = set(frontier)
    while frontier:
        nxt = set()
        for mask, r in frontier:
            for u, e in g.adjacency[r]:
                if not mask >> e & 1:
                    item = (mask | (1 << e), u)
                    if item not in seen:
                        seen.add(item)
                        nxt.add(item)
        frontier = nxt
    return sorted(seen, key=lambda mr: (_signed(mr[0]), mr[1]))


def _signed(mask: int) -> int:
    return mask - (1 << 64) if mask >= 1 << 63 else mask


# -- the two methods ----------------------------------------------------------


def value_table(g: Graph, k: int, method: Method = "retro") -> ValueTable:
    _check_capacity(g, k)
    n = g.vertex_count
    tuples = cop_tuples(n, k)
    adj_ptr, adj_nbr, adj_eid, bits, maxdeg = _adjacency_arrays(g)
    if method == "retro":
        lm, lr, la = _retro_pairs(g)
        # deepest layer first
        order_m = np.concatenate(lm[::-1])
        order_r = np.concatenate(lr[::-1])
        active = np.concatenate(la[::-1])
        cells = order_m.size * tuples.shape[0]
        if cells > MAX_TABLE_CELLS:
            raise CapacityError(f"state table needs {cells} cells (limit {MAX_TABLE_CELLS})")
        key = np.lexsort((order_r, order_m))
        logger.debug("retro: %d pairs x %d placements", order_m.size, tuples.shape[0])
        D = kernels.retro_solve(
            adj_ptr, adj_nbr, adj_eid, bits, maxdeg,
            tuples, rank_prefix(n, k),
            order_m, order_r, active,
            order_m[key], order_r[key], key.astype(np.int64),
        )
        return ValueTable(order_m, order_r, D, tuples)
    if method == "vi":
        if n**k > MAX_VI_CODES:
            raise CapacityError(f"value iteration code table needs {n}^{k} entries")
        pairs = _vi_pairs(g)
        masks = np.array([m for m, _ in pairs], dtype=np.uint64).view(np.int64)
        robs = np.array([r for _, r in pairs], dtype=np.int64)
        cells = masks.size * tuples.shape[0]
        if 2 * cells > MAX_TABLE_CELLS:
            raise CapacityError(f"state table needs {2 * cells} cells (limit {MAX_TABLE_CELLS})")
        powers = n ** np.arange(k, dtype=np.int64)
        code_to_idx = np.full(n**k, -1, np.int64)
        code_to_idx[tuples @ powers] = np.arange(tuples.shape[0])
        Dc, sweeps = kernels.vi_solve(
            adj_ptr, adj_nbr, adj_eid, bits, maxdeg, tuples, powers, code_to_idx,
            masks, robs, 100_000,
        )
        if sweeps < 0:
            raise RuntimeError("value iteration did not converge")
        logger.debug("vi: %d pairs, %d sweeps", masks.size, sweeps)
        return ValueTable(masks, robs, Dc, tuples)
    raise ValueError(f"unknown method {method!r}")


def placement_values(table: ValueTable, n: int) -> np.ndarray:
    """``out[t, r]``: rounds to capture after cops place at tuple t and the robber at r."""
    start = np.flatnonzero(table.masks == 0)
    out = np.zeros((table.tuples.shape[0], n), np.int64)
    for i in start:
        out[:, table.robbers[i]] = table.values[i]
    return out


def solve_k(g: Graph, k: int, method: Method = "retro") -> SolveResult:
    """Optimal play for k cops: cops minimize capture round, robber maximizes."""
    table = value_table(g, k, method)
    n = g.vertex_count
    pv = placement_values(table, n)
    worst = pv.max(axis=1)  # robber picks the start that hurts most
    t_best = int(np.argmin(worst))  # first index = lexicographically smallest tuple
    value = int(worst[t_best])
    cops_win = bool(value < kernels.INF)
    robber = int(np.argmax(pv[t_best])) if cops_win else None
    return SolveResult(
        cops_win=cops_win,
        capture_time=value if cops_win else None,
        optimal_cop_start=tuple(int(c) for c in table.tuples[t_best]),
        robber_best_start=robber,
        states_explored=2 * table.values.size,
        method=METHOD_NAMES[method],
        k=k,
    )


def cop_number(g: Graph, k_max: int, method: Method = "retro") -> tuple[int | None, list[SolveResult]]:
    """Smallest k <= k_max whose cops win, or None when none does."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    results = []
    for k in range(1, k_max + 1):
        res = solve_k(g, k, method)
        results.append(res)
        if res.cops_win:
            return k, results
    return None, results


def capture_time(g: Graph, method: Method = "retro") -> tuple[int, int]:
    """(c_b, capt_b). One cop per vertex always wins, so the search terminates."""
    cb, results = cop_number(g, max(g.vertex_count, 1), method)
    assert cb is not None and results[-1].capture_time is not None
    return cb, results[-1].capture_time


def compare_tables(a: ValueTable, b: ValueTable) -> list[tuple[int, int, int, int, int]]:
    """Mismatches ``(mask, robber, tuple, a_value, b_value)`` on pairs both tables hold."""
    bl = b.lookup()
    bad = []
    for i, (m, r) in enumerate(zip(a.masks, a.robbers)):
        j = bl.get((int(m), int(r)))
        if j is None:
            continue
        diff = np.flatnonzero(a.values[i] != b.values[j])
        for t in diff:
            bad.append((int(m), int(r), int(t), int(a.values[i, t]), int(b.values[j, t])))
    return bad
