"""Experiments: upper-bound conformance, exponent growth on G_k, random graphs."""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__, families
from .graph import Graph
from .solver import MAX_EDGES, cop_number
from .strategy import run_cascade

logger = logging.getLogger(__name__)

# log-log slope windows, widened around k + 2 (rounds) and k (per traversal)
ROUNDS_WINDOWS = {3: (4.25, 5.75), 4: (5.0, 7.0)}
OSCILLATION_WINDOWS = {3: (2.5, 3.5)}


@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict
    rows: list[dict] = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(r.get("pass", True) for r in self.rows) and self.aggregate.get("pass", True)

    def to_json(self) -> str:
        doc = {
            "experiment": self.experiment,
            "version": self.version,
            "seed": self.seed,
            "parameters": self.parameters,
            "rows": self.rows,
            "aggregate": self.aggregate,
            "pass": self.passed,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"# {self.experiment}  seed={self.seed}  version={self.version}"]
        if self.rows:
            cols = list(self.rows[0])
            cells = [[_fmt(r.get(c)) for c in cols] for r in self.rows]
            width = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            lines.append("  ".join(c.ljust(w) for c, w in zip(cols, width)))
            lines.extend("  ".join(v.ljust(w) for v, w in zip(row, width)) for row in cells)
        for key, val in self.aggregate.items():
            lines.append(f"{key}: {_fmt(val)}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _pool_map(fn: Callable, items: Sequence, jobs: int) -> list:
    # results come back in submission order, so reports do not depend on jobs
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# -- bounds ---------------------------------------------------------------------


def upper_bound(n: int, cb: int) -> float:
    return (2 * n) ** (cb + 2) / math.factorial(cb)


def within_upper_bound(capt: int, n: int, cb: int) -> bool:
    """Exact integer form of capt <= (2n)^(cb+2) / cb!."""
    return capt * math.factorial(cb) <= (2 * n) ** (cb + 2)


def lower_reference(n: int, k: int) -> float:
    """n^(k+2) / k^(k+2) with constant 1; context only, never asserted."""
    return n ** (k + 2) / k ** (k + 2)


def bounds_instances(n_max: int, seed: int, samples: int = 100, p: float = 0.5) -> list[tuple[str, str, Graph]]:
    out: list[tuple[str, str, Graph]] = []
    for n in range(1, n_max + 1):
        out.append(("path", f"P{n}", families.path(n)))
    for n in range(3, n_max + 1):
        out.append(("cycle", f"C{n}", families.cycle(n)))
    for m in range(1, n_max):
        for n in range(m, n_max - m + 1):
            out.append(("complete_bipartite", f"K{m},{n}", families.complete_bipartite(m, n)))
    for d in (2, 3):
        if 1 << d <= n_max:
            out.append(("hypercube", f"Q{d}", families.hypercube(d)))
    for m in range(2, n_max + 1):
        for n in range(m, n_max // m + 1):
            out.append(("grid", f"G{m}x{n}", families.grid(m, n)))
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, n_max + 1, samples)
    seeds = rng.integers(0, 2**62, samples)
    for i, (n, s) in enumerate(zip(sizes, seeds)):
        out.append(("gnp", f"gnp{i}(n={n},p={p})", families.random_gnp(int(n), p, int(s))))
    return out


def _bounds_row(item: tuple[str, str, Graph]) -> dict:
    family, name, g = item
    n = g.vertex_count
    cb, results = cop_number(g, n)
    assert cb is not None  # n cops always win
    capt = results[-1].capture_time
    return {
        "family": family,
        "instance": name,
        "n": n,
        "edges": g.edge_count,
        "c_b": cb,
        "capt_b": capt,
        "upper_bound": upper_bound(n, cb),
        "lower_reference": lower_reference(n, cb),
        "pass": within_upper_bound(capt, n, cb),
    }


def cmd_experiment_bounds(n_max: int, seed: int, samples: int = 100, jobs: int = 1) -> ExperimentReport:
    items = bounds_instances(n_max, seed, samples)
    rows = _pool_map(_bounds_row, items, jobs)
    violations = sum(not r["pass"] for r in rows)
    return ExperimentReport(
        "bounds",
        {"n_max": n_max, "random_samples": samples, "random_p": 0.5},
        rows,
        {"instances": len(rows), "violations": violations, "pass": violations == 0},
        seed=seed,
    )


# -- exponent -------------------------------------------------------------------


def loglog_slope(xs: Iterable[float], ys: Iterable[float]) -> float | None:
    x = np.log(np.asarray(list(xs), float))
    y = np.log(np.asarray(list(ys), float))
    if x.size < 2:
        return None
    return float(np.polyfit(x, y, 1)[0])


def cmd_experiment_exponent(k: int, n_list: Sequence[int], jobs: int = 1) -> ExperimentReport:
    traces = _pool_map(lambda n: run_cascade(k, n), list(n_list), jobs)
    rows = []
    for n, tr in zip(n_list, traces):
        osc = tr.cop_steps_per_oscillation
        ok = (
            tr.outcome is not None
            and tr.outcome.kind == "WalkExhausted"
            and tr.door_coverage_violations == 0
            and tr.confinement_violations == 0
        )
        rows.append(
            {
                "k": k,
                "n": n,
                "rounds": tr.rounds_played,
                "forced_moves": tr.robber_forced_moves,
                "oscillations": len(osc),
                "mean_cop_turns_per_traversal": float(np.mean(osc)) if osc else 0.0,
                "outcome": tr.outcome.kind if tr.outcome else None,
                "door_violations": tr.door_coverage_violations,
                "pass": ok,
            }
        )
    agg: dict = {}
    rs = loglog_slope(n_list, [r["rounds"] for r in rows])
    os_ = loglog_slope(n_list, [r["mean_cop_turns_per_traversal"] for r in rows])
    agg["rounds_slope"] = rs
    agg["traversal_slope"] = os_
    ok = True
    if rs is not None and k in ROUNDS_WINDOWS:
        lo, hi = ROUNDS_WINDOWS[k]
        agg["rounds_window"] = [lo, hi]
        ok &= lo <= rs <= hi
    if os_ is not None and k in OSCILLATION_WINDOWS:
        lo, hi = OSCILLATION_WINDOWS[k]
        agg["traversal_window"] = [lo, hi]
        ok &= lo <= os_ <= hi
    if rs is not None:
        # rounds ~ C (3n)^(k+2); report the fitted constant at the largest n
        n_top = n_list[-1]
        agg["constant_at_largest_n"] = rows[-1]["rounds"] / (3 * n_top) ** (k + 2)
    agg["pass"] = bool(ok)
    return ExperimentReport("exponent", {"k": k, "n_list": list(n_list)}, rows, agg)


# -- random graphs ----------------------------------------------------------------


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


def cmd_experiment_random(n: int, p: float, samples: int, seed: int, jobs: int = 1) -> ExperimentReport:
    seeds = np.random.default_rng(seed).integers(0, 2**62, samples)
    graphs = [families.random_gnp(n, p, int(s)) for s in seeds]

    def one(i: int) -> dict:
        g = graphs[i]
        row = {"sample": i, "graph_seed": int(seeds[i]), "edges": g.edge_count, "c_b": None, "skipped": False}
        if g.edge_count > MAX_EDGES:
            row["skipped"] = True
            return row
        cb, _ = cop_number(g, max(n, 1))
        row["c_b"] = cb
        return row

    rows = _pool_map(one, list(range(samples)), jobs)
    solved = [r for r in rows if not r["skipped"]]
    ones = sum(r["c_b"] == 1 for r in solved)
    lo, hi = wilson_interval(ones, len(solved))
    agg = {
        "solved": len(solved),
        "skipped": samples - len(solved),
        "fraction_cb_1": ones / len(solved) if solved else None,
        "ci95": [lo, hi],
    }
    return ExperimentReport("random", {"n": n, "p": p, "samples": samples}, rows, agg, seed=seed)
