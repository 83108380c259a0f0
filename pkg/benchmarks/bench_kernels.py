"""Time the exact solver with numba kernels against the plain-Python fallback.

Each backend runs in its own interpreter because the switch is read at import
time. Usage::

    python benchmarks/bench_kernels.py [--repeats 3] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys
import time

CASES = [
    # (label, family, args, cops, method)
    ("P6 k=2", "path", (6,), 2, "retro"),
    ("C6 k=2", "cycle", (6,), 2, "retro"),
    ("C6 k=2", "cycle", (6,), 2, "vi"),
    ("K3,3 k=1", "complete_bipartite", (3, 3), 1, "retro"),
    ("K3,3 k=1", "complete_bipartite", (3, 3), 1, "vi"),
    ("Q3 k=1", "hypercube", (3,), 1, "retro"),
    ("K3,4 k=2", "complete_bipartite", (3, 4), 2, "retro"),
]


def worker(repeats: int) -> None:
    from burncops import families, solver
    from burncops._accel import backend_name

    # first call pays for compilation or cache loading; keep it out of the timings
    solver.solve_k(families.path(3), 1, "retro")
    solver.solve_k(families.path(3), 1, "vi")
    rows = []
    for label, fam, fargs, k, method in CASES:
        g = getattr(families, fam)(*fargs)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            res = solver.solve_k(g, k, method)
            times.append(time.perf_counter() - t0)
        rows.append(
            {
                "case": label,
                "method": method,
                "seconds": statistics.median(times),
                "capture_time": res.capture_time,
                "cops_win": res.cops_win,
            }
        )
    print(json.dumps({"backend": backend_name(), "rows": rows}))


def run_backend(disable: bool, repeats: int) -> dict:
    env = dict(os.environ)
    env["BURNCOPS_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run(
        [sys.executable, __file__, "--worker", "--repeats", str(repeats)],
        env=env,
        check=True,
        capture_output=True,
        text=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--json", help="write the raw comparison here")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.repeats)
        return 0

    fast = run_backend(False, args.repeats)
    slow = run_backend(True, args.repeats)
    mismatch = 0
    print(f"{'case':<12} {'method':<6} {'numba s':>10} {'python s':>10} {'speedup':>8}")
    for a, b in zip(fast["rows"], slow["rows"]):
        same = (a["cops_win"], a["capture_time"]) == (b["cops_win"], b["capture_time"])
        mismatch += not same
        speed = b["seconds"] / a["seconds"] if a["seconds"] > 0 else float("inf")
        flag = "" if same else "  RESULTS DIFFER"
        print(f"{a['case']:<12} {a['method']:<6} {a['seconds']:>10.4f} {b['seconds']:>10.4f} {speed:>7.1f}x{flag}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba": fast, "python": slow}, fh, indent=2)
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
