from __future__ import annotations

import json
import os
import subprocess
import sys

from burncops import families, solver

SCRIPT = """
import json
from burncops import families, solver
from burncops._accel import backend_name
out = {"backend": backend_name(), "results": []}
for g, k in [(families.cycle(5), 1), (families.path(6), 2), (families.complete_bipartite(2, 3), 1)]:
    for m in ("retro", "vi"):
        r = solver.solve_k(g, k, m)
        out["results"].append([r.cops_win, r.capture_time, list(r.optimal_cop_start)])
print(json.dumps(out))
"""


def run(disable: bool) -> dict:
    env = dict(os.environ, BURNCOPS_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def test_fallback_matches_numba():
    fast, slow = run(False), run(True)
    assert fast["backend"] == "numba"
    assert slow["backend"] == "python"
    assert fast["results"] == slow["results"]


def test_fallback_tables_identical():
    # same graph, full table, both interpreters
    script = (
        "import json\n"
        "from burncops import families, solver\n"
        "t = solver.value_table(families.cycle(4), 2, 'retro')\n"
        "print(json.dumps(t.values.tolist()))\n"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, BURNCOPS_DISABLE_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
        outs.append(json.loads(proc.stdout))
    assert outs[0] == outs[1]
    here = solver.value_table(families.cycle(4), 2, "retro").values.tolist()
    assert here == outs[0]
