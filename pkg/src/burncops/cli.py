"""``burncops`` command line: solve, generate, simulate, experiment, info.

Exit codes: 0 when everything checked passes, 1 when a check fails (solver
disagreement, bound violation, simulation breach), 2 for bad input or an
instance beyond solver capacity.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, families, harness
from ._accel import backend_name
from .graph import GraphError, parse_graph, render_dot, render_graph
from .solver import MAX_EDGES, METHOD_NAMES, CapacityError, solve_k

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("burncops")


def _error(msg: str) -> int:
    print(f"burncops: error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        g = parse_graph(Path(args.graph).read_text())
    except OSError as exc:
        return _error(f"cannot read {args.graph}: {exc.strerror}")
    except GraphError as exc:
        return _error(f"{args.graph}: {exc}")
    if args.cops < 1:
        return _error("--cops must be at least 1")
    methods = ["retro", "vi"] if args.method == "both" else [args.method]
    try:
        results = [solve_k(g, args.cops, m) for m in methods]
    except CapacityError as exc:
        return _error(str(exc))
    if len(results) == 1:
        print(json.dumps(results[0].to_json(), indent=2))
        return EXIT_OK
    a, b = results
    agree = (a.cops_win, a.capture_time) == (b.cops_win, b.capture_time)
    print(json.dumps({"agree": agree, "results": [r.to_json() for r in results]}, indent=2))
    return EXIT_OK if agree else EXIT_FAIL


_FAMILIES = {
    "path": (families.path, ("n",)),
    "cycle": (families.cycle, ("n",)),
    "complete": (families.complete, ("n",)),
    "kmn": (families.complete_bipartite, ("m", "n")),
    "hypercube": (families.hypercube, ("d",)),
    "grid": (families.grid, ("m", "n")),
    "empty": (families.empty, ("n",)),
}


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        if args.family == "gk":
            g = families.build_gk(_need(args, "k"), _need(args, "n")).graph
        elif args.family == "gnp":
            g = families.random_gnp(_need(args, "n"), _need(args, "p"), _need(args, "seed"))
        else:
            fn, params = _FAMILIES[args.family]
            g = fn(*(_need(args, p) for p in params))
    except (GraphError, ValueError) as exc:
        return _error(str(exc))
    text = render_graph(g)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.dot:
        Path(args.dot).write_text(render_dot(g))
    return EXIT_OK


def _need(args: argparse.Namespace, name: str):
    val = getattr(args, name)
    if val is None:
        raise ValueError(f"--{name} is required for family {args.family}")
    return val


def cmd_simulate(args: argparse.Namespace) -> int:
    from .strategy import run_cascade

    try:
        if args.trace:
            with open(args.trace, "w") as fh:
                tr = run_cascade(args.k, args.n, args.round_cap, fh)
        else:
            tr = run_cascade(args.k, args.n, args.round_cap)
    except (GraphError, ValueError) as exc:
        return _error(str(exc))
    print(json.dumps(tr.to_json(), indent=2))
    ok = tr.outcome is not None and tr.outcome.kind in ("WalkExhausted", "Captured") and tr.door_coverage_violations == 0
    return EXIT_OK if ok else EXIT_FAIL


def cmd_experiment(args: argparse.Namespace) -> int:
    if args.which == "bounds":
        if args.n_max < 1:
            return _error("--n-max must be positive")
        report = harness.cmd_experiment_bounds(args.n_max, args.seed, args.samples, args.jobs)
    elif args.which == "exponent":
        report = harness.cmd_experiment_exponent(args.k, args.n, args.jobs)
    else:
        if not 0.0 <= args.p <= 1.0:
            return _error("--p must lie in [0, 1]")
        report = harness.cmd_experiment_random(args.n, args.p, args.samples, args.seed, args.jobs)
    text = report.to_json() + "\n" if args.format == "json" else report.to_text()
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_info(args: argparse.Namespace) -> int:
    info = {
        "version": __version__,
        "backend": backend_name(),
        "max_solver_edges": MAX_EDGES,
        "methods": METHOD_NAMES,
    }
    print(json.dumps(info, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="burncops", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="exact capture time for k cops")
    s.add_argument("--graph", required=True, help="graph JSON file")
    s.add_argument("--cops", type=int, required=True)
    s.add_argument("--method", choices=["retro", "vi", "both"], default="retro")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("generate", help="write a graph from a named family")
    s.add_argument("--family", required=True, choices=["gk", "gnp", *_FAMILIES])
    s.add_argument("--k", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--p", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help="output JSON file (default: stdout)")
    s.add_argument("--dot", help="also write Graphviz DOT here")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("simulate", help="cascade cops against the delay walk on G_k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--round-cap", type=int)
    s.add_argument("--trace", help="write a JSON-lines move trace here")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("experiment", help="run a reproducible experiment")
    exp = s.add_subparsers(dest="which", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="also write the report here")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")

    e = exp.add_parser("bounds", parents=[common], help="upper-bound conformance on small graphs")
    e.add_argument("--n-max", type=int, default=8)
    e.add_argument("--samples", type=int, default=100, help="random graphs to add")
    e.add_argument("--seed", type=int, required=True)
    e = exp.add_parser("exponent", parents=[common], help="log-log growth of simulated rounds on G_k")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=int, nargs="+", required=True)
    e = exp.add_parser("random", parents=[common], help="fraction of G(n, p) with one cop enough")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--p", type=float, required=True)
    e.add_argument("--samples", type=int, required=True)
    e.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("info", help="version and backend")
    s.set_defaults(func=cmd_info)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
