"""Command line interface: solve, oracle, verify, gen, bench, compress.

Exit codes: 0 ok, 1 infeasible COP or invalid walk, 2 input error,
3 resource guard tripped, 4 internal mismatch.  Errors are reported on
stderr as ``{"error": {"kind": ..., "detail": ...}}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InstanceError, ResourceLimitError
from .model import (Solution, instance_to_json, parse_instance, parse_walk, validate_walk,
                    walk_to_json)

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_RESOURCE, EXIT_MISMATCH = 0, 1, 2, 3, 4

log = logging.getLogger("orienteer")


class Infeasible(Exception):
    pass


def _setup_logging():
    level = os.environ.get("ORIENTEER_LOG", "off").lower()
    levels = {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(levels.get(level, levels["off"]))


def _epsilon(text):
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return eps


# ---------------------------------------------------------------- algorithms


def _cop(inst, args):
    from .cycle import solve_cop_1tw_cycle
    walk = solve_cop_1tw_cycle(inst)
    if walk is None:
        raise Infeasible("no walk collects every vertex")
    return Solution(validate_walk(inst, walk).profit, walk, "cop-cycle", {"feasible": True})


def _need(value, name):
    if value is None:
        raise InstanceError(f"--{name} is required for this algorithm", name)
    return value


def _cap(args, default):
    return default if args.cap is None else args.cap


def _algorithms():
    from . import cycle, cycle_rounds, dynamic, path, tree, treewidth

    def tw_dec(inst, args):
        return treewidth.build_nice_decomposition(inst, cap=args.width_cap)

    return {
        "path-mtw": lambda i, a: path.solve_directed_path_mtw(i),
        "cop-cycle": _cop,
        "cycle-short": lambda i, a: cycle.solve_op_1tw_cycle_short(i),
        "cycle-fpt": lambda i, a: cycle.solve_op_1tw_cycle_fpt(i, cap=_cap(a, cycle.FPT_CAP)),
        "cycle-2approx": lambda i, a: cycle.approx2_op_1tw_cycle(i),
        "cycle-kround": lambda i, a: cycle_rounds.solve_k_rounds(
            i, _need(a.k, "k"), cap=_cap(a, cycle_rounds.ROUNDS_CAP)),
        "cycle-workout": lambda i, a: cycle_rounds.solve_k_workout(
            i, _need(a.k, "k"), cap=_cap(a, cycle_rounds.WORKOUT_CAP)),
        "cycle-ptas": lambda i, a: cycle_rounds.ptas_op_1tw_cycle(
            i, _need(a.epsilon, "epsilon"), cap=_cap(a, cycle_rounds.WORKOUT_CAP)),
        "dyn-path": lambda i, a: dynamic.solve_dyn_undirected_path(i),
        "dyn-chain": lambda i, a: dynamic.solve_dyn_directed_chain(i),
        "tree-dp": lambda i, a: tree.solve_tree(i),
        "tw-dp": lambda i, a: treewidth.solve_tw(i, tw_dec(i, a)),
        "tw-approx": lambda i, a: treewidth.approx_tw(i, tw_dec(i, a), _need(a.epsilon, "epsilon")),
    }


ALGORITHMS = ("path-mtw", "cop-cycle", "cycle-short", "cycle-fpt", "cycle-2approx", "cycle-kround",
              "cycle-workout", "cycle-ptas", "dyn-path", "dyn-chain", "tree-dp", "tw-dp", "tw-approx")


def _run_guarded(fn):
    """Run ``fn``; returns ``(exit_code, payload, error)``."""
    try:
        return EXIT_OK, fn(), None
    except Infeasible:
        return EXIT_INFEASIBLE, {"feasible": False}, None
    except ResourceLimitError as exc:
        return EXIT_RESOURCE, None, ("resource", str(exc))
    except (InstanceError, OSError, ImportError, json.JSONDecodeError) as exc:
        return EXIT_INPUT, None, ("input", str(exc))
    except AssertionError as exc:
        return EXIT_MISMATCH, None, ("mismatch", str(exc))


def _solve_file(path, args):
    def work():
        inst = parse_instance(Path(path).read_text())
        log.info("solving %s with %s (n=%d)", path, args.algorithm, inst.n)
        sol = _algorithms()[args.algorithm](inst, args)
        if sol.walk is not None:
            rep = validate_walk(inst, sol.walk)
            if not rep.valid or rep.profit != sol.profit:
                raise AssertionError(f"emitted profit {sol.profit} disagrees with walk: {rep}")
        return sol.to_json()
    return _run_guarded(work)


def _solve_entry(item):
    path, args = item
    return str(path), _solve_file(path, args)


def cmd_solve(args):
    if args.input_dir:
        files = sorted(Path(args.input_dir).glob("*.json"))
        items = [(f, args) for f in files]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_solve_entry, items))
        else:
            results = [_solve_entry(it) for it in items]
        worst = EXIT_OK
        lines = []
        for name, (code, payload, err) in results:
            row = {"file": name, "exit": code}
            if payload is not None:
                row["solution"] = payload
            if err is not None:
                row["error"] = {"kind": err[0], "detail": err[1]}
            lines.append(json.dumps(row))
            worst = max(worst, code)
        _emit("\n".join(lines), args.out)
        return worst
    code, payload, err = _solve_file(args.input, args)
    return _finish(code, payload, err, args.out)


def cmd_oracle(args):
    from .oracle import oracle_cop, oracle_op

    def work():
        inst = parse_instance(Path(args.input).read_text())
        caps = {"max_n": args.max_n, "event_cap": args.event_cap, "state_cap": args.state_cap}
        if args.cop:
            walk = oracle_cop(inst, **caps)
            if walk is None:
                raise Infeasible()
            return {"feasible": True, "walk": walk_to_json(walk)}
        return oracle_op(inst, max_rounds=args.max_rounds, **caps).to_json()
    return _finish(*_run_guarded(work), args.out)


def cmd_verify(args):
    def work():
        inst = parse_instance(Path(args.input).read_text())
        walk = parse_walk(Path(args.walk).read_text())
        return validate_walk(inst, walk).to_json()
    code, payload, err = _run_guarded(work)
    if code == EXIT_OK and not payload["valid"]:
        code = EXIT_INFEASIBLE
    return _finish(code, payload, err, args.out)


def _int_list(text, name):
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InstanceError(f"expected integers, got {text!r}", name) from None


def cmd_gen(args):
    from . import generators as g

    def work():
        witness = None
        if args.kind == "random":
            params = {"topology": args.topology, "n": args.n,
                      "windows_per_vertex": args.windows_per_vertex,
                      "window_span": args.window_span, "budget_factor": args.budget_factor,
                      "dynamic": args.dynamic,
                      "cost_range": _int_list(args.cost_range, "cost_range"),
                      "profit_range": _int_list(args.profit_range, "profit_range")}
            inst = g.gen_random(params, args.seed)
        elif args.kind == "linetsp":
            if args.jobs_file:
                jobs = json.loads(Path(args.jobs_file).read_text())
            else:
                import random
                rng = random.Random(args.seed)
                jobs = []
                for _ in range(args.n):
                    r = rng.randint(0, 10)
                    jobs.append((rng.randint(0, 5), r, r + rng.randint(0, 10)))
            inst = g.from_line_tsp(jobs)
        elif args.kind == "3sat":
            if args.cnf:
                formula = g.parse_dimacs(Path(args.cnf).read_text())
            else:
                formula = g.random_3cnf(args.vars, args.clauses, args.seed)
            inst, build = g.from_3sat(formula)
            assignment = formula.solve() if args.witness else None
            if assignment is not None:
                witness = build(assignment)
        elif args.kind == "3partition":
            items = _int_list(_need(args.items, "items"), "items")
            inst, build = g.from_3partition(items)
            triplets = g.find_3partition(items) if args.witness else None
            if triplets is not None:
                witness = build(triplets)
        else:
            pairs = json.loads(_need(args.items, "items"))
            inst = g.from_knapsack([tuple(p) for p in pairs], _need(args.capacity, "capacity"))
        if args.witness:
            doc = walk_to_json(witness) if witness is not None else {"visits": None}
            Path(args.witness).write_text(json.dumps(doc) + "\n")
        return instance_to_json(inst)
    return _finish(*_run_guarded(work), args.out)


def cmd_bench(args):
    from .bench import run_suite, to_csv

    def work():
        sizes = _int_list(args.sizes, "sizes") if args.sizes else None
        return run_suite(args.suite, sizes, args.seed, args.repetitions, args.impl, args.stat)
    code, rows, err = _run_guarded(work)
    if code != EXIT_OK:
        return _finish(code, None, err, None)
    _emit(to_csv(rows, args.stat).rstrip("\n"), args.out)
    return EXIT_OK


def cmd_compress(args):
    from .cycle import compress_deadlines

    def work():
        inst = parse_instance(Path(args.input).read_text())
        out, tm = compress_deadlines(inst)
        return {"instance": instance_to_json(out),
                "time_map": {"original": list(tm.original), "compressed": list(tm.compressed)}}
    return _finish(*_run_guarded(work), args.out)


# ---------------------------------------------------------------- plumbing


def _emit(text, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _finish(code, payload, err, out):
    if err is not None:
        kind, detail = err
        print(json.dumps({"error": {"kind": kind, "detail": detail}}), file=sys.stderr)
    if payload is not None:
        _emit(json.dumps(payload), out)
    return code


def build_parser():
    ap = argparse.ArgumentParser(prog="orienteer", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run a solver on an instance")
    s.add_argument("--algorithm", "-a", required=True, choices=ALGORITHMS)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", "-i")
    src.add_argument("--input-dir")
    s.add_argument("--k", type=int)
    s.add_argument("--epsilon", type=_epsilon)
    s.add_argument("--cap", type=int, help="override the solver's resource cap")
    s.add_argument("--width-cap", type=int, default=6)
    s.add_argument("--jobs", type=int, default=1, help="parallel workers for --input-dir")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive search on a small instance")
    o.add_argument("--input", "-i", required=True)
    o.add_argument("--cop", action="store_true", help="decide coverability instead")
    o.add_argument("--max-rounds", type=int)
    o.add_argument("--max-n", type=int, default=12)
    o.add_argument("--event-cap", type=int, default=200_000)
    o.add_argument("--state-cap", type=int, default=3_000_000)
    o.add_argument("--out", "-o")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check a walk against an instance")
    v.add_argument("--input", "-i", required=True)
    v.add_argument("--walk", "-w", required=True)
    v.add_argument("--out", "-o")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=("random", "linetsp", "3sat", "3partition", "knapsack"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", "-o")
    g.add_argument("--witness", help="also write a witness walk (3sat, 3partition)")
    g.add_argument("--topology", default="directed_path")
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--cost-range", default="1,4")
    g.add_argument("--profit-range", default="0,9")
    g.add_argument("--windows-per-vertex", type=int, default=1)
    g.add_argument("--window-span", type=int, default=6)
    g.add_argument("--budget-factor", type=float, default=1.0)
    g.add_argument("--dynamic", action="store_true")
    g.add_argument("--jobs-file", help="linetsp: JSON list of [x, r, d]")
    g.add_argument("--cnf", help="3sat: DIMACS file")
    g.add_argument("--vars", type=int, default=3)
    g.add_argument("--clauses", type=int, default=4)
    g.add_argument("--items", help="3partition: '4,5,5,...'; knapsack: JSON [[size, value], ...]")
    g.add_argument("--capacity", type=int)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="timing table as CSV")
    b.add_argument("--suite", required=True, choices=("path-mtw", "cop-cycle", "envelope"))
    b.add_argument("--sizes", help="comma separated sizes")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repetitions", type=int, default=3)
    b.add_argument("--impl", choices=("auto", "python", "cython"), default="auto")
    b.add_argument("--stat", choices=("median", "min"), default="median",
                   help="per-size summary of the repetitions")
    b.add_argument("--out", "-o")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("compress", help="shrink the deadlines of a cycle instance")
    c.add_argument("--input", "-i", required=True)
    c.add_argument("--out", "-o")
    c.set_defaults(func=cmd_compress)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
