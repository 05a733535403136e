"""Timing suites behind ``orienteer bench`` and the complexity soft checks."""

from __future__ import annotations

import gc
import random
import statistics
import time

from .errors import InstanceError
from .model import cycle_instance, path_instance

SUITES = ("path-mtw", "cop-cycle", "envelope")
STATS = {"median": statistics.median, "min": min}
DEFAULT_SIZES = {
    "path-mtw": [2 ** k for k in range(10, 17)],
    "cop-cycle": [8, 16, 32, 64],
    "envelope": [2 ** k for k in range(10, 17)],
}


def path_case(m: int, seed: int):
    """Directed path carrying ``m`` windows in total (two per vertex)."""
    rng = random.Random(seed)
    n = max(2, m // 2)
    costs = [rng.randint(1, 4) for _ in range(n - 1)]
    budget = sum(costs) + n
    windows = []
    for _ in range(n):
        a, b, c, d = sorted(rng.sample(range(budget + 1), 4))
        windows.append([(a, b), (c, d)] if c > b + 1 else [(a, d)])
    profits = [rng.randint(0, 100) for _ in range(n)]
    return path_instance(costs, profits, windows, budget)


def cycle_case(n: int, seed: int):
    """Feasible single-window cycle: windows surround the visits of a random walk."""
    rng = random.Random(seed)
    costs = [rng.randint(1, 5) for _ in range(n)]
    C = sum(costs)
    t = 0
    visits = [[] for _ in range(n)]
    for _ in range(3):
        for v in range(n):
            t += rng.choice((0, 0, 0, rng.randint(1, 3)))
            visits[v].append(t)
            t += costs[v]
    windows = []
    for v in range(n):
        at = rng.choice(visits[v])
        windows.append([(max(0, at - rng.randint(0, C // 4)), at + rng.randint(0, C // 4))])
    budget = max(w[0][1] for w in windows) + C
    return cycle_instance(costs, [1] * n, windows, budget)


def envelope_case(size: int, seed: int):
    rng = random.Random(seed)
    horizon = 4 * size
    ops = []
    for _ in range(size):
        r = rng.randrange(horizon)
        ops.append((r, min(horizon - 1, r + rng.randint(0, 64)), rng.randint(0, 50)))
    return horizon, ops


def _runner(suite, size, seed, impl):
    if suite == "path-mtw":
        from .path import solve_directed_path_mtw
        inst = path_case(size, seed)
        return lambda: solve_directed_path_mtw(inst, impl=impl)
    if suite == "cop-cycle":
        from .cycle import cop_schedule
        inst = cycle_case(size, seed)
        return lambda: cop_schedule(inst)
    from .envelope import envelope_class
    cls = envelope_class(impl)
    horizon, ops = envelope_case(size, seed)

    def run():
        env = cls(horizon)
        for r, d, p in ops:
            env.apply_window(r, d, p)
    return run


def run_suite(suite: str, sizes=None, seed: int = 0, repetitions: int = 3, impl=None,
              stat: str = "median"):
    """Rows ``(size, ns, ratio_to_previous)``; the first ratio is None.

    Repetitions are interleaved across sizes so that a burst of machine noise
    hits every size alike.  ``stat`` picks the per-size summary: ``median`` or
    ``min`` (the steadier one on a shared machine).
    """
    if suite not in SUITES:
        raise InstanceError(f"unknown suite {suite!r}", "suite")
    if repetitions < 1:
        raise InstanceError("repetitions must be at least 1", "repetitions")
    if stat not in STATS:
        raise InstanceError(f"unknown statistic {stat!r}", "stat")
    sizes = list(sizes or DEFAULT_SIZES[suite])
    if not sizes or any(s < 1 for s in sizes):
        raise InstanceError("sizes must be positive", "sizes")
    fns = [_runner(suite, size, seed, impl) for size in sizes]
    times = [[] for _ in sizes]
    for fn in fns:
        fn()  # warm-up: first-touch page faults are not the algorithm either
    enabled = gc.isenabled()
    gc.disable()  # as timeit does; collector pauses are not the algorithm
    try:
        for _ in range(repetitions):
            for k, fn in enumerate(fns):
                t0 = time.perf_counter_ns()
                fn()
                times[k].append(time.perf_counter_ns() - t0)
    finally:
        if enabled:
            gc.enable()
    rows = []
    prev = None
    for size, ts in zip(sizes, times):
        val = int(STATS[stat](ts))
        rows.append((size, val, None if prev is None else val / prev))
        prev = val
    return rows


def to_csv(rows, stat: str = "median") -> str:
    lines = [f"size,{stat}_ns,ratio_to_previous"]
    for size, med, ratio in rows:
        lines.append(f"{size},{med},{'' if ratio is None else f'{ratio:.3f}'}")
    return "\n".join(lines) + "\n"
