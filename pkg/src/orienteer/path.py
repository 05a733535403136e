"""Exact OP with multiple time windows on a directed path.

Times are rebased by the cost of the prefix of the path so that moving forward
does not change the clock of the envelope.  Each vertex's windows are applied
latest first, which guarantees the vertex is counted at most once: when an
earlier window is applied its deadline lies before every later release, so it
only reads values that predate the later windows.
"""

from __future__ import annotations

from .envelope import envelope_class
from .errors import InstanceError
from .model import DIRECTED_PATH, Instance, Solution, Walk, require, validate_walk


def _prefix_costs(inst):
    em = inst.edge_map
    pre = [0] * inst.n
    for i in range(1, inst.n):
        pre[i] = pre[i - 1] + em[(i - 1, i)].cost
    return pre


def directed_path_dp(costs, windows, profits, budget, impl=None):
    """Core DP on raw arrays.

    ``costs[i]`` is the cost of edge ``i -> i+1``, ``windows[i]`` a sorted list
    of disjoint ``(r, d)`` pairs, ``profits[i]`` the profit.  Returns
    ``(best, end_vertex, visits)`` with an optimal canonical walk.
    """
    n = len(profits)
    Env = envelope_class(impl)
    env = Env(budget + 1)
    applied = []
    best, end = 0, 0
    c = 0
    for i in range(n):
        if i:
            c += costs[i - 1]
            if c > budget:
                break
        rec = []
        p = profits[i]
        if p:
            for r, d in reversed(windows[i]):
                d2 = d - c
                if d2 < 0:
                    continue
                r2 = r - c if r > c else 0
                rec.append((r2, d2, env.apply_window(r2, d2, p)))
        applied.append(rec)
        v = env.query(budget - c)
        if v > best:
            best, end = v, i
    return best, end, _rebuild(costs, applied, budget, end)


def _rebuild(costs, applied, budget, end):
    # walk back through the recorded windows, undoing the latest applied first
    t = budget - sum(costs[:end])
    chosen = [None] * (end + 1)
    for i in range(end, -1, -1):
        for r2, d2, stop in reversed(applied[i]):
            if r2 <= t < stop:
                chosen[i] = (r2, d2)
                if d2 < t:
                    t = d2
    visits = []
    clock = 0  # rebased
    absolute = 0
    for i in range(end + 1):
        if i:
            absolute += costs[i - 1]
        visits.append((i, clock + absolute))
        w = chosen[i]
        if w is not None and clock < w[0]:
            clock = w[0]
            visits.append((i, clock + absolute))
    return visits


def solve_directed_path_mtw(inst: Instance, impl=None) -> Solution:
    """Maximum profit over all walks on a directed path with time windows."""
    inst = require(inst, DIRECTED_PATH)
    if inst.n < 1:
        raise InstanceError("empty instance")
    pre = _prefix_costs(inst)
    costs = [pre[i + 1] - pre[i] for i in range(inst.n - 1)]
    if inst.has_windows:
        windows = [list(v.windows) for v in inst.vertices]
    else:
        windows = [[(0, inst.budget)] for _ in inst.vertices]
    best, _, visits = directed_path_dp(costs, windows, inst.profits, inst.budget, impl)
    walk = Walk.of(visits)
    rep = validate_walk(inst, walk)
    if not rep.valid or rep.profit != best:
        raise AssertionError(f"path reconstruction mismatch: {rep} vs {best}")
    return Solution(best, walk, "path-mtw")
