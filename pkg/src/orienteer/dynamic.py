"""Orienteering on paths and cycles whose edges are only usable at times.

An edge may be traversed only if the whole traversal fits inside one of its
activity intervals.  Waiting at vertices is always allowed, so moving in one
direction as early as possible dominates every other way of covering the
same vertices.
"""

from __future__ import annotations

from .errors import InstanceError
from .model import (DIRECTED_CYCLE, DIRECTED_PATH, UNDIRECTED_PATH, Instance, Solution, Walk,
                    require, validate_walk)

FORWARD = "forward"
BACKWARD = "backward"


def _steps(inst, src, dst, direction):
    n = inst.n
    if inst.topology == DIRECTED_CYCLE:
        if direction == BACKWARD:
            raise InstanceError("a directed cycle can only be walked forward", "direction")
        v = src
        while v != dst:
            yield v, (v + 1) % n
            v = (v + 1) % n
        return
    if direction is None:
        direction = FORWARD if dst >= src else BACKWARD
    if direction == FORWARD:
        if dst < src:
            raise InstanceError("target lies behind the source", "direction")
        for v in range(src, dst):
            yield v, v + 1
    else:
        if inst.topology == DIRECTED_PATH:
            raise InstanceError("a directed path can only be walked forward", "direction")
        if dst > src:
            raise InstanceError("target lies ahead of the source", "direction")
        for v in range(src, dst, -1):
            yield v, v - 1


def _advance(inst, src, dst, depart, direction, visits=None):
    t = depart
    em = inst.edge_map
    for u, v in _steps(inst, src, dst, direction):
        e = em[(u, v)]
        dep = e.earliest_departure(t)
        if dep is None or dep + e.cost > inst.budget:
            return None
        if visits is not None:
            if dep > t:
                visits.append((u, dep))
            visits.append((v, dep + e.cost))
        t = dep + e.cost
    return t


def earliest_arrival(inst: Instance, src: int, dst: int, depart: int, direction=None):
    """Earliest arrival at ``dst`` moving monotonically from ``src``, or None."""
    inst = require(inst, UNDIRECTED_PATH, DIRECTED_PATH, DIRECTED_CYCLE)
    if not (0 <= src < inst.n and 0 <= dst < inst.n):
        raise InstanceError("vertex out of range")
    if direction not in (None, FORWARD, BACKWARD):
        raise InstanceError(f"unknown direction {direction!r}", "direction")
    return _advance(inst, src, dst, depart, direction)


def _no_windows(inst):
    if inst.has_windows:
        raise InstanceError("vertex time windows are not supported by this solver", "vertices")


def solve_dyn_undirected_path(inst: Instance) -> Solution:
    """Exact optimum over all pairs of extreme vertices and both visiting orders."""
    inst = require(inst, UNDIRECTED_PATH)
    _no_windows(inst)
    s = inst.start
    prefix = [0]
    for p in inst.profits:
        prefix.append(prefix[-1] + p)
    best = (inst.profits[s], s, s, None)
    # reach[i] = earliest arrival at i going straight from s
    reach = {s: 0}
    for other in list(range(s - 1, -1, -1)) + list(range(s + 1, inst.n)):
        reach[other] = _advance(inst, s, other, 0, None)
    for i in range(s + 1):
        for j in range(s, inst.n):
            value = prefix[j + 1] - prefix[i]
            if value <= best[0]:
                continue
            for first, second in ((i, j), (j, i)):
                a = reach[first]
                if a is None:
                    continue
                if _advance(inst, first, second, a, None) is not None:
                    best = (value, i, j, first)
                    break
    value, i, j, first = best
    visits = [(s, 0)]
    if first is not None:
        second = j if first == i else i
        _advance(inst, s, first, 0, None, visits)
        _advance(inst, first, second, visits[-1][1], None, visits)
    walk = Walk.of(visits)
    rep = validate_walk(inst, walk)
    if not rep.valid or rep.profit != value:
        raise AssertionError(f"dyn-path witness mismatch: {rep} vs {value}")
    return Solution(value, walk, "dyn-path")


def solve_dyn_directed_chain(inst: Instance) -> Solution:
    """Greedy forward walk on a dynamic directed path or cycle."""
    inst = require(inst, DIRECTED_PATH, DIRECTED_CYCLE)
    _no_windows(inst)
    em = inst.edge_map
    visits = [(0, 0)]
    seen = {0}
    v, t = 0, 0
    while len(seen) < inst.n:
        u = v + 1 if inst.topology == DIRECTED_PATH else (v + 1) % inst.n
        if u >= inst.n:
            break
        e = em[(v, u)]
        dep = e.earliest_departure(t)
        if dep is None or dep + e.cost > inst.budget:
            break
        if dep > t:
            visits.append((v, dep))
        v, t = u, dep + e.cost
        visits.append((v, t))
        seen.add(v)
    walk = Walk.of(visits)
    rep = validate_walk(inst, walk)
    return Solution(rep.profit, walk, "dyn-chain")
