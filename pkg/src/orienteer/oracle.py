"""Exhaustive search over event-time walks; the ground truth for small instances.

A walk only ever waits until something changes: a release of a window at the
current vertex or the earliest admissible departure over an outgoing edge.
Arriving earlier never hurts (waiting is always allowed), so restricting the
wait targets this way loses nothing.  ``grid=True`` instead waits one time unit
at a time and serves as an independent cross-check.
"""

from __future__ import annotations

import heapq
import sys

from .errors import ResourceLimitError
from .model import DIRECTED_CYCLE, Instance, Solution, Walk, require, validate_walk

DEFAULT_MAX_N = 12
DEFAULT_EVENT_CAP = 200_000
DEFAULT_STATE_CAP = 3_000_000


def shortest_distances(inst: Instance) -> list:
    """All-pairs shortest path costs ignoring edge activity (None = unreachable)."""
    dist = []
    for s in range(inst.n):
        d = [None] * inst.n
        d[s] = 0
        heap = [(0, s)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > d[u]:
                continue
            for v, e in inst.neighbors[u]:
                nd = du + e.cost
                if d[v] is None or nd < d[v]:
                    d[v] = nd
                    heapq.heappush(heap, (nd, v))
        dist.append(d)
    return dist


def event_times(inst: Instance, cap: int = DEFAULT_EVENT_CAP) -> list:
    """Sorted superset of the times at which an optimal walk departs a vertex."""
    inst = require(inst)
    dist = shortest_distances(inst)
    anchors = set()
    for v, spec in enumerate(inst.vertices):
        for r, d in spec.windows:
            anchors.add((v, r))
            anchors.add((v, d))
    for e in inst.edges:
        for a, b in e.active or ():
            for t in (a, b, b - e.cost):
                anchors.add((e.u, t))
                anchors.add((e.v, t))
    out = {0}
    out.update(x for x in dist[inst.start] if x is not None and x <= inst.budget)
    for v, t in anchors:
        for u in range(inst.n):
            for dd in (dist[u][v], dist[v][u]):
                if dd is None:
                    continue
                for x in (t - dd, t + dd):
                    if 0 <= x <= inst.budget:
                        out.add(x)
        if len(out) > cap:
            raise ResourceLimitError(f"event set exceeds cap {cap}")
    return sorted(out)


class _Search:
    def __init__(self, inst, cover, max_rounds, grid, state_cap):
        self.inst = inst
        self.cover = cover
        self.max_rounds = max_rounds
        self.grid = grid
        self.state_cap = state_cap
        self.states = 0
        n = inst.n
        self.bit = [0] * n
        self.value = {}
        for v in range(n):
            if cover or (inst.vertices[v].profit > 0 and inst.collectible(v)):
                self.bit[v] = 1 << v
        self.full = sum(self.bit)
        self.memo = {}
        self.best_value = -1
        self.best_mask = 0
        self.best_walk = None
        self.stack = []
        self.wrap = (n - 1, 0) if inst.topology == DIRECTED_CYCLE else None

    def profit(self, mask):
        p = self.value.get(mask)
        if p is None:
            p = sum(self.inst.vertices[v].profit for v in range(self.inst.n) if mask >> v & 1)
            self.value[mask] = p
        return p

    def score(self, mask):
        return bin(mask).count("1") if self.cover else self.profit(mask)

    def done(self):
        return self.cover and self.best_mask == self.full

    def run(self):
        inst = self.inst
        s = inst.start
        mask = self.bit[s] if inst.hits(s, 0, 0) else 0
        self.stack.append((s, 0))
        self.dfs(s, 0, mask, 0)
        return self.best_value, self.best_mask, self.best_walk

    def dfs(self, v, t, mask, wraps):
        if self.done():
            return
        key = (v, t, wraps)
        seen = self.memo.get(key)
        if seen is not None:
            for m in seen:
                if m | mask == m:
                    return
            seen[:] = [m for m in seen if m | mask != mask]
            seen.append(mask)
        else:
            self.memo[key] = [mask]
        self.states += 1
        if self.states > self.state_cap:
            raise ResourceLimitError(f"oracle explored more than {self.state_cap} states")
        sc = self.score(mask)
        if sc > self.best_value:
            self.best_value = sc
            self.best_mask = mask
            self.best_walk = list(self.stack)
            if self.done():
                return
        if not self.cover and sc + self.profit(self.full & ~mask) <= self.best_value:
            return
        inst = self.inst
        B = inst.budget
        for u, e in inst.neighbors[v]:
            arrive = t + e.cost
            if arrive > B or not e.admits(t):
                continue
            w = wraps
            if self.wrap is not None and (v, u) == self.wrap:
                w += 1
                if self.max_rounds is not None and w > self.max_rounds - 1:
                    continue
            nm = mask | self.bit[u] if self.bit[u] and inst.hits(u, arrive, arrive) else mask
            self.stack.append((u, arrive))
            self.dfs(u, arrive, nm, w)
            self.stack.pop()
            if self.done():
                return
        for t2 in self.wait_targets(v, t):
            nm = mask | self.bit[v] if self.bit[v] and inst.hits(v, t, t2) else mask
            self.stack.append((v, t2))
            self.dfs(v, t2, nm, wraps)
            self.stack.pop()
            if self.done():
                return

    def wait_targets(self, v, t):
        B = self.inst.budget
        if t >= B:
            return ()
        if self.grid:
            return (t + 1,)
        out = set()
        for r, _ in self.inst.vertices[v].windows:
            if t < r <= B:
                out.add(r)
        for u, e in self.inst.neighbors[v]:
            dep = e.earliest_departure(t + 1)
            if dep is not None and dep + e.cost <= B:
                out.add(dep)
        return sorted(out)


def _run(inst, cover, max_rounds=None, grid=False, max_n=DEFAULT_MAX_N,
         event_cap=DEFAULT_EVENT_CAP, state_cap=DEFAULT_STATE_CAP):
    inst = require(inst)
    if inst.n > max_n:
        raise ResourceLimitError(f"oracle limited to n <= {max_n} (got {inst.n})")
    event_times(inst, event_cap)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10_000 + 4 * inst.budget))
    try:
        return inst, _Search(inst, cover, max_rounds, grid, state_cap).run()
    finally:
        sys.setrecursionlimit(old)


def oracle_op(inst: Instance, max_rounds=None, grid=False, **caps) -> Solution:
    """Optimal profit and a witness walk by exhaustive search.

    ``max_rounds`` (directed cycles only) bounds the number of rounds, i.e. a
    walk may traverse the closing edge back to vertex 0 at most
    ``max_rounds - 1`` times.
    """
    inst, (value, mask, visits) = _run(inst, False, max_rounds, grid, **caps)
    walk = Walk.of(visits)
    rep = validate_walk(inst, walk)
    assert rep.valid and rep.profit == value, (rep, value)
    return Solution(value, walk, "oracle")


def oracle_cop(inst: Instance, grid=False, **caps):
    """A walk collecting every vertex inside one of its windows, or None."""
    inst = require(inst)
    if inst.has_windows and not all(v.windows for v in inst.vertices):
        return None
    inst, (value, mask, visits) = _run(inst, True, None, grid, **caps)
    if value < inst.n:
        return None
    walk = Walk.of(visits)
    rep = validate_walk(inst, walk)
    assert rep.valid and len(rep.collected) == inst.n
    return walk
