"""Directed-cycle solvers: deadline compression, covering schedules, short
windows, FPT in the long windows and the 2-approximation.

Vertex 0 is the start.  ``pos[i]`` is the cost of the arc from vertex 0 to
vertex ``i`` and ``C`` the cost of the whole cycle, so the ``j``-th visit
(0-based) of a walk that never waits reaches vertex ``i`` at ``pos[i] + j*C``.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .envelope import envelope_class, merge_max
from .errors import InstanceError, ResourceLimitError
from .model import (DIRECTED_CYCLE, DIRECTED_PATH, EdgeSpec, Instance, Solution, TimeWindow,
                    VertexSpec, Walk, cycle_length, cycle_positions, require, validate_walk)
from .path import directed_path_dp

UNWRAP_LIMIT = 10**7
FPT_CAP = 12


def _cycle_instance(inst: Instance) -> Instance:
    if inst.topology == DIRECTED_CYCLE and inst.n < 2:
        raise InstanceError("cycle requires n >= 2", "n")
    inst = require(inst, DIRECTED_CYCLE)
    if cycle_length(inst) == 0:
        raise InstanceError("cycle length must be positive", "edges")
    return inst


def _single_window(inst: Instance) -> None:
    for i, v in enumerate(inst.vertices):
        if len(v.windows) > 1:
            raise InstanceError("multiple windows per vertex are not supported here",
                                f"vertices[{i}].windows")


def effective_windows(inst: Instance) -> list:
    """One window (or None) per vertex; plain OP vertices are open all along."""
    if not inst.has_windows:
        return [TimeWindow(0, inst.budget) for _ in range(inst.n)]
    return [v.windows[0] if v.windows else None for v in inst.vertices]


# ---------------------------------------------------------------- compression


@dataclass(frozen=True)
class TimeMap:
    """Piecewise map from compressed times back to original times."""

    original: tuple
    compressed: tuple
    C: int

    @property
    def identity(self) -> bool:
        return self.original == self.compressed

    def to_original(self, t: int) -> int:
        k = bisect_right(self.compressed, t) - 1
        if k < 0:
            return t
        base, nbase = self.original[k], self.compressed[k]
        if k + 1 == len(self.compressed):
            return base + (t - nbase)
        gap = self.original[k + 1] - base
        if gap == self.compressed[k + 1] - nbase or t - nbase <= self.C:
            return base + (t - nbase)
        return self.original[k + 1] - (self.compressed[k + 1] - t)

    def to_compressed(self, t: int) -> int:
        k = bisect_right(self.original, t) - 1
        if k < 0:
            return t
        base, nbase = self.original[k], self.compressed[k]
        if k + 1 == len(self.original):
            return nbase + (t - base)
        if t - base <= self.C:
            return nbase + (t - base)
        return max(nbase + self.C, self.compressed[k + 1] - (self.original[k + 1] - t))

    def map_walk(self, inst: Instance, walk: Walk) -> Walk:
        """Translate a walk of the compressed instance into the original one.

        A move that straddles a shrunk gap gets a wait in front of it.
        """
        out = []
        for v, t in walk.visits:
            ot = self.to_original(t)
            if out and out[-1][0] != v:
                u, prev = out[-1]
                cost = inst.edge_map[(u, v)].cost
                if ot - prev > cost:
                    out.append((u, ot - cost))
            out.append((v, ot))
        return Walk.of(out)


def compress_deadlines(inst: Instance):
    """Shrink every gap of the event sequence that is longer than ``2C``."""
    inst = _cycle_instance(inst)
    _single_window(inst)
    C = cycle_length(inst)
    events = {0, inst.budget}
    for v in inst.vertices:
        for r, d in v.windows:
            events.update((r, d))
    original = sorted(events)
    compressed = [0]
    for a, b in zip(original, original[1:]):
        compressed.append(compressed[-1] + min(b - a, 2 * C))
    tm = TimeMap(tuple(original), tuple(compressed), C)
    if tm.identity:
        return inst, tm
    index = {t: k for k, t in enumerate(original)}
    vertices = tuple(VertexSpec(v.profit, tuple(TimeWindow(compressed[index[r]], compressed[index[d]])
                                                for r, d in v.windows))
                     for v in inst.vertices)
    return inst.replace(vertices=vertices, budget=compressed[-1]), tm


# ---------------------------------------------------------------- covering schedule


class Schedule:
    """Departure times ``T[i][j]`` of the ``j``-th visit of vertex ``i`` (0-based)."""

    def __init__(self, inst: Instance, rounds: int):
        self.inst = inst
        self.n = inst.n
        self.rounds = rounds
        self.C = cycle_length(inst)
        self.pos = cycle_positions(inst)
        self.windows = effective_windows(inst)
        self.T = [[self.pos[i] + self.C * j for j in range(rounds)] for i in range(self.n)]
        self.raised = 0

    def position(self, i, j):
        return self.pos[i] + self.C * j

    def arrival(self, i, j):
        if i == 0 and j == 0:
            return 0
        if i == 0:
            return self.T[self.n - 1][j - 1] + (self.C - self.pos[self.n - 1])
        return self.T[i - 1][j] + (self.pos[i] - self.pos[i - 1])

    def first_hit(self, i):
        """Round of the first visit of ``i`` that meets its window, or None."""
        w = self.windows[i]
        if w is None:
            return None
        j = bisect_left(self.T[i], w.release)
        if j < self.rounds and self.arrival(i, j) <= w.deadline:
            return j
        return None

    def is_hit(self, i) -> bool:
        return self.first_hit(i) is not None

    def raise_entry(self, i, j, value):
        """Set ``T[i][j] = value`` and push every later entry forward."""
        base = self.position(i, j)
        self.T[i][j] = value
        self.raised += 1
        ii, jj = i, j
        while True:
            ii += 1
            if ii == self.n:
                ii, jj = 0, jj + 1
                if jj == self.rounds:
                    return
            need = value + self.position(ii, jj) - base
            if self.T[ii][jj] >= need:
                return
            self.T[ii][jj] = need

    def repair(self, i) -> bool:
        """One repair step for an uncollected vertex; False if it cannot be hit."""
        w = self.windows[i]
        if w is None:
            return False
        j = bisect_left(self.T[i], w.release) - 1
        if j < 0:
            return False
        self.raise_entry(i, j, w.release)
        return True

    def solve(self) -> bool:
        while True:
            missing = next((i for i in range(self.n) if not self.is_hit(i)), None)
            if missing is None:
                return True
            if not self.repair(missing):
                return False

    def walk(self, truncate=True) -> Walk:
        """The induced walk, cut right after the last vertex is first collected."""
        if truncate:
            last = max((self.first_hit(i) * self.n + i, i) for i in range(self.n))
            stop_index, stop_vertex = last
        else:
            stop_index, stop_vertex = self.rounds * self.n - 1, None
        visits = []
        for k in range(stop_index + 1):
            j, i = divmod(k, self.n)
            a = self.arrival(i, j)
            leave = self.T[i][j]
            if k == stop_index and stop_vertex is not None:
                leave = max(a, self.windows[i].release)
            visits.append((i, a))
            if leave > a:
                visits.append((i, leave))
        return Walk.of(visits)


def cop_schedule(inst: Instance, compress: bool = True):
    """Run the repair algorithm; returns ``(schedule_or_None, TimeMap)``."""
    inst = _cycle_instance(inst)
    _single_window(inst)
    if compress:
        work, tm = compress_deadlines(inst)
    else:
        work, tm = inst, None
    wins = effective_windows(work)
    if any(w is None for w in wins):
        return None, tm
    C = cycle_length(work)
    d_max = max(w.deadline for w in wins)
    sched = Schedule(work, d_max // C + 2)
    if not sched.solve():
        return None, tm
    return sched, tm


def solve_cop_1tw_cycle(inst: Instance):
    """A covering walk (every vertex collected in its window) or None."""
    inst = _cycle_instance(inst)
    sched, tm = cop_schedule(inst)
    if sched is None:
        return None
    walk = sched.walk()
    if walk.visits[-1][1] > sched.inst.budget:
        return None
    walk = tm.map_walk(inst, walk)
    rep = validate_walk(inst, walk)
    if not rep.valid or len(rep.collected) != inst.n:
        raise AssertionError(f"covering walk failed validation: {rep}")
    return walk


def schedule_of_walk(inst: Instance, walk: Walk, rounds: int) -> list:
    """Departure times of a walk per (vertex, round); ``None`` past its end."""
    T = [[None] * rounds for _ in range(inst.n)]
    j = 0
    visits = walk.visits
    for k, (v, t) in enumerate(visits):
        if k and v == 0 and visits[k - 1][0] != 0:
            j += 1
        if j < rounds:
            T[v][j] = t
    return T


# ---------------------------------------------------------------- unwrapping


def unwrap_cycle(inst: Instance, rounds: int, limit: int = UNWRAP_LIMIT) -> Instance:
    """Directed path of ``rounds`` concatenated copies of the cycle."""
    inst = _cycle_instance(inst)
    if rounds < 1:
        raise InstanceError("rounds must be at least 1", "rounds")
    if rounds * inst.n > limit:
        raise ResourceLimitError(f"unwrapped path would have {rounds * inst.n} vertices "
                                 f"(limit {limit})")
    em = inst.edge_map
    n = inst.n
    vertices = inst.vertices * rounds
    edges = tuple(EdgeSpec(k, k + 1, em[(k % n, (k + 1) % n)].cost)
                  for k in range(rounds * n - 1))
    return Instance(DIRECTED_PATH, rounds * n, 0, inst.budget, vertices, edges,
                    meta={"unwrapped_from": n, "rounds": rounds})


def _fold(walk: Walk, n: int) -> Walk:
    return Walk.of((v % n, t) for v, t in walk.visits)


def _rounds_needed(inst: Instance) -> int:
    C = cycle_length(inst)
    horizon = inst.budget
    wins = [w for w in effective_windows(inst) if w is not None]
    if wins:
        horizon = min(horizon, max(w.deadline for w in wins))
    return horizon // C + 2


def _path_arrays(inst: Instance, rounds: int):
    n = inst.n
    em = inst.edge_map
    costs = [em[(k % n, (k + 1) % n)].cost for k in range(rounds * n - 1)]
    wins = effective_windows(inst)
    windows = [[wins[k % n]] if wins[k % n] is not None else [] for k in range(rounds * n)]
    profits = [inst.vertices[k % n].profit for k in range(rounds * n)]
    return costs, windows, profits


def _finish(orig: Instance, tm: TimeMap, walk: Walk, claimed: int, algorithm: str) -> Solution:
    walk = tm.map_walk(orig, walk)
    rep = validate_walk(orig, walk)
    if not rep.valid or rep.profit < claimed:
        raise AssertionError(f"{algorithm}: mapped walk failed validation: {rep} vs {claimed}")
    return Solution(rep.profit, walk, algorithm)


def solve_op_1tw_cycle_short(inst: Instance, impl=None, limit: int = UNWRAP_LIMIT) -> Solution:
    """Exact optimum when every window is shorter than the cycle."""
    inst = _cycle_instance(inst)
    _single_window(inst)
    C = cycle_length(inst)
    for i, w in enumerate(effective_windows(inst)):
        if w is not None and w.deadline - w.release >= C:
            raise InstanceError(f"window length >= C ({w.deadline - w.release} >= {C}); "
                                "use the fpt or approx solver", f"vertices[{i}].windows")
    work, tm = compress_deadlines(inst)
    rounds = _rounds_needed(work)
    if rounds * work.n > limit:
        raise ResourceLimitError(f"unwrapped path would have {rounds * work.n} vertices")
    costs, windows, profits = _path_arrays(work, rounds)
    best, _, visits = directed_path_dp(costs, windows, profits, work.budget, impl)
    return _finish(inst, tm, _fold(Walk.of(visits), work.n), best, "cycle-short")


# ---------------------------------------------------------------- FPT in long windows


def _steps_value(steps, t):
    k = bisect_right(steps, (t, float("inf"))) - 1
    return steps[k][1] if k >= 0 else 0


def solve_op_1tw_cycle_fpt(inst: Instance, cap: int = FPT_CAP, impl=None,
                           limit: int = UNWRAP_LIMIT) -> Solution:
    """Exact optimum, exponential only in the number of long windows."""
    inst = _cycle_instance(inst)
    _single_window(inst)
    work, tm = compress_deadlines(inst)
    C = cycle_length(work)
    n = work.n
    wins = effective_windows(work)
    long_ids = [i for i, w in enumerate(wins)
                if w is not None and w.deadline - w.release >= C and work.vertices[i].profit > 0]
    k = len(long_ids)
    if k > cap:
        raise ResourceLimitError(f"k = {k} long windows exceeds cap {cap}")
    bit = {v: 1 << b for b, v in enumerate(long_ids)}
    rounds = _rounds_needed(work)
    if rounds * n > limit:
        raise ResourceLimitError(f"unwrapped path would have {rounds * n} vertices")
    costs, windows, profits = _path_arrays(work, rounds)
    B = work.budget
    Env = envelope_class(impl)
    envs = [Env(B + 1) for _ in range(1 << k)]
    log = []  # per path vertex: ("short", [(r2, d2, stop) per subset]) or ("long", b, snapshots)
    best, best_end, best_set = 0, 0, 0
    c = 0
    for p in range(len(profits)):
        if p:
            c += costs[p - 1]
            if c > B:
                break
        v = p % n
        w = wins[v]
        entry = None
        if w is not None and profits[p] and w.deadline >= c:
            r2, d2 = max(w.release - c, 0), w.deadline - c
            if v in bit:
                b = bit[v]
                snaps, stops = {}, {}
                for S in range(1 << k):
                    if S & b:
                        continue
                    tmp = envs[S].copy()
                    stops[S] = tmp.apply_window(r2, d2, profits[p])
                    snaps[S | b] = envs[S | b].steps()
                    envs[S | b] = merge_max(envs[S | b], tmp)
                entry = ("long", b, r2, d2, snaps, stops)
            else:
                stops = [env.apply_window(r2, d2, profits[p]) for env in envs]
                entry = ("short", r2, d2, stops)
        log.append(entry)
        for S, env in enumerate(envs):
            val = env.query(B - c)
            if val > best:
                best, best_end, best_set = val, p, S
    chosen = [None] * (best_end + 1)
    t = B - sum(costs[:best_end])
    S = best_set
    val = best
    for p in range(best_end, -1, -1):
        entry = log[p]
        if entry is None:
            continue
        if entry[0] == "short":
            _, r2, d2, stops = entry
            if r2 <= t < stops[S]:
                chosen[p] = (r2, d2)
                val -= profits[p]
                t = min(t, d2)
        else:
            _, b, r2, d2, snaps, stops = entry
            if S & b and _steps_value(snaps[S], t) < val:
                S &= ~b
                if r2 <= t < stops[S]:
                    chosen[p] = (r2, d2)
                    val -= profits[p]
                    t = min(t, d2)
    visits = []
    clock = 0
    absolute = 0
    for p in range(best_end + 1):
        if p:
            absolute += costs[p - 1]
        visits.append((p, clock + absolute))
        if chosen[p] is not None and clock < chosen[p][0]:
            clock = chosen[p][0]
            visits.append((p, clock + absolute))
    return _finish(inst, tm, _fold(Walk.of(visits), n), best, "cycle-fpt")


# ---------------------------------------------------------------- 2-approximation


def no_wait_walk(inst: Instance, until: int) -> Walk:
    """Walk the cycle without waiting for as long as the clock stays <= until."""
    em = inst.edge_map
    visits = [(0, 0)]
    v, t = 0, 0
    while True:
        u = (v + 1) % inst.n
        c = em[(v, u)].cost
        if t + c > until:
            break
        v, t = u, t + c
        visits.append((v, t))
        if c == 0 and len(visits) > 2 * inst.n and t == visits[-inst.n - 1][1]:
            break
    return Walk.of(visits)


def approx2_op_1tw_cycle(inst: Instance, impl=None) -> Solution:
    """Better of the exact short-window optimum and a long no-wait walk."""
    inst = _cycle_instance(inst)
    _single_window(inst)
    C = cycle_length(inst)
    wins = effective_windows(inst)
    short = []
    long_any = False
    for v, w in zip(inst.vertices, wins):
        if w is not None and w.deadline - w.release < C:
            short.append(VertexSpec(v.profit, (w,)))
        else:
            long_any = long_any or w is not None
            short.append(VertexSpec(0, ()))
    if any(v.windows for v in short):
        sub = solve_op_1tw_cycle_short(inst.replace(vertices=tuple(short)), impl)
        a = Solution(validate_walk(inst, sub.walk).profit, sub.walk, "cycle-2approx")
    else:
        w0 = Walk.of([(0, 0)])
        a = Solution(validate_walk(inst, w0).profit, w0, "cycle-2approx")
    if long_any:
        d_max = max(w.deadline for w in wins if w is not None)
        walk = no_wait_walk(inst, min(inst.budget, d_max))
        rep = validate_walk(inst, walk)
        if rep.profit > a.profit:
            return Solution(rep.profit, walk, "cycle-2approx", {"branch": "long"})
    a.extra["branch"] = "short"
    return a
