"""Round-structured walks on a directed cycle: k-round DP, k-workouts, PTAS.

A round departs vertex 0, runs once around the cycle and returns to vertex 0.
The k-round DP advances all rounds in parallel one vertex at a time: a state
holds the round start times and, per round, the time the walk leaves the
current vertex.  A vertex then earns its profit once no matter how many rounds
meet its window.  Inside a round the walk only waits for a release (waiting
for anything else can be moved to vertex 0 without loss), so start times and
leave times come from small candidate sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .cycle import _cycle_instance, _single_window, compress_deadlines, effective_windows
from .errors import InstanceError, ResourceLimitError
from .model import Instance, Solution, Walk, cycle_length, cycle_positions, validate_walk

ROUNDS_CAP = 3
WORKOUT_CAP = 8
CANDIDATE_CAP = 4000


class _Cycle:
    def __init__(self, inst: Instance, cand_cap: int = CANDIDATE_CAP):
        self.inst = inst
        self.n = inst.n
        self.C = cycle_length(inst)
        self.pos = cycle_positions(inst)
        self.wrap = self.C - self.pos[-1]
        self.B = inst.budget
        self.W = effective_windows(inst)
        self.profit = inst.profits
        anchors = {0}
        for i, w in enumerate(self.W):
            if w is not None:
                anchors.add(w.release - self.pos[i])
        cand = set()
        for a in anchors:
            q = 0 if a >= 0 else -(a // self.C)
            x = a + q * self.C
            while x <= self.B:
                cand.add(x)
                if len(cand) > cand_cap:
                    raise ResourceLimitError(f"more than {cand_cap} candidate round starts")
                x += self.C
        self.cand = sorted(cand)

    def hit(self, i, a, b=None):
        w = self.W[i]
        if w is None:
            return False
        if b is None:
            b = a
        return w.release <= b and a <= w.deadline

    def sprint_hits(self, start):
        """Vertices a no-wait round departing vertex 0 at ``start`` collects."""
        return frozenset(i for i in range(self.n) if self.hit(i, start + self.pos[i]))


def _tuples(cand, lo, hi, qmax, C):
    """Increasing start tuples of length 1..qmax with spacing >= C inside [lo, hi]."""
    out = []

    def rec(prefix, lo2):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == qmax:
            return
        for x in cand:
            if x < lo2:
                continue
            if x > hi:
                break
            prefix.append(x)
            rec(prefix, x + C)
            prefix.pop()

    rec([], lo)
    return out


def _rounds_dp(cy: _Cycle, qmax, t_lo, bound, closed, excluded=frozenset()):
    """Best walk of 1..qmax rounds starting at vertex 0 at time ``t_lo``.

    Closed mode: every round returns to vertex 0 by ``bound`` and the stay at
    vertex 0 lasts until ``bound``.  Partial mode: the last round may stop at
    any vertex; all times stay within ``cy.B``.  Returns ``(value, visits)``
    or ``(-1, None)``.
    """
    if qmax < 1:
        return -1, None
    n, C, B, pos = cy.n, cy.C, cy.B, cy.pos
    prof = [0 if i in excluded else cy.profit[i] for i in range(n)]
    hi = bound - C if closed else min(bound, B)
    layer = {}
    for s in _tuples(cy.cand, t_lo, hi, qmax, C):
        q = len(s)
        v0 = cy.hit(0, t_lo, s[0]) or any(cy.hit(0, x) for x in s[1:])
        val = prof[0] if v0 else 0
        variants = [tuple(s)]
        if not closed:
            variants.append(tuple(s[:-1]) + (None,))
        for leaves in variants:
            key = (s, leaves, v0)
            if layer.get(key, (-1,))[0] < val:
                layer[key] = (val, None)
    history = [layer]
    step = [pos[j] - pos[j - 1] for j in range(n)]
    for j in range(1, n):
        nxt = {}
        rest = C - pos[j]
        w = cy.W[j]
        for key, (val, _) in layer.items():
            s, leaves, v0 = key
            q = len(s)
            options = []
            ok = True
            for i, L in enumerate(leaves):
                if L is None or L < 0:
                    options.append(((None, False),))
                    continue
                a = L + step[j]
                limit = s[i + 1] if i + 1 < q else (bound if closed else None)
                opts = []
                for leave, hit in ((a, cy.hit(j, a)),
                                   ((w.release, True) if w is not None and a < w.release else (None, None))):
                    if leave is None:
                        continue
                    if leave > B:
                        continue
                    if limit is not None and leave + rest > limit:
                        continue
                    opts.append((leave, hit))
                    if i + 1 == q and not closed:
                        opts.append((-leave - 1, hit))  # the walk stops here
                if not opts:
                    ok = False
                    break
                options.append(opts)
            if not ok:
                continue
            for combo in product(*options):
                nl = tuple(c[0] for c in combo)
                gain = prof[j] if any(c[1] for c in combo) else 0
                nk = (s, nl, v0)
                nv = val + gain
                if nxt.get(nk, (-1,))[0] < nv:
                    nxt[nk] = (nv, (key, tuple(c[0] for c in combo)))
        layer = nxt
        history.append(layer)
    best_val, best_key = -1, None
    for key, (val, _) in layer.items():
        s, leaves, v0 = key
        if not closed and leaves[-1] is not None and leaves[-1] >= 0:
            continue
        if closed:
            a = leaves[-1] + cy.wrap
            if a > bound:
                continue
            if not v0 and prof[0] and cy.hit(0, a, bound):
                val += prof[0]
        if val > best_val:
            best_val, best_key = val, key
    if best_key is None:
        return -1, None
    # walk back through the layers to recover every round's leave times
    rows = [None] * n
    key = best_key
    for j in range(n - 1, -1, -1):
        rows[j] = key[1]
        parent = history[j][key][1]
        if parent is not None:
            key = parent[0]
    s = best_key[0]
    start_leaves = key[1]
    return best_val, _assemble(cy, s, start_leaves, rows, t_lo, closed, bound)


def _assemble(cy, s, start_leaves, rows, t_lo, closed, bound):
    n, step = cy.n, [cy.pos[j] - cy.pos[j - 1] for j in range(cy.n)]
    visits = [(0, t_lo)]
    q = len(s)
    for i in range(q):
        if visits[-1][1] < s[i]:
            visits.append((0, s[i]))
        if start_leaves[i] is None:
            return visits
        L = s[i]
        for j in range(1, n):
            leave = rows[j][i]
            a = L + step[j]
            visits.append((j, a))
            if leave < 0:
                leave = -leave - 1
                if leave > a:
                    visits.append((j, leave))
                return visits
            if leave > a:
                visits.append((j, leave))
            L = leave
        visits.append((0, L + cy.wrap))
    if closed and visits[-1][1] < bound:
        visits.append((0, bound))
    return visits


@dataclass
class RoundInfo:
    start: int
    end: int | None
    collected: frozenset = frozenset()

    @property
    def is_sprint(self):
        return False if self.end is None else self._C == self.end - self.start

    _C: int = field(default=0, repr=False)


@dataclass
class SprintPlan:
    C: int
    rounds: list

    @classmethod
    def from_walk(cls, inst: Instance, walk: Walk) -> "SprintPlan":
        C = cycle_length(inst)
        rounds = []
        visits = walk.visits
        start = None
        stays = walk.stays()
        for k in range(1, len(visits)):
            (u, t0), (v, t1) = visits[k - 1], visits[k]
            if u == 0 and v != 0:
                start = t0
            if v == 0 and u != 0 and start is not None:
                rounds.append(RoundInfo(start, t1, _C=C))
                start = None
        if start is not None:
            rounds.append(RoundInfo(start, None, _C=C))
        for r in rounds:
            hi = r.end if r.end is not None else visits[-1][1]
            r.collected = frozenset(v for v, a, b in stays
                                    if v != 0 and a >= r.start and b <= hi and inst.hits(v, a, b))
        return cls(C, rounds)

    def is_workout(self, k: int, strict: bool = True) -> bool:
        """Every ``k`` consecutive rounds contain a sprint (and the last one is one)."""
        run = 0
        for r in self.rounds:
            run = 0 if r.is_sprint else run + 1
            if run >= k:
                return False
        if strict and self.rounds and not self.rounds[-1].is_sprint:
            return False
        return True


def _check_k(k, cap, what="k"):
    if not isinstance(k, int) or k < 1:
        raise InstanceError(f"{what} must be a positive integer", what)
    if k > cap:
        raise ResourceLimitError(f"{what} = {k} exceeds cap {cap}")


def solve_k_rounds(inst: Instance, k: int, cap: int = ROUNDS_CAP) -> Solution:
    """Best walk with at most ``k`` rounds (the last one may stop anywhere)."""
    _check_k(k, cap)
    inst = _cycle_instance(inst)
    _single_window(inst)
    cy = _Cycle(inst)
    val, visits = _rounds_dp(cy, k, 0, inst.budget, closed=False)
    if visits is None:
        visits = [(0, 0)]
    walk = Walk.of(visits)
    rep = validate_walk(inst, walk)
    if not rep.valid or rep.profit < max(val, 0):
        raise AssertionError(f"k-round walk failed validation: {rep} vs {val}")
    return Solution(rep.profit, walk, "cycle-kround", {"k": k})


def _workout(inst: Instance, k: int, tail_rounds: int = 0):
    cy = _Cycle(inst)
    C, B = cy.C, cy.B
    times = [0] + [x for x in cy.cand if x >= C]
    times = sorted(set(times))
    excl = {t: (cy.sprint_hits(t - C) if t >= C else frozenset()) for t in times}

    def end_bonus(t):
        # the walk may idle at vertex 0 after its last sprint; that adds no round
        if cy.hit(0, t, B) and 0 not in excl[t]:
            return cy.profit[0]
        return 0

    def block(t, t2):
        s = t2 - C
        hs = excl[t2]
        gain = sum(cy.profit[i] for i in hs if i not in excl[t])
        alone = gain
        if 0 not in hs and 0 not in excl[t] and cy.hit(0, t, s):
            alone += cy.profit[0]
        best, visits = alone, [(0, t)] + ([(0, s)] if s > t else [])
        if k >= 2:
            val, pv = _rounds_dp(cy, k - 1, t, s, True, excl[t] | hs)
            if pv is not None and val + gain > best:
                best, visits = val + gain, pv
        visits = list(visits)
        for j in range(1, cy.n):
            visits.append((j, s + cy.pos[j]))
        visits.append((0, t2))
        return best, visits

    best = {0: (0, None)}
    for t2 in times:
        if t2 < C:
            continue
        cands = []
        for t in times:
            if t > t2 - C:
                break
            if t in best:
                cands.append((best[t][0] + block(t, t2)[0], t))
        if cands:
            v, t = max(cands)
            best[t2] = (v, t)
    final = (-1, 0, "end")
    for t, (v, _) in best.items():
        if v + end_bonus(t) > final[0]:
            final = (v + end_bonus(t), t, "end")
        if tail_rounds:
            tv, _ = _rounds_dp(cy, tail_rounds, t, B, False, excl[t])
            if tv >= 0 and v + tv > final[0]:
                final = (v + tv, t, "tail")
    value, t_end, how = final
    chain = []
    t = t_end
    while t:
        prev = best[t][1]
        chain.append((prev, t))
        t = prev
    chain.reverse()
    visits = [(0, 0)]
    for t, t2 in chain:
        _, bv = block(t, t2)
        visits.extend(bv[1:] if bv[0] == visits[-1] else bv)
    if how == "end" and end_bonus(t_end):
        idle = max(t_end, cy.W[0].release)
        if idle > t_end:
            visits.append((0, idle))
    if how == "tail":
        _, tv = _rounds_dp(cy, tail_rounds, t_end, B, False, excl[t_end])
        visits.extend(tv[1:] if tv[0] == visits[-1] else tv)
    return value, Walk.of(_dedupe(visits))


def _dedupe(visits):
    out = []
    for v in visits:
        if out and out[-1] == v:
            continue
        out.append(v)
    return out


def solve_k_workout(inst: Instance, k: int, cap: int = WORKOUT_CAP, tail: bool = False) -> Solution:
    """Best walk in which every ``k`` consecutive rounds include a sprint.

    With ``tail`` the walk may finish with up to ``k - 1`` further rounds
    that need not end in a sprint.
    """
    _check_k(k, cap)
    inst = _cycle_instance(inst)
    _single_window(inst)
    value, walk = _workout(inst, k, k - 1 if tail else 0)
    rep = validate_walk(inst, walk)
    if not rep.valid or rep.profit < value:
        raise AssertionError(f"workout walk failed validation: {rep} vs {value}")
    return Solution(rep.profit, walk, "cycle-workout", {"k": k})


def ptas_op_1tw_cycle(inst: Instance, epsilon, cap: int = WORKOUT_CAP) -> Solution:
    """(1 + epsilon)-approximation through 2k-workouts, k - 1 = ceil(1/epsilon)."""
    if not epsilon > 0:
        raise InstanceError("epsilon must be positive", "epsilon")
    k = math.ceil(1 / epsilon) + 1
    _check_k(2 * k, cap, "2k")
    inst = _cycle_instance(inst)
    _single_window(inst)
    work, tm = compress_deadlines(inst)
    value, walk = _workout(work, 2 * k, 2 * k - 1)
    walk = tm.map_walk(inst, walk)
    rep = validate_walk(inst, walk)
    if not rep.valid or rep.profit < value:
        raise AssertionError(f"ptas walk failed validation: {rep} vs {value}")
    return Solution(rep.profit, walk, "cycle-ptas", {"epsilon": float(epsilon), "rounds": 2 * k})
