"""Random instances and the instance families of the hardness reductions.

Every reduction that has a certificate (3SAT, 3-partition) comes with a
witness builder, so a yes-instance can be checked with ``validate_walk``
without solving anything.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import InstanceError
from .model import (DIRECTED_CYCLE, DIRECTED_PATH, TOPOLOGIES, TREE, UNDIRECTED_PATH,
                    Instance, Walk, make_instance, merge_windows, require)

DEFAULTS = {
    "topology": DIRECTED_PATH,
    "n": 6,
    "cost_range": (1, 4),
    "profit_range": (0, 9),
    "windows_per_vertex": 1,
    "window_span": 6,
    "budget_factor": 1.0,
    "dynamic": False,
}


def _pair(value, name):
    try:
        lo, hi = (int(x) for x in value)
    except (TypeError, ValueError):
        raise InstanceError(f"{name} must be a pair of integers", name) from None
    if lo < 0 or lo > hi:
        raise InstanceError(f"{name} must satisfy 0 <= lo <= hi", name)
    return lo, hi


def _random_windows(rng, count, span, horizon):
    if count == 0 or horizon < 0:
        return []
    points = sorted(rng.sample(range(horizon + 1), min(2 * count, horizon + 1)))
    out = []
    for r, d in zip(points[::2], points[1::2]):
        d = min(d, r + span)
        if out and r <= out[-1][1] + 1:
            continue
        out.append((r, d))
    if not out:
        r = rng.randint(0, horizon)
        out.append((r, min(horizon, r + rng.randint(0, span))))
    return out


def _random_activity(rng, cost, horizon):
    """One or two intervals, each long enough for at least one traversal."""
    out = []
    t = 0
    for _ in range(rng.randint(1, 2)):
        if t + cost > horizon:
            break
        a = rng.randint(t, horizon - cost)
        b = rng.randint(a + cost, min(horizon, a + cost + max(1, horizon // 3)))
        out.append((a, b))
        t = b + 2
    return out or [(0, horizon)]


def gen_random(params: dict | None = None, seed: int = 0) -> Instance:
    """Seed-deterministic random instance; see ``DEFAULTS`` for the parameters."""
    p = dict(DEFAULTS)
    unknown = set(params or {}) - set(DEFAULTS)
    if unknown:
        raise InstanceError(f"unknown parameter(s): {', '.join(sorted(unknown))}", "params")
    p.update(params or {})
    topo = p["topology"]
    if topo not in TOPOLOGIES:
        raise InstanceError(f"unknown topology {topo!r}", "topology")
    n = int(p["n"])
    if n < 1 or (topo == DIRECTED_CYCLE and n < 2):
        raise InstanceError("n too small for topology", "n")
    clo, chi = _pair(p["cost_range"], "cost_range")
    plo, phi = _pair(p["profit_range"], "profit_range")
    wpv = int(p["windows_per_vertex"])
    span = int(p["window_span"])
    if wpv < 0 or span < 0:
        raise InstanceError("window parameters must be non-negative", "windows_per_vertex")
    if p["budget_factor"] < 0:
        raise InstanceError("budget_factor must be non-negative", "budget_factor")
    if topo == DIRECTED_CYCLE and chi == 0:
        raise InstanceError("cycle needs a positive cost range", "cost_range")

    rng = random.Random(seed)
    if topo in (DIRECTED_PATH, UNDIRECTED_PATH):
        pairs = [(i, i + 1) for i in range(n - 1)]
    elif topo == DIRECTED_CYCLE:
        pairs = [(i, (i + 1) % n) for i in range(n)]
    elif topo == TREE:
        pairs = [(rng.randrange(v), v) for v in range(1, n)]
    else:
        pairs = _partial_two_tree(rng, n)
    costs = [rng.randint(clo, chi) for _ in pairs]
    if topo == DIRECTED_CYCLE and sum(costs) == 0:
        costs[0] = max(1, chi)
    total = max(1, sum(costs))
    budget = int(round(p["budget_factor"] * total))
    profits = [rng.randint(plo, phi) for _ in range(n)]
    windows = [_random_windows(rng, wpv, span, budget) for _ in range(n)]
    active = None
    if p["dynamic"]:
        active = {k: _random_activity(rng, c, budget) for k, c in enumerate(costs)}
    start = 0 if topo in (DIRECTED_PATH, DIRECTED_CYCLE) else rng.randrange(n)
    edges = [(u, v, c) for (u, v), c in zip(pairs, costs)]
    inst = make_instance(topo, profits, edges, budget, windows, start=start, active=active)
    return require(inst)


def _partial_two_tree(rng, n):
    """Random partial 2-tree: grow a 2-tree, then drop some edges (keeping it connected)."""
    if n == 1:
        return []
    edges = [(0, 1)]
    tree = [(0, 1)]
    for v in range(2, n):
        a, b = rng.choice(edges)
        edges.extend([(a, v), (b, v)])
        tree.append((a, v))
    keep = set(tree)
    for e in edges:
        if e not in keep and rng.random() < 0.5:
            keep.add(e)
    return sorted(keep, key=lambda e: (e[1], e[0]))


# ---------------------------------------------------------------- line-TSP


def from_line_tsp(jobs, start_job: int = 0) -> Instance:
    """Undirected unit path from line-TSP jobs ``(x, r, d)``.

    Jobs are sorted by position; the walk starts at the ``start_job``-th job in
    that order.  Jobs sharing a position are joined by a single edge, and the
    filler vertices between distinct positions carry no windows.
    """
    jobs = [tuple(int(v) for v in j) for j in jobs]
    if not jobs:
        raise InstanceError("empty job list", "jobs")
    for k, (x, r, d) in enumerate(jobs):
        if r > d or r < 0:
            raise InstanceError(f"job {k} has an invalid window [{r}, {d}]", f"jobs[{k}]")
    order = sorted(range(len(jobs)), key=lambda k: (jobs[k][0], jobs[k][1], k))
    n = len(jobs)
    sq = n * n
    profits, windows, job_vertex = [], [], []
    prev_x = None
    for k in order:
        x, r, d = jobs[k]
        if prev_x is not None and x != prev_x:
            filler = (x - prev_x) * sq - 1
            profits.extend([0] * filler)
            windows.extend([()] * filler)
        job_vertex.append(len(profits))
        profits.append(1)
        windows.append(((sq * r, sq * d + n),))
        prev_x = x
    if not 0 <= start_job < n:
        raise InstanceError("start_job out of range", "start_job")
    budget = max(w[0][1] for w in windows if w)
    edges = [(i, i + 1, 1) for i in range(len(profits) - 1)]
    meta = {"n_jobs": n, "job_vertex": [job_vertex[order.index(k)] for k in range(n)]}
    return make_instance(UNDIRECTED_PATH, profits, edges, budget, windows,
                         start=job_vertex[start_job], meta=meta)


# ---------------------------------------------------------------- 3SAT


@dataclass
class Formula:
    n_vars: int
    clauses: list  # tuples of non-zero ints, DIMACS style

    def satisfied_by(self, assignment) -> bool:
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c)
                   for c in self.clauses)

    def solve(self):
        """Brute-force satisfying assignment or None (tiny formulas only)."""
        for bits in itertools.product((True, False), repeat=self.n_vars):
            if self.satisfied_by(bits):
                return list(bits)
        return None


def parse_dimacs(text: str) -> Formula:
    n_vars = None
    lits = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InstanceError(f"bad problem line: {line!r}", "dimacs")
            n_vars = int(parts[2])
            continue
        try:
            lits.extend(int(tok) for tok in line.split())
        except ValueError:
            raise InstanceError(f"bad clause line: {line!r}", "dimacs") from None
    if n_vars is None:
        raise InstanceError("missing 'p cnf' line", "dimacs")
    clauses, cur = [], []
    for lit in lits:
        if lit == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    return Formula(n_vars, clauses)


def random_3cnf(n_vars: int, n_clauses: int, seed: int = 0) -> Formula:
    rng = random.Random(seed)
    clauses = [tuple(rng.choice((1, -1)) * rng.randint(1, n_vars) for _ in range(3))
               for _ in range(n_clauses)]
    return Formula(n_vars, clauses)


class SatWitness:
    """Maps an assignment of the formula to a walk covering the cycle."""

    def __init__(self, formula, inst):
        self.formula = formula
        self.inst = inst

    def __call__(self, assignment) -> Walk:
        f = self.formula
        if not f.satisfied_by(assignment):
            raise InstanceError("assignment does not satisfy the formula", "assignment")
        n, m = f.n_vars, len(f.clauses)
        C = n + m
        targets = []
        for i in range(1, n + 1):
            base = 2 * i * C
            if assignment[i - 1]:
                targets.append((i - 1, base))
                for j, cl in enumerate(f.clauses, 1):
                    if i in cl:
                        targets.append((n + j - 1, base + n + j - i))
            else:
                for j, cl in enumerate(f.clauses, 1):
                    if -i in cl:
                        targets.append((n + j - 1, base + C - (m - j + i) - 1))
                targets.append((i - 1, base + C - 1))
        targets.sort(key=lambda x: x[1])
        return _chase(C, targets)


def _chase(C, targets):
    """Unit-cost cycle walk from (0, 0) that is at each target vertex at its time."""
    visits = [(0, 0)]
    v, t = 0, 0
    for w, when in targets:
        d = (w - v) % C
        if (v, t) == (w, when):
            continue
        if d == 0 and when > t:
            visits.append((w, when))
            v, t = w, when
            continue
        depart = when - d
        if depart < t:
            raise AssertionError("witness targets are not reachable in time")
        if depart > t:
            visits.append((v, depart))
        for step in range(1, d + 1):
            visits.append(((v + step) % C, depart + step))
        v, t = w, when
    return Walk.of(visits)


def from_3sat(formula: Formula):
    """Directed unit cycle whose COP is feasible iff the formula is satisfiable."""
    for k, cl in enumerate(formula.clauses):
        if len(cl) != 3:
            raise InstanceError(f"clause {k} has {len(cl)} literals, expected 3", f"clauses[{k}]")
        for lit in cl:
            if lit == 0 or abs(lit) > formula.n_vars:
                raise InstanceError(f"clause {k} names unknown variable {lit}", f"clauses[{k}]")
    n, m = formula.n_vars, len(formula.clauses)
    C = n + m
    if C < 2:
        raise InstanceError("formula too small to form a cycle", "clauses")
    points = [set() for _ in range(C)]
    for i in range(1, n + 1):
        points[i - 1] |= {2 * i * C, 2 * i * C + C - 1}
    for j, cl in enumerate(formula.clauses, 1):
        for lit in cl:
            i = abs(lit)
            if lit > 0:
                points[n + j - 1].add(2 * i * C + (n + j - i))
            else:
                points[n + j - 1].add(2 * i * C + C - (m - j + i) - 1)
    budget = 2 * n * C + C - 1
    # adjacent time points become one interval
    windows = [merge_windows((t, t) for t in ps) for ps in points]
    edges = [(k, (k + 1) % C, 1) for k in range(C)]
    inst = make_instance(DIRECTED_CYCLE, [1] * C, edges, budget, windows,
                         meta={"n_vars": n, "n_clauses": m})
    return require(inst), SatWitness(formula, inst)


# ---------------------------------------------------------------- 3-partition


class PartitionWitness:
    def __init__(self, items, T, legs, controls, inst):
        self.items = items
        self.T = T
        self.legs = legs  # per item: list of leg vertices from s outward
        self.controls = controls
        self.inst = inst

    def __call__(self, triplets) -> Walk:
        """``triplets``: m groups of item indices, each summing to T."""
        used = sorted(k for g in triplets for k in g)
        if used != list(range(len(self.items))):
            raise InstanceError("triplets must use every item exactly once", "triplets")
        visits = [(0, 0)]
        t = 0
        for i, group in enumerate(triplets, 1):
            if sum(self.items[k] for k in group) != self.T:
                raise InstanceError(f"triplet {i} does not sum to T", "triplets")
            for k in group:
                leg = self.legs[k]
                for v in leg:
                    t += 1
                    visits.append((v, t))
                for v in list(reversed(leg[:-1])) + [0]:
                    t += 1
                    visits.append((v, t))
            c = self.controls[i - 1]
            visits.append((c, t + 1))
            visits.append((0, t + 2))
            t += 2
        return Walk.of(visits)


def from_3partition(items):
    """Dynamic spider; profit m + mT + 1 is reachable iff I has a 3-partition."""
    items = [int(x) for x in items]
    if not items or len(items) % 3:
        raise InstanceError("need 3m integers", "items")
    m = len(items) // 3
    if sum(items) % m:
        raise InstanceError("sum is not divisible by m", "items")
    T = sum(items) // m
    for k, x in enumerate(items):
        # T/4 < x < T/2 already forces groups of exactly three items
        if not 4 * x > T or not 2 * x < T:
            raise InstanceError(f"item {k} = {x} is not strictly between T/4 and T/2 (T = {T})",
                                f"items[{k}]")
    horizon = 2 * m * T + 2 * m
    edges, active, legs = [], {}, []
    nxt = 1
    for x in items:
        leg = list(range(nxt, nxt + x))
        nxt += x
        prev = 0
        for v in leg:
            active[len(edges)] = [(0, horizon)]
            edges.append((prev, v, 1))
            prev = v
        legs.append(leg)
    controls = []
    for i in range(1, m + 1):
        a = 2 * i * T + 2 * (i - 1)
        active[len(edges)] = [(a, a + 2)]
        edges.append((0, nxt, 1))
        controls.append(nxt)
        nxt += 1
    inst = make_instance(TREE, [1] * nxt, edges, horizon, active=active,
                         meta={"m": m, "T": T, "target": m + m * T + 1})
    inst = require(inst)
    return inst, PartitionWitness(items, T, legs, controls, inst)


def find_3partition(items):
    """Brute-force triplets (tiny inputs only) or None."""
    m = len(items) // 3
    T = sum(items) // m if m else 0

    def rec(left):
        if not left:
            return []
        first = left[0]
        for a, b in itertools.combinations(left[1:], 2):
            if items[first] + items[a] + items[b] == T:
                rest = [k for k in left if k not in (first, a, b)]
                sub = rec(rest)
                if sub is not None:
                    return [(first, a, b)] + sub
        return None

    return rec(list(range(len(items))))


# ---------------------------------------------------------------- knapsack


def from_knapsack(items, capacity: int) -> Instance:
    """Star rooted at a zero-profit start; item i hangs off an edge of cost size/2."""
    profits = [0]
    edges = []
    for k, (size, value) in enumerate(items):
        if size < 0 or value < 0:
            raise InstanceError(f"item {k} has a negative field", f"items[{k}]")
        if size % 2:
            raise InstanceError(f"item {k}: odd size {size}", f"items[{k}].size")
        edges.append((0, k + 1, size // 2))
        profits.append(value)
    if capacity < 0:
        raise InstanceError("capacity must be non-negative", "capacity")
    return require(make_instance(TREE, profits, edges, capacity))
