"""Instances, walks, walk scoring and the JSON exchange format.

All times, costs and profits are Python ints.  A walk is a list of
``(vertex, time)`` visits where a movement step takes exactly the edge cost
and waiting is an explicit repeated visit of the same vertex.  A vertex is
collected when one of its stays (maximal run of visits at that vertex)
intersects one of its time windows; in an instance without any windows every
visited vertex is collected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import InstanceError

INT63 = 2**63 - 1

DIRECTED_PATH = "directed_path"
DIRECTED_CYCLE = "directed_cycle"
UNDIRECTED_PATH = "undirected_path"
TREE = "tree"
GENERAL = "general"
TOPOLOGIES = (DIRECTED_PATH, DIRECTED_CYCLE, UNDIRECTED_PATH, TREE, GENERAL)
DIRECTED = frozenset({DIRECTED_PATH, DIRECTED_CYCLE})


class TimeWindow(NamedTuple):
    release: int
    deadline: int


@dataclass(frozen=True)
class VertexSpec:
    profit: int
    windows: tuple = ()


@dataclass(frozen=True)
class EdgeSpec:
    u: int
    v: int
    cost: int
    active: Optional[tuple] = None  # None means always active

    def admits(self, depart: int) -> bool:
        """True if a traversal departing at ``depart`` fits one activity interval."""
        if self.active is None:
            return True
        arrive = depart + self.cost
        return any(a <= depart and arrive <= b for a, b in self.active)

    def earliest_departure(self, t: int) -> Optional[int]:
        """Earliest departure >= t whose traversal fits an activity interval."""
        if self.active is None:
            return t
        for a, b in self.active:
            start = max(a, t)
            if start + self.cost <= b:
                return start
        return None


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple
    tree: tuple  # (parent, child) index pairs


@dataclass(frozen=True)
class Instance:
    topology: str
    n: int
    start: int
    budget: int
    vertices: tuple
    edges: tuple
    decomposition: Optional[TreeDecomposition] = None
    meta: Optional[dict] = field(default=None, compare=False)

    @property
    def directed(self) -> bool:
        return self.topology in DIRECTED

    @cached_property
    def has_windows(self) -> bool:
        return any(v.windows for v in self.vertices)

    @cached_property
    def is_dynamic(self) -> bool:
        return any(e.active is not None for e in self.edges)

    @cached_property
    def edge_map(self) -> dict:
        out = {}
        for e in self.edges:
            out[(e.u, e.v)] = e
            if not self.directed:
                out[(e.v, e.u)] = e
        return out

    @cached_property
    def neighbors(self) -> list:
        adj = [[] for _ in range(self.n)]
        for (u, v), e in self.edge_map.items():
            adj[u].append((v, e))
        for lst in adj:
            lst.sort(key=lambda x: x[0])
        return adj

    @property
    def profits(self) -> list:
        return [v.profit for v in self.vertices]

    def collectible(self, v: int) -> bool:
        return not self.has_windows or bool(self.vertices[v].windows)

    def hits(self, v: int, a: int, b: int) -> bool:
        """Does a stay at ``v`` over ``[a, b]`` collect it?"""
        if not self.has_windows:
            return True
        return any(r <= b and a <= d for r, d in self.vertices[v].windows)

    def replace(self, **changes) -> "Instance":
        data = {f: getattr(self, f) for f in
                ("topology", "n", "start", "budget", "vertices", "edges", "decomposition", "meta")}
        data.update(changes)
        return Instance(**data)


@dataclass(frozen=True)
class Walk:
    visits: tuple

    @classmethod
    def of(cls, visits: Iterable) -> "Walk":
        return cls(tuple((int(v), int(t)) for v, t in visits))

    def __len__(self):
        return len(self.visits)

    def stays(self) -> list:
        """Maximal runs at one vertex as ``(vertex, first_time, last_time)``."""
        out = []
        for v, t in self.visits:
            if out and out[-1][0] == v:
                out[-1][2] = t
            else:
                out.append([v, t, t])
        return [tuple(s) for s in out]


@dataclass
class WalkReport:
    valid: bool
    cost: int = 0
    collected: frozenset = frozenset()
    profit: int = 0
    violation: Optional[str] = None

    def to_json(self) -> dict:
        return {"valid": self.valid, "cost": self.cost, "collected": sorted(self.collected),
                "profit": self.profit, "violation": self.violation}


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.valid


@dataclass
class Solution:
    profit: int
    walk: Optional[Walk]
    algorithm: str
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"profit": self.profit,
               "walk": walk_to_json(self.walk) if self.walk is not None else None,
               "algorithm": self.algorithm}
        out.update(self.extra)
        return out


def merge_windows(windows: Iterable, touching: bool = True) -> tuple:
    """Sort windows and merge overlapping ones.

    With ``touching`` (integer collection times) ``[1, 3]`` and ``[4, 5]`` merge
    too; edge activity intervals only merge when they share a point.
    """
    gap = 1 if touching else 0
    out = []
    for r, d in sorted(windows):
        if out and r <= out[-1][1] + gap:
            if d > out[-1][1]:
                out[-1][1] = d
        else:
            out.append([r, d])
    return tuple(TimeWindow(r, d) for r, d in out)


def clip_windows(windows: Iterable, budget: int) -> tuple:
    kept = [(max(r, 0), min(d, budget)) for r, d in windows if r <= budget and d >= 0 and r <= d]
    return merge_windows(kept)


def normalize(inst: Instance) -> Instance:
    """Clip windows to ``[0, B]``, drop the ones past ``B``, sort and merge."""
    vertices = tuple(VertexSpec(v.profit, clip_windows(v.windows, inst.budget))
                     for v in inst.vertices)
    edges = tuple(e if e.active is None else EdgeSpec(e.u, e.v, e.cost, merge_windows(e.active, False))
                  for e in inst.edges)
    if vertices == inst.vertices and edges == inst.edges:
        return inst
    return inst.replace(vertices=vertices, edges=edges)


def _expected_edges(topology: str, n: int) -> Optional[set]:
    if topology == DIRECTED_PATH:
        return {(i, i + 1) for i in range(n - 1)}
    if topology == DIRECTED_CYCLE:
        return {(i, (i + 1) % n) for i in range(n)}
    if topology == UNDIRECTED_PATH:
        return {(i, i + 1) for i in range(n - 1)}
    return None


def validate_instance(inst: Instance) -> ValidationReport:
    """Collect every invariant violation; never raises."""
    rep = ValidationReport()
    issues = rep.issues
    if inst.topology not in TOPOLOGIES:
        issues.append(f"unknown topology {inst.topology!r}")
        return rep
    if inst.n < 1:
        issues.append("instance needs at least one vertex")
        return rep
    if len(inst.vertices) != inst.n:
        issues.append(f"vertex count {len(inst.vertices)} != n = {inst.n}")
        return rep
    if not 0 <= inst.start < inst.n:
        issues.append(f"start {inst.start} out of range")
    if inst.budget < 0:
        issues.append("budget must be non-negative")
    if inst.topology in DIRECTED and inst.start != 0:
        issues.append("directed path/cycle instances must start at vertex 0")
    if inst.topology == DIRECTED_CYCLE and inst.n < 2:
        issues.append("topology mismatch: cycle requires n >= 2")

    def check_int(x, what):
        if not isinstance(x, int) or x < 0 or x > INT63:
            issues.append(f"overflow or invalid value at {what}: {x!r}")
            return False
        return True

    check_int(inst.budget, "budget")
    total_profit = 0
    for i, v in enumerate(inst.vertices):
        if check_int(v.profit, f"vertices[{i}].profit"):
            total_profit += v.profit
        prev = None
        for k, (r, d) in enumerate(v.windows):
            check_int(r, f"vertices[{i}].windows[{k}]")
            check_int(d, f"vertices[{i}].windows[{k}]")
            if r > d:
                issues.append(f"vertices[{i}].windows[{k}]: release > deadline ({r} > {d})")
            if prev is not None and r <= prev[1] + 1:
                issues.append(f"vertices[{i}].windows: unsorted or overlapping windows")
            prev = (r, d)
    if total_profit > INT63:
        issues.append("overflow: total profit exceeds 63 bits")

    seen = set()
    max_cost = 0
    for k, e in enumerate(inst.edges):
        if not (0 <= e.u < inst.n and 0 <= e.v < inst.n) or e.u == e.v:
            issues.append(f"edges[{k}]: bad endpoints ({e.u}, {e.v})")
            continue
        if check_int(e.cost, f"edges[{k}].cost"):
            max_cost = max(max_cost, e.cost)
        key = (e.u, e.v) if inst.directed else (min(e.u, e.v), max(e.u, e.v))
        if key in seen:
            issues.append(f"edges[{k}]: duplicate edge {key} (multigraphs unsupported)")
        seen.add(key)
        if e.active is not None:
            prev = None
            for a, b in e.active:
                check_int(a, f"edges[{k}].active")
                check_int(b, f"edges[{k}].active")
                if a > b:
                    issues.append(f"edges[{k}].active: start > end ({a} > {b})")
                if prev is not None and a <= prev[1]:
                    issues.append(f"edges[{k}].active: unsorted or overlapping intervals")
                prev = (a, b)
    if isinstance(inst.budget, int) and inst.budget + max_cost > INT63:
        issues.append("overflow: budget + max cost exceeds 63 bits")

    expected = _expected_edges(inst.topology, inst.n)
    if expected is not None:
        got = seen if inst.directed else {(min(u, v), max(u, v)) for u, v in seen}
        if got != expected:
            issues.append("topology mismatch: edge set does not match " + inst.topology)
    elif inst.topology == TREE:
        if len(seen) != inst.n - 1 or not _connected(inst.n, seen):
            issues.append("topology mismatch: tree must be connected and acyclic")
    if inst.decomposition is not None and inst.topology != GENERAL:
        issues.append("decomposition is only allowed for general graphs")
    return rep


def _connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def require(inst: Instance, *topologies: str) -> Instance:
    """Validate and normalize, checking the topology; raises InstanceError."""
    if topologies and inst.topology not in topologies:
        raise InstanceError(f"wrong topology {inst.topology!r}, expected one of {topologies}",
                            "topology")
    rep = validate_instance(inst)
    if not rep.valid:
        raise InstanceError("; ".join(rep.issues))
    return normalize(inst)


def validate_walk(inst: Instance, walk: Walk) -> WalkReport:
    """Check a canonical walk and score it.  Invalid walks report the first violation."""
    visits = walk.visits
    if not visits:
        return WalkReport(False, violation="empty walk")
    v0, t0 = visits[0]
    if v0 != inst.start:
        return WalkReport(False, violation=f"walk must start at vertex {inst.start}")
    if t0 < 0:
        return WalkReport(False, violation="negative start time")
    edge_map = inst.edge_map
    for k in range(len(visits)):
        v, t = visits[k]
        if not 0 <= v < inst.n:
            return WalkReport(False, violation=f"visit {k}: vertex {v} out of range")
        if k == 0:
            continue
        u, s = visits[k - 1]
        if u == v:
            if t <= s:
                return WalkReport(False, violation=f"visit {k}: wait must advance time")
            continue
        e = edge_map.get((u, v))
        if e is None:
            return WalkReport(False, violation=f"visit {k}: no edge ({u}, {v})")
        if t != s + e.cost:
            return WalkReport(False, violation=f"visit {k}: movement time mismatch")
        if not e.admits(s):
            return WalkReport(False, violation=f"visit {k}: edge inactive during traversal")
    last = visits[-1][1]
    if last > inst.budget:
        return WalkReport(False, violation="budget exceeded")
    collected = set()
    for v, a, b in walk.stays():
        if v not in collected and inst.hits(v, a, b):
            collected.add(v)
    profit = sum(inst.vertices[v].profit for v in collected)
    return WalkReport(True, cost=last - t0, collected=frozenset(collected), profit=profit)


def canonicalize_walk(inst: Instance, visits: Iterable) -> Walk:
    """Turn a walk whose moves may arrive late (``t' >= t + c``) into canonical form.

    Each late move departs as soon as its edge admits the traversal and the
    slack becomes an explicit wait at the arrival vertex.
    """
    out = []
    edge_map = inst.edge_map
    for k, (v, t) in enumerate(visits):
        v, t = int(v), int(t)
        if not out:
            out.append((v, t))
            continue
        u, s = out[-1]
        if u == v:
            out.append((v, t))
            continue
        e = edge_map.get((u, v))
        if e is None:
            raise InstanceError(f"no edge ({u}, {v})", f"visits[{k}]")
        depart = e.earliest_departure(s)
        if depart is None or depart + e.cost > t:
            raise InstanceError("move cannot arrive by the given time", f"visits[{k}]")
        if depart > s:
            out.append((u, depart))
        out.append((v, depart + e.cost))
        if depart + e.cost < t:
            out.append((v, t))
    return Walk.of(out)


def cycle_length(inst: Instance) -> int:
    if inst.topology != DIRECTED_CYCLE:
        raise InstanceError("cycle_length needs a directed cycle", "topology")
    return sum(e.cost for e in inst.edges)


def cycle_positions(inst: Instance) -> list:
    """Offsets ``d(v0, vi)`` along the cycle for every vertex."""
    em = inst.edge_map
    pos = [0] * inst.n
    for i in range(1, inst.n):
        pos[i] = pos[i - 1] + em[(i - 1, i)].cost
    return pos


def cycle_distance(inst: Instance, i: int, j: int) -> int:
    """Cost of the directed arc from ``i`` to ``j`` (0 when ``i == j``)."""
    if inst.topology != DIRECTED_CYCLE:
        raise InstanceError("cycle_distance needs a directed cycle", "topology")
    pos = cycle_positions(inst)
    d = pos[j] - pos[i]
    return d if d >= 0 else d + cycle_length(inst)


# ---------------------------------------------------------------- JSON


def _get(obj, key, path, kind=int, optional=False):
    if not isinstance(obj, dict):
        raise InstanceError("expected an object", path)
    if key not in obj:
        if optional:
            return None
        raise InstanceError(f"missing field {key!r}", f"{path}.{key}" if path else key)
    return _check(obj[key], f"{path}.{key}" if path else key, kind)


def _check(value, path, kind=int):
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InstanceError(f"expected an integer, got {value!r}", path)
        if value < 0:
            raise InstanceError("negative value", path)
        if value > INT63:
            raise InstanceError("overflow: value exceeds 63 bits", path)
    elif kind is list:
        if not isinstance(value, list):
            raise InstanceError("expected a list", path)
    elif kind is str:
        if not isinstance(value, str):
            raise InstanceError("expected a string", path)
    return value


def _intervals(value, path) -> tuple:
    _check(value, path, list)
    out = []
    for k, pair in enumerate(value):
        p = f"{path}[{k}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InstanceError("expected a [start, end] pair", p)
        out.append(TimeWindow(_check(pair[0], p), _check(pair[1], p)))
    return tuple(out)


def instance_from_json(data) -> Instance:
    topology = _get(data, "topology", "", str)
    if topology not in TOPOLOGIES:
        raise InstanceError(f"unknown topology {topology!r}", "topology")
    n = _get(data, "n", "")
    start = _get(data, "start", "")
    budget = _get(data, "budget", "")
    vertices = []
    for i, v in enumerate(_get(data, "vertices", "", list)):
        p = f"vertices[{i}]"
        profit = _get(v, "profit", p)
        windows = v.get("windows", [])
        vertices.append(VertexSpec(profit, _intervals(windows, p + ".windows")))
    edges = []
    for k, e in enumerate(_get(data, "edges", "", list)):
        p = f"edges[{k}]"
        active = e.get("active") if isinstance(e, dict) else None
        edges.append(EdgeSpec(_get(e, "u", p), _get(e, "v", p), _get(e, "cost", p),
                              None if active is None else _intervals(active, p + ".active")))
    dec = data.get("decomposition")
    decomposition = None
    if dec is not None:
        bags = tuple(tuple(_check(x, f"decomposition.bags[{k}]") for x in _check(b, f"decomposition.bags[{k}]", list))
                     for k, b in enumerate(_get(dec, "bags", "decomposition", list)))
        tree = tuple(tuple(_check(x, f"decomposition.tree[{k}]") for x in _check(b, f"decomposition.tree[{k}]", list))
                     for k, b in enumerate(_get(dec, "tree", "decomposition", list)))
        decomposition = TreeDecomposition(bags, tree)
    return Instance(topology, n, start, budget, tuple(vertices), tuple(edges), decomposition,
                    data.get("meta"))


def instance_to_json(inst: Instance) -> dict:
    out = {
        "topology": inst.topology,
        "n": inst.n,
        "start": inst.start,
        "budget": inst.budget,
        "vertices": [{"profit": v.profit, "windows": [list(w) for w in v.windows]}
                     for v in inst.vertices],
        "edges": [],
    }
    for e in inst.edges:
        item = {"u": e.u, "v": e.v, "cost": e.cost}
        if e.active is not None:
            item["active"] = [list(w) for w in e.active]
        out["edges"].append(item)
    if inst.decomposition is not None:
        out["decomposition"] = {"bags": [list(b) for b in inst.decomposition.bags],
                                "tree": [list(p) for p in inst.decomposition.tree]}
    if inst.meta:
        out["meta"] = inst.meta
    return out


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from exc


def parse_instance(text: str) -> Instance:
    return instance_from_json(_loads(text))


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst))


def walk_to_json(walk: Walk) -> dict:
    return {"visits": [[v, t] for v, t in walk.visits]}


def walk_from_json(data) -> Walk:
    visits = _get(data, "visits", "", list)
    out = []
    for k, pair in enumerate(visits):
        p = f"visits[{k}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InstanceError("expected a [vertex, time] pair", p)
        out.append((_check(pair[0], p), _check(pair[1], p)))
    return Walk(tuple(out))


def parse_walk(text: str) -> Walk:
    data = _loads(text)
    if isinstance(data, dict) and "walk" in data and "visits" not in data:
        data = data["walk"]  # accept a whole solution document
    return walk_from_json(data)


def serialize_walk(walk: Walk) -> str:
    return json.dumps(walk_to_json(walk))


def serialize_solution(sol: Solution) -> str:
    return json.dumps(sol.to_json())


def make_instance(topology: str, profits: Sequence[int], edges: Sequence, budget: int,
                  windows: Optional[Sequence] = None, start: int = 0, active=None,
                  meta=None) -> Instance:
    """Convenience constructor used by generators and tests.

    ``edges`` holds ``(u, v, cost)`` triples; ``windows[i]`` is a list of
    ``(r, d)`` pairs; ``active`` maps an edge index to its activity intervals.
    """
    n = len(profits)
    windows = windows or [()] * n
    vertices = tuple(VertexSpec(int(p), tuple(TimeWindow(int(r), int(d)) for r, d in w))
                     for p, w in zip(profits, windows))
    active = active or {}
    es = []
    for k, (u, v, c) in enumerate(edges):
        act = active.get(k)
        es.append(EdgeSpec(int(u), int(v), int(c),
                           None if act is None else tuple(TimeWindow(int(a), int(b)) for a, b in act)))
    return Instance(topology, n, start, int(budget), vertices, tuple(es), meta=meta)


def path_instance(costs, profits, windows, budget, directed=True, active=None) -> Instance:
    edges = [(i, i + 1, c) for i, c in enumerate(costs)]
    return make_instance(DIRECTED_PATH if directed else UNDIRECTED_PATH, profits, edges, budget,
                         windows, active=active)


def cycle_instance(costs, profits, windows, budget, active=None) -> Instance:
    n = len(costs)
    edges = [(i, (i + 1) % n, c) for i, c in enumerate(costs)]
    return make_instance(DIRECTED_CYCLE, profits, edges, budget, windows, active=active)
