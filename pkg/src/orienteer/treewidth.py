"""Orienteering on graphs of bounded treewidth.

An optimal walk traverses every edge at most twice, so it is described by a
connected edge multiset H containing the start s whose odd-degree vertices
are either none (a closed walk) or exactly {s, x} (a walk from s to x).
The DP runs over a nice tree decomposition with s added to every bag.  A state
at a node records which bag vertices are used, how they are connected by the
partial solution (a partition), the degree parity of each used bag vertex and
whether a forgotten vertex already took the role of the odd end x.  Each state
maps a profit to the cheapest cost reaching it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .errors import InstanceError, ResourceLimitError
from .model import GENERAL, TREE, Instance, Solution, Walk, require, validate_walk

WIDTH_CAP = 6

LEAF = "leaf"
INTRODUCE = "introduce"
INTRODUCE_EDGE = "introduce_edge"
FORGET = "forget"
JOIN = "join"


@dataclass
class NiceDecomposition:
    kind: list = field(default_factory=list)
    bag: list = field(default_factory=list)
    children: list = field(default_factory=list)
    label: list = field(default_factory=list)  # vertex for introduce/forget, (u, v, cost) for edges
    root: int = -1
    start: int = 0

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bag) - 1

    def add(self, kind, bag, children=(), label=None):
        self.kind.append(kind)
        self.bag.append(frozenset(bag))
        self.children.append(list(children))
        self.label.append(label)
        return len(self.kind) - 1

    def postorder(self):
        out, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                out.append(t)
                continue
            stack.append((t, True))
            for c in self.children[t]:
                stack.append((c, False))
        return out

    def __len__(self):
        return len(self.kind)


def _raw_decomposition(inst: Instance):
    """Bags and tree edges, either supplied or from the min-fill heuristic."""
    if inst.decomposition is not None:
        bags = [frozenset(b) for b in inst.decomposition.bags]
        tree = [tuple(p) for p in inst.decomposition.tree]
        _check_decomposition(inst, bags, tree)
        return bags, tree
    g = nx.Graph()
    g.add_nodes_from(range(inst.n))
    g.add_edges_from((e.u, e.v) for e in inst.edges)
    _, dec = treewidth_min_fill_in(g)
    nodes = list(dec.nodes)
    index = {b: k for k, b in enumerate(nodes)}
    tree = [(index[a], index[b]) for a, b in dec.edges]
    # join the pieces of a disconnected graph
    comps = list(nx.connected_components(dec))
    for a, b in zip(comps, comps[1:]):
        tree.append((index[next(iter(a))], index[next(iter(b))]))
    return [frozenset(b) for b in nodes], tree


def _check_decomposition(inst, bags, tree):
    m = len(bags)
    if m == 0:
        raise InstanceError("decomposition has no bags", "decomposition.bags")
    for k, b in enumerate(bags):
        for v in b:
            if not 0 <= v < inst.n:
                raise InstanceError(f"bag {k} names unknown vertex {v}", "decomposition.bags")
    g = nx.Graph()
    g.add_nodes_from(range(m))
    for a, b in tree:
        if not (0 <= a < m and 0 <= b < m):
            raise InstanceError(f"tree edge ({a}, {b}) names an unknown bag", "decomposition.tree")
        g.add_edge(a, b)
    if g.number_of_edges() != m - 1 or not nx.is_connected(g):
        raise InstanceError("decomposition tree is not a tree", "decomposition.tree")
    for v in range(inst.n):
        holders = [k for k, b in enumerate(bags) if v in b]
        if not holders:
            raise InstanceError(f"vertex {v} is in no bag", "decomposition.bags")
        if not nx.is_connected(g.subgraph(holders)):
            raise InstanceError(f"bags containing vertex {v} are not connected",
                                "decomposition.bags")
    for e in inst.edges:
        if not any(e.u in b and e.v in b for b in bags):
            raise InstanceError(f"no bag contains edge ({e.u}, {e.v})", "decomposition.bags")


def build_nice_decomposition(inst: Instance, cap: int = WIDTH_CAP) -> NiceDecomposition:
    """Nice decomposition with s in every bag and one introduce-edge node per edge."""
    inst = require(inst, TREE, GENERAL)
    s = inst.start
    bags, tree = _raw_decomposition(inst)
    bags = [b | {s} for b in bags]
    if max(len(b) for b in bags) - 1 > cap:
        raise ResourceLimitError(f"decomposition width {max(len(b) for b in bags) - 1} "
                                 f"exceeds cap {cap}")
    adj = defaultdict(list)
    for a, b in tree:
        adj[a].append(b)
        adj[b].append(a)
    nd = NiceDecomposition(start=s)

    def chain(node, have, want):
        for v in sorted(have - want):
            have = have - {v}
            node = nd.add(FORGET, have, [node], v)
        for v in sorted(want - have):
            have = have | {v}
            node = nd.add(INTRODUCE, have, [node], v)
        return node

    # iterative post-order over the raw tree rooted at bag 0
    parent = {0: None}
    order = [0]
    for k in order:
        for c in adj[k]:
            if c not in parent:
                parent[c] = k
                order.append(c)
    built = {}
    for k in reversed(order):
        kids = [c for c in adj[k] if parent.get(c) == k]
        if not kids:
            node = chain(nd.add(LEAF, {s}), frozenset({s}), bags[k])
        else:
            subs = [chain(built[c], bags[c], bags[k]) for c in kids]
            node = subs[0]
            for other in subs[1:]:
                node = nd.add(JOIN, bags[k], [node, other])
        built[k] = node
    nd.root = chain(built[0], bags[0], frozenset({s}))
    _insert_edges(inst, nd)
    return nd


def _insert_edges(inst, nd):
    top = {}
    for t in range(len(nd)):
        if nd.kind[t] == FORGET:
            top[nd.label[t]] = (t, nd.children[t][0])
    s = nd.start
    for e in inst.edges:
        u, v = e.u, e.v
        if u == s:
            u, v = v, u
        if u == s:
            continue  # self-loop on s cannot occur in a valid instance
        if v != s and v not in nd.bag[top[u][1]]:
            u, v = v, u
        forget, below = top[u]
        if v not in nd.bag[below]:
            raise InstanceError(f"no bag contains edge ({e.u}, {e.v})", "decomposition.bags")
        node = nd.add(INTRODUCE_EDGE, nd.bag[below], [below], (e.u, e.v, e.cost))
        nd.children[forget] = [node]
        top[u] = (forget, node)


# ---------------------------------------------------------------- DP


def _canon(xs, labels):
    remap = {}
    out = []
    for lab in labels:
        if lab not in remap:
            remap[lab] = len(remap)
        out.append(remap[lab])
    return tuple(out)


def _merge_labels(labels, a, b):
    la, lb = labels[a], labels[b]
    if la == lb:
        return labels
    return tuple(la if x == lb else x for x in labels)


class _DP:
    def __init__(self, inst, nd, profits, allowed, budget):
        self.inst = inst
        self.nd = nd
        self.pi = profits
        self.allowed = allowed
        self.B = budget
        self.s = nd.start
        self.tables = [None] * len(nd)
        self.max_states = 0

    def put(self, table, state, p, c):
        if c > self.B:
            return
        row = table.setdefault(state, {})
        if c < row.get(p, self.B + 1):
            row[p] = c

    # -- transitions: child state -> [(state, dprofit, dcost, choice)]

    def t_introduce(self, t, state):
        v = self.nd.label[t]
        xs, labels, par, end = state
        yield state, 0, 0, 0
        if v in self.allowed:
            k = sum(1 for x in xs if x < v)
            new_labels = labels[:k] + (max(labels, default=-1) + 1,) + labels[k:]
            nxs = xs[:k] + (v,) + xs[k:]
            yield ((nxs, _canon(nxs, new_labels), par[:k] + (0,) + par[k:], end),
                   self.pi[v], 0, 1)

    def t_edge(self, t, state):
        u, v, c = self.nd.label[t]
        xs, labels, par, end = state
        yield state, 0, 0, 0
        if u in xs and v in xs:
            iu, iv = xs.index(u), xs.index(v)
            merged = _canon(xs, _merge_labels(labels, iu, iv))
            flipped = tuple(p ^ 1 if k in (iu, iv) else p for k, p in enumerate(par))
            yield (xs, merged, flipped, end), 0, c, 1
            yield (xs, merged, par, end), 0, 2 * c, 2

    def t_forget(self, t, state):
        w = self.nd.label[t]
        xs, labels, par, end = state
        if w not in xs:
            yield state, 0, 0, 0
            return
        k = xs.index(w)
        if labels.count(labels[k]) < 2:
            return
        if par[k]:
            if end:
                return
            end = 1
        nxs = xs[:k] + xs[k + 1:]
        yield (nxs, _canon(nxs, labels[:k] + labels[k + 1:]), par[:k] + par[k + 1:], end), 0, 0, 1

    def join_state(self, a, b):
        xs, la, pa, ea = a
        _, lb, pb, eb = b
        if ea + eb > 1:
            return None
        labels = la
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                if lb[i] == lb[j]:
                    labels = _merge_labels(labels, i, j)
        return (xs, _canon(xs, labels), tuple(x ^ y for x, y in zip(pa, pb)), ea + eb)

    def run(self):
        nd = self.nd
        for t in nd.postorder():
            kind = nd.kind[t]
            table = {}
            if kind == LEAF:
                self.put(table, ((self.s,), (0,), (0,), 0), self.pi[self.s], 0)
            elif kind == JOIN:
                left, right = (self.tables[c] for c in nd.children[t])
                by_x = defaultdict(list)
                for st, row in right.items():
                    by_x[st[0]].append((st, row))
                for sa, ra in left.items():
                    shared = sum(self.pi[x] for x in sa[0])
                    for sb, rb in by_x.get(sa[0], ()):
                        st = self.join_state(sa, sb)
                        if st is None:
                            continue
                        for p1, c1 in ra.items():
                            for p2, c2 in rb.items():
                                self.put(table, st, p1 + p2 - shared, c1 + c2)
            else:
                step = {INTRODUCE: self.t_introduce, INTRODUCE_EDGE: self.t_edge,
                        FORGET: self.t_forget}[kind]
                child = self.tables[nd.children[t][0]]
                for st, row in child.items():
                    for ns, dp, dc, _ in step(t, st):
                        for p, c in row.items():
                            self.put(table, ns, p + dp, c + dc)
            self.tables[t] = table
            self.max_states = max(self.max_states, len(table))
        return self.tables[nd.root]

    def best(self):
        root = self.run()
        best = None
        for st, row in root.items():
            xs, labels, par, end = st
            if par[0] != end:
                continue
            for p, c in row.items():
                if best is None or (p, -c) > (best[0], -best[1]):
                    best = (p, c, st)
        return best

    def edges_for(self, best):
        """Edge multiset of an optimal solution, re-derived top-down."""
        p, c, st = best
        out = []
        todo = [(self.nd.root, st, p, c)]
        nd = self.nd
        while todo:
            t, st, p, c = todo.pop()
            kind = nd.kind[t]
            if kind == LEAF:
                continue
            if kind == JOIN:
                a, b = nd.children[t]
                found = self._split_join(a, b, st, p, c)
                todo.extend(found)
                continue
            step = {INTRODUCE: self.t_introduce, INTRODUCE_EDGE: self.t_edge,
                    FORGET: self.t_forget}[kind]
            child = nd.children[t][0]
            hit = None
            for cs, row in self.tables[child].items():
                for ns, dp, dc, choice in step(t, cs):
                    if ns != st:
                        continue
                    if row.get(p - dp) == c - dc:
                        hit = (cs, p - dp, c - dc, choice)
                        break
                if hit:
                    break
            if hit is None:
                raise AssertionError("treewidth reconstruction failed")
            cs, cp, cc, choice = hit
            if kind == INTRODUCE_EDGE and choice:
                u, v, w = nd.label[t]
                out.extend([(u, v, w)] * choice)
            todo.append((child, cs, cp, cc))
        return out

    def _split_join(self, a, b, st, p, c):
        ta, tb = self.tables[a], self.tables[b]
        shared = sum(self.pi[x] for x in st[0])
        for sa, ra in ta.items():
            if sa[0] != st[0]:
                continue
            for sb, rb in tb.items():
                if sb[0] != st[0] or self.join_state(sa, sb) != st:
                    continue
                for p1, c1 in ra.items():
                    p2 = p + shared - p1
                    if rb.get(p2) == c - c1:
                        return [(a, sa, p1, c1), (b, sb, p2, c - c1)]
        raise AssertionError("treewidth join reconstruction failed")


def euler_walk(s, edges):
    """Timed walk from s using every edge of the multiset once."""
    if not edges:
        return [(s, 0)]
    adj = defaultdict(list)
    for k, (u, v, c) in enumerate(edges):
        adj[u].append((v, c, k))
        adj[v].append((u, c, k))
    used = [False] * len(edges)
    stack = [(s, 0)]
    path = []
    while stack:
        v, c = stack[-1]
        while adj[v] and used[adj[v][-1][2]]:
            adj[v].pop()
        if adj[v]:
            w, cost, k = adj[v].pop()
            used[k] = True
            stack.append((w, cost))
        else:
            path.append(stack.pop())
    path.reverse()
    visits = []
    t = 0
    for v, c in path:
        t += c if visits else 0
        visits.append((v, t))
    return visits


def _tw_core(inst, nd, profits, allowed):
    dp = _DP(inst, nd, profits, allowed, inst.budget)
    best = dp.best()
    edges = dp.edges_for(best)
    visits = euler_walk(nd.start, edges)
    return best[0], Walk.of(visits), dp.max_states


def _prepare(inst, dec):
    inst = require(inst, TREE, GENERAL)
    if inst.has_windows:
        raise InstanceError("time windows are not supported by the treewidth solver", "vertices")
    if dec is None:
        dec = build_nice_decomposition(inst)
    elif dec.start != inst.start:
        raise InstanceError("decomposition was built for another start vertex", "decomposition")
    return inst, dec


def solve_tw(inst: Instance, dec: NiceDecomposition | None = None) -> Solution:
    """Exact optimum by DP over a nice tree decomposition."""
    inst, dec = _prepare(inst, dec)
    value, walk, states = _tw_core(inst, dec, inst.profits, set(range(inst.n)))
    rep = validate_walk(inst, walk)
    if not rep.valid or rep.profit != value:
        raise AssertionError(f"treewidth witness mismatch: {rep} vs {value}")
    return Solution(value, walk, "tw-dp", {"width": dec.width, "max_states": states})


def approx_tw(inst: Instance, dec: NiceDecomposition | None = None, epsilon=0.5) -> Solution:
    """(1 + epsilon)-approximation through profit scaling."""
    if not epsilon > 0:
        raise InstanceError("epsilon must be positive", "epsilon")
    inst, dec = _prepare(inst, dec)
    n = inst.n
    if n < 1 + 1 / epsilon:
        from .oracle import oracle_op
        sol = oracle_op(inst)
        return Solution(sol.profit, sol.walk, "tw-approx", {"method": "exhaustive"})
    profits = inst.profits
    s = inst.start
    best = None
    for pmax in sorted(set(profits)):
        if pmax <= 0 or pmax < profits[s]:
            continue
        allowed = {v for v in range(n) if profits[v] <= pmax}
        scaled = [n * n * p // pmax + 1 for p in profits]
        _, walk, _ = _tw_core(inst, dec, scaled, allowed)
        rep = validate_walk(inst, walk)
        if not rep.valid:
            raise AssertionError(f"scaled walk invalid: {rep}")
        if best is None or rep.profit > best[0]:
            best = (rep.profit, walk)
    if best is None:
        walk = Walk.of([(s, 0)])
        best = (validate_walk(inst, walk).profit, walk)
    return Solution(best[0], best[1], "tw-approx", {"method": "scaling"})
