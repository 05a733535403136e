"""Exact DP for the plain Orienteering Problem on trees.

For every vertex ``v`` and profit ``P`` the table keeps the cheapest walk
that starts at ``v``, stays in the subtree of ``v`` and collects exactly
``P``: once for walks that come back to ``v`` (even degree at ``v``) and once
for walks that may stop anywhere (odd degree).  Tables are sparse dicts and
entries above the budget are dropped.
"""

from __future__ import annotations

from .errors import InstanceError
from .model import TREE, EdgeSpec, Instance, Solution, VertexSpec, Walk, require, validate_walk


def _rooted(inst: Instance, root: int):
    adj = [[] for _ in range(inst.n)]
    for e in inst.edges:
        adj[e.u].append((e.v, e.cost))
        adj[e.v].append((e.u, e.cost))
    parent = [-1] * inst.n
    order = [root]
    children = [[] for _ in range(inst.n)]
    seen = {root}
    for v in order:
        for w, c in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                parent[w] = v
                children[v].append((w, c))
                order.append(w)
    return children, order


def binarize_tree(inst: Instance) -> Instance:
    """Give every vertex at most two children (rooted at the start).

    Extra vertices have profit 0 and hang off zero-cost edges; ``meta["origin"]``
    maps every vertex of the result to the vertex it stands for.
    """
    inst = require(inst, TREE)
    children, order = _rooted(inst, inst.start)
    if all(len(ch) <= 2 for ch in children):
        return inst
    vertices = list(inst.vertices)
    origin = list(range(inst.n))
    edges = []
    for v in order:
        ch = children[v]
        anchor = v
        rest = list(ch)
        while len(rest) > 2:
            w, c = rest.pop(0)
            edges.append(EdgeSpec(anchor, w, c))
            aux = len(vertices)
            vertices.append(VertexSpec(0, ()))
            origin.append(v)
            edges.append(EdgeSpec(anchor, aux, 0))
            anchor = aux
        for w, c in rest:
            edges.append(EdgeSpec(anchor, w, c))
    meta = dict(inst.meta or {})
    meta["origin"] = origin
    return Instance(TREE, len(vertices), inst.start, inst.budget, tuple(vertices), tuple(edges),
                    meta=meta)


def _add(table, p, c, B):
    if c <= B and c < table.get(p, B + 1):
        table[p] = c


def solve_tree(inst: Instance) -> Solution:
    """Maximum profit of a walk from the start within the budget."""
    inst = require(inst, TREE)
    if inst.has_windows:
        raise InstanceError("time windows are not supported on trees", "vertices")
    orig = inst
    work = binarize_tree(inst)
    origin = work.meta["origin"] if work is not orig else list(range(work.n))
    B = work.budget
    children, order = _rooted(work, work.start)
    closed = [None] * work.n
    opened = [None] * work.n
    for v in reversed(order):
        pv = work.vertices[v].profit
        ce = {pv: 0}
        cu = {pv: 0}
        for w, c in children[v]:
            ne, nu = dict(ce), dict(cu)
            for p1, c1 in ce.items():
                for p2, c2 in closed[w].items():
                    _add(ne, p1 + p2, c1 + c2 + 2 * c, B)
                    _add(nu, p1 + p2, c1 + c2 + 2 * c, B)
                for p2, c2 in opened[w].items():
                    _add(nu, p1 + p2, c1 + c2 + c, B)
            for p1, c1 in cu.items():
                for p2, c2 in closed[w].items():
                    _add(nu, p1 + p2, c1 + c2 + 2 * c, B)
            ce, cu = ne, nu
        closed[v], opened[v] = ce, cu
    s = work.start
    best = max(opened[s])
    visits = []
    _emit(work, children, closed, opened, s, best, True, 0, visits, B)
    mapped = []
    for v, t in visits:
        v = origin[v]
        if mapped and mapped[-1] == (v, t):
            continue
        mapped.append((v, t))
    walk = Walk.of(mapped)
    rep = validate_walk(orig, walk)
    if not rep.valid or rep.profit != best:
        raise AssertionError(f"tree witness mismatch: {rep} vs {best}")
    return Solution(best, walk, "tree-dp")


def _emit(work, children, closed, opened, v, p, is_open, t, visits, B):
    """Append the walk realising table entry (v, p, parity) starting at time t."""
    visits.append((v, t))
    target = (opened if is_open else closed)[v][p]
    plan = _split(work, children, closed, opened, v, p, is_open, target, B)
    last = None
    for w, c, pw, child_open in plan:
        if child_open:
            last = (w, c, pw)
            continue
        t = _emit(work, children, closed, opened, w, pw, False, t + c, visits, B) + c
        visits.append((v, t))
    if last is not None:
        w, c, pw = last
        t = _emit(work, children, closed, opened, w, pw, True, t + c, visits, B)
    return t


def _split(work, children, closed, opened, v, p, is_open, target, B):
    """Recover per-child choices (child, cost, profit, open?) for an entry."""
    ch = children[v]
    pv = work.vertices[v].profit
    # options per child: None (skip) or (profit, cost, open)
    def options(w, c, allow_open):
        out = [(0, 0, None)]
        for p2, c2 in closed[w].items():
            out.append((p2, c2 + 2 * c, False))
        if allow_open:
            for p2, c2 in opened[w].items():
                out.append((p2, c2 + c, True))
        return out

    def search(k, rem_p, rem_c, used_open):
        if k == len(ch):
            return [] if rem_p == 0 and rem_c == 0 else None
        w, c = ch[k]
        for p2, c2, op in options(w, c, is_open and not used_open):
            if p2 > rem_p or c2 > rem_c:
                continue
            tail = search(k + 1, rem_p - p2, rem_c - c2, used_open or bool(op))
            if tail is not None:
                head = [] if op is None else [(w, c, p2, op)]
                return head + tail
        return None

    plan = search(0, p - pv, target, False)
    if plan is None:
        raise AssertionError("tree DP reconstruction failed")
    return plan
