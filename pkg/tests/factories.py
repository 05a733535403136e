"""Seeded random instances for the oracle-backed tests."""

import random

from orienteer.model import cycle_instance, make_instance, merge_windows, path_instance


def rand_path(rng, n_max=6, b_max=24, c_max=4, w_max=3):
    n = rng.randint(1, n_max)
    B = rng.randint(0, b_max)
    costs = [rng.randint(0, c_max) for _ in range(n - 1)]
    wins = []
    for _ in range(n):
        w = []
        for _ in range(rng.randint(0, w_max)):
            r = rng.randint(0, B)
            w.append((r, rng.randint(r, min(B, r + rng.randint(0, 8)))))
        wins.append(merge_windows(w))
    return path_instance(costs, [rng.randint(0, 9) for _ in range(n)], wins, B)


def rand_cycle(rng, n_max=5, c_max=3, b_max=30, long_ok=True, bare=0.15, profits=True):
    """Single-window cycle; ``long_ok=False`` keeps every window shorter than C."""
    n = rng.randint(2, n_max)
    costs = [rng.randint(0, c_max) for _ in range(n)]
    if sum(costs) == 0:
        costs[0] = 1
    C = sum(costs)
    B = rng.randint(0, b_max)
    wins = []
    for _ in range(n):
        if rng.random() < bare:
            wins.append([])
            continue
        r = rng.randint(0, B)
        length = rng.randint(0, 2 * C if long_ok else C - 1)
        wins.append([(r, min(B, r + length))])
    if not any(wins):
        wins[0] = [(0, 0)]
    prof = [rng.randint(0, 9) if profits else 1 for _ in range(n)]
    return cycle_instance(costs, prof, wins, B)


def rand_cycle_scaled(rng, n_max=5, c_max=3, b_mul=3):
    """Budget tied to the cycle length (at most a few rounds)."""
    n = rng.randint(2, n_max)
    costs = [rng.randint(0, c_max) for _ in range(n)]
    if sum(costs) == 0:
        costs[0] = 1
    C = sum(costs)
    B = rng.randint(0, b_mul * C)
    wins = []
    for _ in range(n):
        if rng.random() < 0.15:
            wins.append([])
            continue
        r = rng.randint(0, B)
        wins.append([(r, min(B, r + rng.randint(0, 2 * C)))])
    if not any(wins):
        wins[0] = [(0, 0)]
    return cycle_instance(costs, [rng.randint(0, 9) for _ in range(n)], wins, B)


def rand_cycle_fpt(rng, n_max=5, k_max=3):
    """Cycle with at most ``k_max`` long windows."""
    while True:
        inst = rand_cycle(rng, n_max=n_max)
        C = sum(e.cost for e in inst.edges)
        long_ = sum(1 for v in inst.vertices
                    if v.profit and v.windows and v.windows[0][1] - v.windows[0][0] >= C)
        if long_ <= k_max:
            return inst


def rand_dyn_path(rng, n_max=7, b_max=20, directed=False, cyc=False):
    n = rng.randint(2 if cyc else 1, n_max)
    B = rng.randint(0, b_max)
    m = n if cyc else n - 1
    costs = [rng.randint(0, 3) for _ in range(m)]
    if cyc and sum(costs) == 0:
        costs[0] = 1
    active = {}
    for k in range(m):
        if rng.random() < 0.6:
            iv, t = [], 0
            for _ in range(rng.randint(1, 2)):
                a = t + rng.randint(0, 6)
                b = a + rng.randint(0, 6)
                iv.append((a, b))
                t = b + 1
            active[k] = iv
    prof = [rng.randint(0, 9) for _ in range(n)]
    if cyc:
        return cycle_instance(costs, prof, [()] * n, B, active=active)
    inst = path_instance(costs, prof, [()] * n, B, directed=directed, active=active)
    if not directed:
        inst = inst.replace(start=rng.randrange(n))
    return inst


def rand_tree(rng, n_max=8, p_max=4, c_max=3, b_max=12, n_min=1):
    n = rng.randint(n_min, n_max)
    edges = [(rng.randrange(i), i, rng.randint(0, c_max)) for i in range(1, n)]
    return make_instance("tree", [rng.randint(0, p_max) for _ in range(n)], edges,
                         rng.randint(0, b_max), start=rng.randrange(n))


def rand_tw2(rng, n_max=7, p_max=9, b_max=12):
    """Random graph of treewidth at most 2 (a partial 2-tree)."""
    n = rng.randint(1, n_max)
    edges = []
    for v in range(1, n):
        a = rng.randrange(v)
        edges.append((a, v, rng.randint(0, 4)))
        if rng.random() < 0.5:
            nb = [e for e in edges if a in e[:2] and v not in e[:2]]
            if nb:
                e = rng.choice(nb)
                b = e[0] if e[1] == a else e[1]
                edges.append((b, v, rng.randint(0, 4)))
    return make_instance("general", [rng.randint(0, p_max) for _ in range(n)], edges,
                         rng.randint(0, b_max), start=rng.randrange(n))


def seeded(seed):
    return random.Random(seed)
