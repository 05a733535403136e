"""Pure-Python profit envelope (treap over breakpoint deltas).

The step function is stored as positive jumps: ``value(t)`` is the sum of the
deltas at breakpoints ``<= t``.  Each node also keeps the delta sum of its
subtree so a query is one root-to-leaf descent.  Windows never delete the
function's history, they only add a jump at the release and eat the jumps
after the deadline that the new jump dominates.
"""

from .errors import InstanceError

_MASK = (1 << 64) - 1


class ProfitEnvelope:
    __slots__ = ("horizon", "offset", "_key", "_pri", "_delta", "_sum", "_lc", "_rc",
                 "_free", "_root", "_seed")

    def __init__(self, horizon):
        if horizon < 1:
            raise InstanceError("envelope horizon must be positive")
        self.horizon = horizon
        self.offset = 0
        # slot 0 is the null node
        self._key = [0]
        self._pri = [0]
        self._delta = [0]
        self._sum = [0]
        self._lc = [0]
        self._rc = [0]
        self._free = []
        self._root = 0
        self._seed = 0x9E3779B97F4A7C15

    # -- node pool

    def _rand(self):
        x = self._seed
        x ^= (x << 13) & _MASK
        x ^= x >> 7
        x ^= (x << 17) & _MASK
        self._seed = x
        return x

    def _node(self, key, delta):
        if self._free:
            t = self._free.pop()
            self._key[t] = key
            self._pri[t] = self._rand()
            self._delta[t] = delta
            self._sum[t] = delta
            self._lc[t] = 0
            self._rc[t] = 0
            return t
        self._key.append(key)
        self._pri.append(self._rand())
        self._delta.append(delta)
        self._sum.append(delta)
        self._lc.append(0)
        self._rc.append(0)
        return len(self._key) - 1

    def _pull(self, t):
        self._sum[t] = self._sum[self._lc[t]] + self._delta[t] + self._sum[self._rc[t]]

    # -- treap primitives

    def _split(self, t, k):
        """Split into (keys <= k, keys > k)."""
        if not t:
            return 0, 0
        if self._key[t] <= k:
            a, b = self._split(self._rc[t], k)
            self._rc[t] = a
            self._pull(t)
            return t, b
        a, b = self._split(self._lc[t], k)
        self._lc[t] = b
        self._pull(t)
        return a, t

    def _merge(self, a, b):
        if not a:
            return b
        if not b:
            return a
        if self._pri[a] > self._pri[b]:
            self._rc[a] = self._merge(self._rc[a], b)
            self._pull(a)
            return a
        self._lc[b] = self._merge(a, self._lc[b])
        self._pull(b)
        return b

    def _pop_min(self, t):
        lc = self._lc
        if not lc[t]:
            self._free.append(t)
            return self._rc[t]
        lc[t] = self._pop_min(lc[t])
        self._pull(t)
        return t

    def _add_min(self, t, amount):
        path = []
        while t:
            path.append(t)
            t = self._lc[t]
        self._delta[path[-1]] += amount
        for t in reversed(path):
            self._pull(t)

    def _min_node(self, t):
        lc = self._lc
        while lc[t]:
            t = lc[t]
        return t

    # -- public API

    def query(self, t):
        if not 0 <= t < self.horizon:
            raise InstanceError(f"query time {t} outside [0, {self.horizon})")
        key, delta, sm, lc, rc = self._key, self._delta, self._sum, self._lc, self._rc
        node = self._root
        total = 0
        while node:
            if key[node] <= t:
                total += sm[lc[node]] + delta[node]
                node = rc[node]
            else:
                node = lc[node]
        return total

    def apply_window(self, release, deadline, profit):
        """Absorb a window and return the first time at which it stops mattering.

        For ``release <= t < stop`` the new value uses the window; from
        ``stop`` on the envelope is unchanged.
        """
        if not (0 <= release <= deadline < self.horizon) or profit < 0:
            raise InstanceError(f"window [{release}, {deadline}] outside [0, {self.horizon})")
        if profit == 0:
            return release
        a, rest = self._split(self._root, release - 1)
        mid, c = self._split(rest, deadline)
        first = self._min_node(mid) if mid else 0
        if first and self._key[first] == release:
            self._add_min(mid, profit)
        else:
            mid = self._merge(self._node(release, profit), mid)
        remaining = profit
        stop = self.horizon
        while c:
            t = self._min_node(c)
            d = self._delta[t]
            if d <= remaining:
                remaining -= d
                k = self._key[t]
                c = self._pop_min(c)
                if remaining == 0:
                    stop = k
                    break
            else:
                self._add_min(c, -remaining)
                stop = self._key[t]
                break
        self._root = self._merge(self._merge(a, mid), c)
        return stop

    def advance(self, cost):
        self.offset += cost

    def steps(self):
        """Breakpoints as ``(time, value_from_time)`` in increasing time."""
        out = []
        stack = []
        node = self._root
        total = 0
        while stack or node:
            while node:
                stack.append(node)
                node = self._lc[node]
            node = stack.pop()
            total += self._delta[node]
            out.append((self._key[node], total))
            node = self._rc[node]
        return out

    def max_value(self):
        return self._sum[self._root]

    def __len__(self):
        return len(self._key) - 1 - len(self._free)

    def copy(self):
        other = ProfitEnvelope.from_steps(self.horizon, self.steps())
        other.offset = self.offset
        return other

    @classmethod
    def from_steps(cls, horizon, steps):
        env = cls(horizon)
        prev = 0
        root = 0
        for t, v in steps:
            if v > prev and t < horizon:
                root = env._merge(root, env._node(t, v - prev))
                prev = v
        env._root = root
        return env
