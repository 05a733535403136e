# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled profit envelope; same treap layout as the pure-Python module."""

from libcpp.vector cimport vector
from libc.stdint cimport uint64_t, int64_t

from .errors import InstanceError


cdef class ProfitEnvelope:
    cdef public long long horizon
    cdef public long long offset
    cdef vector[int64_t] _key
    cdef vector[uint64_t] _pri
    cdef vector[int64_t] _delta
    cdef vector[int64_t] _sum
    cdef vector[int] _lc
    cdef vector[int] _rc
    cdef vector[int] _free
    cdef int _root
    cdef uint64_t _seed

    def __cinit__(self, long long horizon):
        if horizon < 1:
            raise InstanceError("envelope horizon must be positive")
        self.horizon = horizon
        self.offset = 0
        self._key.push_back(0)
        self._pri.push_back(0)
        self._delta.push_back(0)
        self._sum.push_back(0)
        self._lc.push_back(0)
        self._rc.push_back(0)
        self._root = 0
        self._seed = 0x9E3779B97F4A7C15ULL

    cdef uint64_t _rand(self):
        cdef uint64_t x = self._seed
        x ^= x << 13
        x ^= x >> 7
        x ^= x << 17
        self._seed = x
        return x

    cdef int _node(self, int64_t key, int64_t delta):
        cdef int t
        if self._free.size():
            t = self._free.back()
            self._free.pop_back()
            self._key[t] = key
            self._pri[t] = self._rand()
            self._delta[t] = delta
            self._sum[t] = delta
            self._lc[t] = 0
            self._rc[t] = 0
            return t
        self._key.push_back(key)
        self._pri.push_back(self._rand())
        self._delta.push_back(delta)
        self._sum.push_back(delta)
        self._lc.push_back(0)
        self._rc.push_back(0)
        return <int>self._key.size() - 1

    cdef inline void _pull(self, int t):
        self._sum[t] = self._sum[self._lc[t]] + self._delta[t] + self._sum[self._rc[t]]

    cdef void _split(self, int t, int64_t k, int* a, int* b):
        cdef int x, y
        if t == 0:
            a[0] = 0
            b[0] = 0
            return
        if self._key[t] <= k:
            self._split(self._rc[t], k, &x, &y)
            self._rc[t] = x
            self._pull(t)
            a[0] = t
            b[0] = y
        else:
            self._split(self._lc[t], k, &x, &y)
            self._lc[t] = y
            self._pull(t)
            a[0] = x
            b[0] = t

    cdef int _merge(self, int a, int b):
        if a == 0:
            return b
        if b == 0:
            return a
        if self._pri[a] > self._pri[b]:
            self._rc[a] = self._merge(self._rc[a], b)
            self._pull(a)
            return a
        self._lc[b] = self._merge(a, self._lc[b])
        self._pull(b)
        return b

    cdef int _pop_min(self, int t):
        if self._lc[t] == 0:
            self._free.push_back(t)
            return self._rc[t]
        self._lc[t] = self._pop_min(self._lc[t])
        self._pull(t)
        return t

    cdef void _add_min(self, int t, int64_t amount):
        if self._lc[t] == 0:
            self._delta[t] += amount
        else:
            self._add_min(self._lc[t], amount)
        self._pull(t)

    cdef int _min_node(self, int t):
        while self._lc[t]:
            t = self._lc[t]
        return t

    def query(self, long long t):
        if t < 0 or t >= self.horizon:
            raise InstanceError(f"query time {t} outside [0, {self.horizon})")
        cdef int node = self._root
        cdef int64_t total = 0
        while node:
            if self._key[node] <= t:
                total += self._sum[self._lc[node]] + self._delta[node]
                node = self._rc[node]
            else:
                node = self._lc[node]
        return total

    def apply_window(self, long long release, long long deadline, long long profit):
        """Absorb a window and return the first time at which it stops mattering."""
        if not (0 <= release <= deadline < self.horizon) or profit < 0:
            raise InstanceError(f"window [{release}, {deadline}] outside [0, {self.horizon})")
        if profit == 0:
            return release
        cdef int a, rest, mid, c, first, t
        cdef int64_t remaining, d, k, stop
        self._split(self._root, release - 1, &a, &rest)
        self._split(rest, deadline, &mid, &c)
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

    def advance(self, long long cost):
        self.offset += cost

    def steps(self):
        """Breakpoints as ``(time, value_from_time)`` in increasing time."""
        out = []
        cdef vector[int] stack
        cdef int node = self._root
        cdef int64_t total = 0
        while stack.size() or node:
            while node:
                stack.push_back(node)
                node = self._lc[node]
            node = stack.back()
            stack.pop_back()
            total += self._delta[node]
            out.append((self._key[node], total))
            node = self._rc[node]
        return out

    def max_value(self):
        return self._sum[self._root]

    def __len__(self):
        return <int>self._key.size() - 1 - <int>self._free.size()

    def copy(self):
        other = ProfitEnvelope.from_steps(self.horizon, self.steps())
        other.offset = self.offset
        return other

    @classmethod
    def from_steps(cls, long long horizon, steps):
        cdef ProfitEnvelope env = cls(horizon)
        cdef int64_t prev = 0
        cdef int root = 0
        for t, v in steps:
            if v > prev and t < horizon:
                root = env._merge(root, env._node(t, v - prev))
                prev = v
        env._root = root
        return env
