"""Monotone profit envelope: departure time -> best collectible profit.

The compiled treap is used when the extension was built; set
``ORIENTEER_PURE=1`` to force the pure-Python implementation.
"""

import os

from . import _envelope_py
from .errors import InstanceError

PureEnvelope = _envelope_py.ProfitEnvelope

try:
    if os.environ.get("ORIENTEER_PURE", "") not in ("", "0"):
        raise ImportError("pure implementation requested")
    from ._envelope_cy import ProfitEnvelope as CompiledEnvelope
except ImportError:
    CompiledEnvelope = None

ProfitEnvelope = CompiledEnvelope if CompiledEnvelope is not None else PureEnvelope
IMPLEMENTATION = "cython" if CompiledEnvelope is not None else "python"


def envelope_class(impl=None):
    """Return the envelope class for ``"python"``, ``"cython"`` or the default."""
    if impl in (None, "auto"):
        return ProfitEnvelope
    if impl == "python":
        return PureEnvelope
    if impl == "cython":
        if CompiledEnvelope is None:
            raise ImportError("compiled envelope extension is not available")
        return CompiledEnvelope
    raise ValueError(f"unknown envelope implementation {impl!r}")


def new_envelope(horizon, initial_release=0, initial_profit=0, impl=None):
    if not 0 <= initial_release <= horizon:
        raise InstanceError(f"release {initial_release} beyond horizon {horizon}")
    env = envelope_class(impl)(horizon)
    if initial_profit and initial_release < horizon:
        env.apply_window(initial_release, horizon - 1, initial_profit)
    return env


def query(env, t):
    return env.query(t)


def apply_window(env, release, deadline, profit):
    return env.apply_window(release, deadline, profit)


def merge_max(a, b):
    """Pointwise maximum of two envelopes over the same horizon."""
    sa, sb = a.steps(), b.steps()
    i = j = 0
    va = vb = 0
    out = []
    while i < len(sa) or j < len(sb):
        ta = sa[i][0] if i < len(sa) else None
        tb = sb[j][0] if j < len(sb) else None
        t = ta if tb is None or (ta is not None and ta <= tb) else tb
        if ta == t:
            va = sa[i][1]
            i += 1
        if tb == t:
            vb = sb[j][1]
            j += 1
        v = max(va, vb)
        if not out or v > out[-1][1]:
            out.append((t, v))
    return type(a).from_steps(a.horizon, out)
