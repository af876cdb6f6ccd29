"""Memoized Kazhdan-Lusztig recursion shared by the finite and affine groups.

The engine knows nothing about permutations.  It talks to a *group adapter*
that works on hashable raw elements (tuples) and provides

    identity, length(x), right_descents(x), left_descents(x),
    rmul(x, s), lmul(s, x), leq(x, y), lower_covers(x)

where descents are returned as sorted tuples of generator labels.
"""

from __future__ import annotations

import os
import threading
from collections import deque
from typing import Callable, Hashable, Iterable, Optional, Protocol

from .qpoly import ONE, ZERO, QPoly


class GroupAdapter(Protocol):
    identity: Hashable

    def length(self, x) -> int: ...
    def right_descents(self, x) -> tuple: ...
    def left_descents(self, x) -> tuple: ...
    def rmul(self, x, s): ...
    def lmul(self, s, x): ...
    def leq(self, x, y) -> bool: ...
    def lower_covers(self, x) -> Iterable: ...


def cache_limit_from_env() -> Optional[int]:
    raw = os.environ.get("KLQ_CACHE_LIMIT")
    if not raw:
        return None
    limit = int(raw)
    return limit if limit > 0 else None


class BoundedCache:
    """Dict cache guarded for concurrent use.

    Reads go straight to the dict; writes take a lock.  When a limit is set the
    oldest entries are evicted first.
    """

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key, default=None):
        return self._data.get(key, default)

    def __contains__(self, key) -> bool:
        return key in self._data

    def __len__(self) -> int:
        return len(self._data)

    def put(self, key, value) -> None:
        with self._lock:
            self._data[key] = value
            if self.limit is not None and len(self._data) > self.limit:
                excess = len(self._data) - self.limit
                for old in list(self._data)[:excess]:
                    del self._data[old]

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


def _smallest(descents: tuple):
    return descents[0]


def _largest(descents: tuple):
    return descents[-1]


DESCENT_POLICIES: dict[str, Callable[[tuple], object]] = {
    "smallest": _smallest,
    "largest": _largest,
}


class KLEngine:
    """Interval-local KL polynomials ``P_{y,w}`` with memoization."""

    def __init__(self, group: GroupAdapter, policy: str = "smallest",
                 cache_limit: Optional[int] = None):
        self.group = group
        self.pick = DESCENT_POLICIES[policy]
        if cache_limit is None:
            cache_limit = cache_limit_from_env()
        self.cache = BoundedCache(cache_limit)
        self.interval_cache = BoundedCache(cache_limit)

    # Bruhat intervals

    def interval(self, y, w) -> tuple:
        """All ``x`` with ``y <= x <= w`` (empty unless ``y <= w``).

        Walks down from ``w`` along Bruhat covers and keeps what stays above
        ``y``; every element of the interval lies on a maximal chain from
        ``w``, so nothing is missed.
        """
        key = (y, w)
        hit = self.interval_cache.get(key)
        if hit is not None:
            return hit
        g = self.group
        if not g.leq(y, w):
            out: tuple = ()
        else:
            seen = {w}
            queue = deque([w])
            ly = g.length(y)
            while queue:
                x = queue.popleft()
                if g.length(x) == ly:
                    continue
                for c in g.lower_covers(x):
                    if c not in seen and g.leq(y, c):
                        seen.add(c)
                        queue.append(c)
            out = tuple(seen)
        self.interval_cache.put(key, out)
        return out

    # KL polynomials

    def _lift(self, y, w):
        """Move ``y`` up inside its coset w.r.t. the descents of ``w``.

        ``P_{y,w} = P_{ys,w}`` whenever ``s`` is a right descent of ``w``
        (and the same on the left), so the lifted element has the same value.
        """
        g = self.group
        rd_w, ld_w = g.right_descents(w), g.left_descents(w)
        changed = True
        while changed:
            changed = False
            rd_y = g.right_descents(y)
            for s in rd_w:
                if s not in rd_y:
                    y = g.rmul(y, s)
                    changed = True
                    break
            if changed:
                continue
            ld_y = g.left_descents(y)
            for s in ld_w:
                if s not in ld_y:
                    y = g.lmul(s, y)
                    changed = True
                    break
        return y

    def mu(self, z, v) -> int:
        """Coefficient of ``q^((l(v)-l(z)-1)/2)`` in ``P_{z,v}``, for ``z <= v``."""
        g = self.group
        diff = g.length(v) - g.length(z)
        if diff <= 0 or diff % 2 == 0:
            return 0
        if diff == 1:
            return 1
        # a descent of v that z lacks forces z = vs, impossible at diff >= 3
        rd_z = g.right_descents(z)
        if any(s not in rd_z for s in g.right_descents(v)):
            return 0
        ld_z = g.left_descents(z)
        if any(s not in ld_z for s in g.left_descents(v)):
            return 0
        return self.P(z, v).coeff((diff - 1) // 2)

    def P(self, y, w) -> QPoly:
        if y == w:
            return ONE
        key = (y, w)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        g = self.group
        if not g.leq(y, w):
            res = ZERO
        else:
            lifted = self._lift(y, w)
            if lifted != y:
                res = self.P(lifted, w)
            else:
                res = self._recurse(y, w)
        self.cache.put(key, res)
        return res

    def _recurse(self, y, w) -> QPoly:
        # y already carries every right descent of w
        g = self.group
        s = self.pick(g.right_descents(w))
        v = g.rmul(w, s)
        ys = g.rmul(y, s)
        res = self.P(ys, v) + self.P(y, v).shift(1)
        if g.leq(y, v):
            lw = g.length(w)
            for z in self.interval(y, v):
                if z == v or s not in g.right_descents(z):
                    continue
                m = self.mu(z, v)
                if m:
                    res = res - (self.P(y, z) * m).shift((lw - g.length(z)) // 2)
        return res

    def clear(self) -> None:
        self.cache.clear()
        self.interval_cache.clear()


def inverse_by_backsubstitution(P: Callable, interval: Iterable, y, w,
                                length: Callable) -> QPoly:
    """Entry ``(y, w)`` of the inverse of the unitriangular matrix ``P``.

    ``interval`` must be the full interval ``[y, w]``; the inverse ``Q``
    satisfies ``sum_x P(y, x) Q(x, w) = delta``, solved from the top down.
    """
    elems = sorted(interval, key=length, reverse=True)
    if y not in elems:
        return ZERO
    Q: dict = {}
    for x in elems:
        if x == w:
            Q[x] = ONE
            continue
        acc = ZERO
        for z, qz in Q.items():
            if z != x:
                p = P(x, z)
                if not p.is_zero():
                    acc = acc + p * qz
        Q[x] = -acc
    return Q[y]
