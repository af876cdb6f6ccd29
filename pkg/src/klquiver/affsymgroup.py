"""The extended affine symmetric group of ``Z`` with period ``d``.

An element is a bijection ``w`` of ``Z`` with ``w(i + d) = w(i) + d``, stored by
its window ``(w(1), ..., w(d))``.  Its tau-degree ``a(w)`` places it in
``tau^a(w)`` times the Coxeter group generated by ``s_0, ..., s_{d-1}``; length,
Bruhat order and KL polynomials are those of ``tau^(-a(w)) w``.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable

from .klengine import KLEngine, inverse_by_backsubstitution
from .qpoly import ONE, ZERO, QPoly


class DegreeMismatchError(ValueError):
    pass


class NotComparableError(ValueError):
    pass


@dataclass(frozen=True)
class AffPerm:
    window: tuple

    def __post_init__(self):
        win = tuple(int(v) for v in self.window)
        object.__setattr__(self, "window", win)
        d = len(win)
        if d == 0:
            raise ValueError("an affine permutation needs degree at least 1")
        if len({v % d for v in win}) != d:
            raise ValueError(f"window {win} does not hit every residue mod {d}")

    @property
    def degree(self) -> int:
        return len(self.window)

    @property
    def tau_degree(self) -> int:
        d = self.degree
        return (sum(self.window) - d * (d + 1) // 2) // d

    def __call__(self, i: int) -> int:
        return _apply(self.window, i)

    def __mul__(self, other: "AffPerm") -> "AffPerm":
        return compose(self, other)

    def inverse(self) -> "AffPerm":
        return inverse(self)

    def __str__(self) -> str:
        return to_text(self)

    @classmethod
    def parse(cls, text: str) -> "AffPerm":
        return parse(text)


def _apply(win: tuple, i: int) -> int:
    d = len(win)
    k, r = divmod(i - 1, d)
    return win[r] + k * d


def apply(w: AffPerm, i: int) -> int:
    return _apply(w.window, i)


def tau_degree(w: AffPerm) -> int:
    return w.tau_degree


def identity(d: int) -> AffPerm:
    return AffPerm(tuple(range(1, d + 1)))


def tau_power(d: int, k: int) -> AffPerm:
    return AffPerm(tuple(range(1 + k, d + 1 + k)))


def _same_degree(u: AffPerm, v: AffPerm) -> None:
    if u.degree != v.degree:
        raise DegreeMismatchError(f"degrees {u.degree} and {v.degree} differ")


def compose(u: AffPerm, v: AffPerm) -> AffPerm:
    """``(u v)(i) = u(v(i))``."""
    _same_degree(u, v)
    return AffPerm(tuple(_apply(u.window, x) for x in v.window))


def _inverse(win: tuple) -> tuple:
    d = len(win)
    out = [0] * d
    for i, v in enumerate(win, 1):
        k, r = divmod(v - 1, d)
        out[r] = i - k * d
    return tuple(out)


def inverse(w: AffPerm) -> AffPerm:
    return AffPerm(_inverse(w.window))


def simple_reflection(d: int, i: int) -> AffPerm:
    if d < 2:
        raise ValueError("no Coxeter generators when d = 1")
    return AffPerm(_rmul(tuple(range(1, d + 1)), i % d))


def _shift(win: tuple, k: int) -> tuple:
    return tuple(v + k for v in win)


# statistics

def _count_lt(win: tuple, i: int) -> int:
    """``inv_i``: positions ``i' < i`` (over Z) with ``w(i') > w(i)``."""
    d = len(win)
    wi = _apply(win, i)
    total = 0
    for r in range(1, d + 1):
        wr = win[r - 1]
        # i' = r + k d with r + k d < i and wr + k d > wi
        kmax = -((r - i) // d) - 1
        kmin = (wi - wr) // d + 1
        if kmax >= kmin:
            total += kmax - kmin + 1
    return total


def _count_gt(win: tuple, i: int) -> int:
    """``Inv_i``: positions ``i' > i`` with ``w(i') < w(i)``."""
    d = len(win)
    wi = _apply(win, i)
    total = 0
    for r in range(1, d + 1):
        wr = win[r - 1]
        kmin = (i - r) // d + 1
        kmax = -((wr - wi) // d) - 1
        if kmax >= kmin:
            total += kmax - kmin + 1
    return total


def inv_below(w: AffPerm, i: int) -> int:
    return _count_lt(w.window, i)


def inv_above(w: AffPerm, i: int) -> int:
    return _count_gt(w.window, i)


def _length(win: tuple) -> int:
    return sum(_count_lt(win, i) for i in range(1, len(win) + 1))


def length(w: AffPerm) -> int:
    return _length(w.window)


def sign(w: AffPerm) -> int:
    return -1 if length(w) % 2 else 1


def _right_descents(win: tuple) -> tuple:
    d = len(win)
    if d == 1:
        return ()
    out = [0] if win[d - 1] - d > win[0] else []
    out.extend(i for i in range(1, d) if win[i - 1] > win[i])
    return tuple(out)


def _left_descents(win: tuple) -> tuple:
    return _right_descents(_inverse(win))


def right_descents(w: AffPerm) -> frozenset:
    if w.degree == 1:
        raise ValueError("no Coxeter generators when d = 1")
    return frozenset(_right_descents(w.window))


def left_descents(w: AffPerm) -> frozenset:
    if w.degree == 1:
        raise ValueError("no Coxeter generators when d = 1")
    return frozenset(_left_descents(w.window))


def _rmul(win: tuple, i: int) -> tuple:
    """``w s_i`` for a residue ``i`` in ``[0, d)``."""
    d = len(win)
    lst = list(win)
    if i == 0:
        lst[0], lst[d - 1] = win[d - 1] - d, win[0] + d
    else:
        lst[i - 1], lst[i] = win[i], win[i - 1]
    return tuple(lst)


def _lmul(i: int, win: tuple) -> tuple:
    d = len(win)

    def s(v: int) -> int:
        r = v % d
        if r == i:
            return v + 1
        if r == (i + 1) % d:
            return v - 1
        return v

    return tuple(s(v) for v in win)


def _leq_same_degree(y: tuple, w: tuple) -> bool:
    if y == w:
        return True
    d = len(y)
    lo = min(min(y), min(w)) - d
    hi = max(max(y), max(w)) + d
    for i in range(1, d + 1):
        cy = _prefix_counts(y, i, lo, hi)
        cw = _prefix_counts(w, i, lo, hi)
        if cy[0] != cw[0]:
            return False
        for a, b in zip(cy, cw):
            if a > b:
                return False
    return True


def _prefix_counts(win: tuple, i: int, lo: int, hi: int) -> list[int]:
    """``|{i' <= i : w(i') >= j}|`` for ``j`` in ``[lo, hi]``."""
    d = len(win)
    vals = []
    for r in range(1, d + 1):
        top = win[r - 1] + ((i - r) // d) * d  # w at the last i' <= i in class r
        v = top
        while v >= lo:
            vals.append(v)
            v -= d
    # every class contributes all values down to lo, so counting by threshold works
    vals.sort(reverse=True)
    out = []
    idx = 0
    n = len(vals)
    for j in range(hi, lo - 1, -1):
        while idx < n and vals[idx] >= j:
            idx += 1
        out.append(idx)
    out.reverse()
    return out


def _leq(y: tuple, w: tuple) -> bool:
    d = len(y)
    if sum(y) != sum(w):
        return False
    if d == 1:
        return True
    return _leq_same_degree(y, w)


def bruhat_leq(y: AffPerm, w: AffPerm) -> bool:
    _same_degree(y, w)
    return _leq(y.window, w.window)


def _lower_covers(win: tuple):
    d = len(win)
    lw = _length(win)
    floor = min(v - r for r, v in enumerate(win, 1))
    for a in range(1, d + 1):
        wa = win[a - 1]
        # w(b) - b >= floor and w(b) < w(a) bound b from above
        for b in range(a + 1, wa - floor + 1):
            if (b - a) % d == 0:
                continue
            wb = _apply(win, b)
            if wb >= wa:
                continue
            cand = _swap_classes(win, a, b)
            if _length(cand) == lw - 1:
                yield cand


def _swap_classes(win: tuple, a: int, b: int) -> tuple:
    """``w t`` where ``t`` swaps ``a + kd`` and ``b + kd`` for every ``k``."""
    d = len(win)
    gap = b - a
    ra, rb = a % d, b % d
    out = []
    for r in range(1, d + 1):
        if r % d == ra:
            out.append(_apply(win, r + gap))
        elif r % d == rb:
            out.append(_apply(win, r - gap))
        else:
            out.append(win[r - 1])
    return tuple(out)


class _AffineGroup:
    """Adapter for the Coxeter part (tau-degree 0) of the extended group."""

    def __init__(self, d: int):
        self.d = d
        self.identity = tuple(range(1, d + 1))

    length = staticmethod(_length)
    right_descents = staticmethod(_right_descents)
    left_descents = staticmethod(_left_descents)
    rmul = staticmethod(_rmul)
    lmul = staticmethod(_lmul)
    leq = staticmethod(_leq)
    lower_covers = staticmethod(_lower_covers)


_engines: dict = {}
_engines_lock = threading.Lock()


def engine(d: int, policy: str = "smallest") -> KLEngine:
    key = (d, policy)
    eng = _engines.get(key)
    if eng is None:
        with _engines_lock:
            eng = _engines.get(key)
            if eng is None:
                eng = KLEngine(_AffineGroup(d), policy=policy)
                _engines[key] = eng
    return eng


def _normalized_pair(y: AffPerm, w: AffPerm):
    a = y.tau_degree
    return _shift(y.window, -a), _shift(w.window, -a)


def kl_poly(y: AffPerm, w: AffPerm, policy: str = "smallest") -> QPoly:
    _same_degree(y, w)
    if y.tau_degree != w.tau_degree:
        return ZERO
    if y.degree == 1:
        return ONE
    yy, ww = _normalized_pair(y, w)
    return engine(y.degree, policy).P(yy, ww)


def interval(y: AffPerm, w: AffPerm) -> list[AffPerm]:
    _same_degree(y, w)
    if not bruhat_leq(y, w):
        return []
    if y.degree == 1:
        return [y]
    a = y.tau_degree
    yy, ww = _normalized_pair(y, w)
    return [AffPerm(_shift(x, a)) for x in engine(y.degree).interval(yy, ww)]


def kl_inverse(y: AffPerm, w: AffPerm) -> QPoly:
    """Inverse KL matrix entry, by back-substitution over the finite ``[y, w]``."""
    _same_degree(y, w)
    if not bruhat_leq(y, w):
        return ZERO
    if y == w:
        return ONE
    yy, ww = _normalized_pair(y, w)
    eng = engine(y.degree)
    return inverse_by_backsubstitution(eng.P, eng.interval(yy, ww), yy, ww, _length)


def reduced_word(w: AffPerm) -> list[int]:
    """Residues ``[i_1, ..., i_l]`` with ``tau^(-a) w = s_{i_1} ... s_{i_l}``."""
    win = _shift(w.window, -w.tau_degree)
    word: list[int] = []
    while True:
        ds = _right_descents(win)
        if not ds:
            break
        word.append(ds[0])
        win = _rmul(win, ds[0])
    word.reverse()
    return word


def from_word(d: int, word: Iterable[int], tau: int = 0) -> AffPerm:
    """``tau^tau s_{i_1} ... s_{i_l}``."""
    win = tuple(range(1, d + 1))
    for i in word:
        if d < 2:
            raise ValueError("no Coxeter generators when d = 1")
        win = _rmul(win, i % d)
    return AffPerm(_shift(win, tau))


def cancellable(y: AffPerm, w: AffPerm, i: int) -> bool:
    _same_degree(y, w)
    if not bruhat_leq(y, w):
        raise NotComparableError(f"{y} is not below {w}")
    return y(i) == w(i) and inv_below(y, i) == inv_below(w, i)


def _sigma(cls: int, d: int, j: int) -> int:
    """Order-preserving ``Z minus (cls mod d) -> Z`` fixing the sign of ``j``."""
    if j > 0:
        # k = cls + t d in (0, j]
        return j - (((j - cls) // d) - ((0 - cls) // d))
    return j + (((0 - cls) // d) - ((j - cls) // d))


def _sigma_inv(cls: int, d: int, t: int) -> int:
    """The unique ``j`` not congruent to ``cls`` with ``sigma(j) = t``."""
    # sigma shrinks distances from 0 by the factor (d - 1) / d, up to d
    guess = (t * d) // (d - 1)
    for j in range(guess - d - 2, guess + d + 3):
        if (j - cls) % d and _sigma(cls, d, j) == t:
            return j
    raise AssertionError("sigma inverse not found")


def cancel(w: AffPerm, i: int) -> AffPerm:
    """Remove the class of ``i`` from the domain and of ``w(i)`` from the range."""
    d = w.degree
    if d == 1:
        raise ValueError("cannot cancel from degree 1")
    wi = w(i)
    win = []
    for t in range(1, d):
        j = _sigma_inv(i, d, t)
        win.append(_sigma(wi, d, _apply(w.window, j)))
    return AffPerm(tuple(win))


def uncancel(x: AffPerm, i: int, value: int) -> AffPerm:
    """Reinsert the class of ``i`` mapped to ``value``; inverse of :func:`cancel`."""
    d = x.degree + 1
    win = []
    for r in range(1, d + 1):
        if (r - i) % d == 0:
            win.append(value + (r - i))
        else:
            t = _sigma(i, d, r)
            win.append(_sigma_inv(value, d, _apply(x.window, t)))
    return AffPerm(tuple(win))


# text formats

def parse(text: str) -> AffPerm:
    """``"(0,7,2)"`` windows, or Coxeter words like ``"tau s2 s1 s0 s2"``.

    A word needs the degree, given as a ``d=3:`` prefix (``"d=3: s2 s1"``).
    """
    text = text.strip()
    m = re.match(r"^d\s*=\s*(\d+)\s*:(.*)$", text)
    if m:
        return parse_word(m.group(2), int(m.group(1)))
    body = text.strip("()[] ")
    parts = [p for p in re.split(r"[\s,]+", body) if p]
    try:
        return AffPerm(tuple(int(p) for p in parts))
    except ValueError as exc:
        raise ValueError(f"cannot parse affine permutation {text!r}: {exc}") from None


def parse_word(text: str, d: int) -> AffPerm:
    tau = 0
    word = []
    for tok in text.replace("*", " ").split():
        tok = tok.strip()
        m = re.match(r"^(?:tau|t)(?:\^(-?\d+))?$", tok)
        if m:
            if word:
                raise ValueError("tau powers must come first in a word")
            tau += int(m.group(1)) if m.group(1) else 1
            continue
        if tok in ("1", "e"):
            continue
        m = re.match(r"^s_?(\d+)$", tok)
        if not m:
            raise ValueError(f"bad generator {tok!r}")
        word.append(int(m.group(1)))
    return from_word(d, word, tau)


def to_text(w: AffPerm) -> str:
    return "(" + ",".join(str(v) for v in w.window) + ")"


def word_text(w: AffPerm) -> str:
    parts = []
    a = w.tau_degree
    if a:
        parts.append("tau" if a == 1 else f"tau^{a}")
    parts.extend(f"s{i}" for i in reduced_word(w))
    return " ".join(parts) if parts else "1"
