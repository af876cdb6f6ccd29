"""The symmetric group ``S_d`` on ``[1, d]``.

Permutations are stored in one-line notation.  Generators ``s_i`` (``1 <= i <
d``) swap ``i`` and ``i + 1``; right multiplication by ``s_i`` swaps positions
``i`` and ``i + 1`` of the one-line word.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional

from .klengine import KLEngine, inverse_by_backsubstitution
from .qpoly import ONE, ZERO, QPoly


class DegreeMismatchError(ValueError):
    pass


class NotComparableError(ValueError):
    """Raised when an operation needs ``y <= w`` and it fails."""


@dataclass(frozen=True)
class Perm:
    """A permutation of ``[1, d]`` in one-line notation."""

    oneline: tuple

    def __post_init__(self):
        ol = tuple(int(v) for v in self.oneline)
        object.__setattr__(self, "oneline", ol)
        if not ol:
            raise ValueError("a permutation needs degree at least 1")
        if sorted(ol) != list(range(1, len(ol) + 1)):
            raise ValueError(f"{ol} is not a permutation of 1..{len(ol)}")

    @property
    def degree(self) -> int:
        return len(self.oneline)

    def __call__(self, i: int) -> int:
        return self.oneline[i - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def inverse(self) -> "Perm":
        return inverse(self)

    def __str__(self) -> str:
        return to_text(self)

    @classmethod
    def parse(cls, text: str) -> "Perm":
        return parse(text)


def parse(text: str) -> Perm:
    """Read ``"2 8 5 4"``, ``"2,8,5,4"`` or the compact ``"2854"`` (d <= 9)."""
    text = text.strip().strip("()[]")
    parts = [p for p in re.split(r"[\s,]+", text) if p]
    if len(parts) == 1 and len(parts[0]) > 1:
        if not parts[0].isdigit():
            raise ValueError(f"cannot parse permutation {text!r}")
        parts = list(parts[0])
    try:
        return Perm(tuple(int(p) for p in parts))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None


def to_text(w: Perm, compact: Optional[bool] = None) -> str:
    if compact is None:
        compact = w.degree <= 9
    if compact:
        return "".join(str(v) for v in w.oneline)
    return " ".join(str(v) for v in w.oneline)


def identity(d: int) -> Perm:
    return Perm(tuple(range(1, d + 1)))


def simple_reflection(d: int, i: int) -> Perm:
    if not 1 <= i < d:
        raise ValueError(f"s_{i} is not a generator of S_{d}")
    ol = list(range(1, d + 1))
    ol[i - 1], ol[i] = ol[i], ol[i - 1]
    return Perm(tuple(ol))


def longest_element(d: int) -> Perm:
    if d < 1:
        raise ValueError("degree must be positive")
    return Perm(tuple(range(d, 0, -1)))


def _same_degree(u: Perm, v: Perm) -> None:
    if u.degree != v.degree:
        raise DegreeMismatchError(f"degrees {u.degree} and {v.degree} differ")


def compose(u: Perm, v: Perm) -> Perm:
    """``(u v)(i) = u(v(i))``."""
    _same_degree(u, v)
    return Perm(tuple(u.oneline[x - 1] for x in v.oneline))


def inverse(w: Perm) -> Perm:
    out = [0] * w.degree
    for i, x in enumerate(w.oneline, 1):
        out[x - 1] = i
    return Perm(tuple(out))


def _check_index(w: Perm, i: int) -> None:
    if not 1 <= i <= w.degree:
        raise IndexError(f"index {i} outside [1, {w.degree}]")


def inv_below(w: Perm, i: int) -> int:
    """``|{i' < i : w(i') > w(i)}|``."""
    _check_index(w, i)
    x = w.oneline[i - 1]
    return sum(1 for v in w.oneline[: i - 1] if v > x)


def inv_above(w: Perm, i: int) -> int:
    """``|{i' > i : w(i') < w(i)}|``."""
    _check_index(w, i)
    x = w.oneline[i - 1]
    return sum(1 for v in w.oneline[i:] if v < x)


def _length(ol: tuple) -> int:
    n = len(ol)
    return sum(1 for a in range(n) for b in range(a + 1, n) if ol[a] > ol[b])


def length(w: Perm) -> int:
    return _length(w.oneline)


def sign(w: Perm) -> int:
    return -1 if length(w) % 2 else 1


def _leq(y: tuple, w: tuple) -> bool:
    # the m-th largest of y[1..i] never exceeds the m-th largest of w[1..i]
    if y == w:
        return True
    py: list = []
    pw: list = []
    for a, b in zip(y, w):
        py.append(a)
        pw.append(b)
        py.sort(reverse=True)
        pw.sort(reverse=True)
        for u, v in zip(py, pw):
            if u > v:
                return False
    return True


def bruhat_leq(y: Perm, w: Perm) -> bool:
    _same_degree(y, w)
    return _leq(y.oneline, w.oneline)


def bruhat_leq_counting(y: Perm, w: Perm) -> bool:
    """The same test written literally as counts over all ``(i, j)``."""
    _same_degree(y, w)
    d = y.degree
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            cy = sum(1 for v in y.oneline[:i] if v >= j)
            cw = sum(1 for v in w.oneline[:i] if v >= j)
            if cy > cw:
                return False
    return True


def _right_descents(ol: tuple) -> tuple:
    return tuple(i for i in range(1, len(ol)) if ol[i - 1] > ol[i])


def _left_descents(ol: tuple) -> tuple:
    pos = [0] * (len(ol) + 1)
    for i, x in enumerate(ol):
        pos[x] = i
    return tuple(i for i in range(1, len(ol)) if pos[i] > pos[i + 1])


def right_descents(w: Perm) -> frozenset:
    return frozenset(_right_descents(w.oneline))


def left_descents(w: Perm) -> frozenset:
    return frozenset(_left_descents(w.oneline))


def _rmul(ol: tuple, i: int) -> tuple:
    lst = list(ol)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def _lmul(i: int, ol: tuple) -> tuple:
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in ol)


def _lower_covers(ol: tuple):
    n = len(ol)
    for a in range(n):
        top = ol[a]
        ceiling = 0  # largest value seen so far below top, between a and b
        for b in range(a + 1, n):
            v = ol[b]
            if v < top and v > ceiling:
                lst = list(ol)
                lst[a], lst[b] = v, top
                yield tuple(lst)
                ceiling = v


class _FiniteGroup:
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
    """The shared per-degree KL engine."""
    key = (d, policy)
    eng = _engines.get(key)
    if eng is None:
        with _engines_lock:
            eng = _engines.get(key)
            if eng is None:
                eng = KLEngine(_FiniteGroup(d), policy=policy)
                _engines[key] = eng
    return eng


def kl_poly(y: Perm, w: Perm, policy: str = "smallest") -> QPoly:
    """The Kazhdan-Lusztig polynomial ``P_{y,w}`` (zero unless ``y <= w``)."""
    _same_degree(y, w)
    return engine(y.degree, policy).P(y.oneline, w.oneline)


def mu(y: Perm, w: Perm) -> int:
    _same_degree(y, w)
    if not bruhat_leq(y, w):
        return 0
    return engine(y.degree).mu(y.oneline, w.oneline)


def interval(y: Perm, w: Perm) -> list[Perm]:
    """``[y, w]`` by walking Bruhat covers down from ``w``."""
    _same_degree(y, w)
    return [Perm(x) for x in engine(y.degree).interval(y.oneline, w.oneline)]


def reduced_word(w: Perm) -> list[int]:
    """A reduced word ``[i_1, ..., i_l]`` with ``w = s_{i_1} ... s_{i_l}``."""
    ol = w.oneline
    word: list[int] = []
    while True:
        ds = _right_descents(ol)
        if not ds:
            break
        word.append(ds[0])
        ol = _rmul(ol, ds[0])
    word.reverse()
    return word


def from_word(d: int, word: Iterable[int]) -> Perm:
    ol = tuple(range(1, d + 1))
    for i in word:
        if not 1 <= i < d:
            raise ValueError(f"s_{i} is not a generator of S_{d}")
        ol = _rmul(ol, i)
    return Perm(ol)


def enumerate_lower_interval(y: Perm, w: Perm) -> set[Perm]:
    """``[y, w]`` from subwords of one reduced word of ``w``, filtered by ``y``."""
    _same_degree(y, w)
    if not bruhat_leq(y, w):
        raise NotComparableError(f"{y} is not below {w}")
    level = {tuple(range(1, w.degree + 1))}
    for i in reduced_word(w):
        level |= {_rmul(x, i) for x in level}
    return {Perm(x) for x in level if _leq(y.oneline, x)}


def kl_inverse(y: Perm, w: Perm, method: str = "twist") -> QPoly:
    """Entry ``(y, w)`` of the inverse of the KL matrix of ``S_d``.

    ``method="twist"`` uses ``eps(yw) P_{w w0, y w0}``; ``"backsub"`` solves the
    unitriangular system over ``[y, w]``; ``"both"`` computes the two and
    insists they agree.
    """
    _same_degree(y, w)
    if method == "both":
        a = kl_inverse(y, w, "twist")
        b = kl_inverse(y, w, "backsub")
        if a != b:
            raise AssertionError(f"inverse KL mismatch at ({y}, {w}): {a} vs {b}")
        return a
    if not bruhat_leq(y, w):
        return ZERO
    if y == w:
        return ONE
    if method == "twist":
        w0 = longest_element(y.degree)
        eps = -1 if (length(y) + length(w)) % 2 else 1
        return kl_poly(compose(w, w0), compose(y, w0)) * eps
    if method == "backsub":
        eng = engine(y.degree)
        return inverse_by_backsubstitution(
            eng.P, eng.interval(y.oneline, w.oneline), y.oneline, w.oneline, _length)
    raise ValueError(f"unknown method {method!r}")


def cancellable(y: Perm, w: Perm, i: int) -> bool:
    _same_degree(y, w)
    _check_index(w, i)
    if not bruhat_leq(y, w):
        raise NotComparableError(f"{y} is not below {w}")
    return y(i) == w(i) and inv_below(y, i) == inv_below(w, i)


def cancel(w: Perm, i: int) -> Perm:
    """Delete position ``i`` and value ``w(i)``, renumbering what is left."""
    _check_index(w, i)
    if w.degree == 1:
        raise ValueError("cannot cancel from S_1")
    j = w(i)
    return Perm(tuple(v - (v > j) for k, v in enumerate(w.oneline, 1) if k != i))


def uncancel(x: Perm, i: int, j: int) -> Perm:
    """Inverse of :func:`cancel`: reinsert value ``j`` at position ``i``."""
    ol = [v + (v >= j) for v in x.oneline]
    ol.insert(i - 1, j)
    return Perm(tuple(ol))


def all_perms(d: int) -> list[Perm]:
    return [Perm(p) for p in permutations(range(1, d + 1))]
