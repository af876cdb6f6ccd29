"""Multisegments for the linear and cyclic quivers of type A.

A multisegment is encoded as a square matrix whose upper part records segment
multiplicities and whose subdiagonal ``(i, i-1)`` records how many segments
pass from ``i-1`` to ``i``.  Closure order, orbit dimension and IC polynomials
are then order, length and KL polynomials of the double-coset matrices; the
IC polynomials are evaluated after removing the subdiagonal of the lower
element, which shrinks the group to ``S_k`` (or its affine version) with
``k`` the number of segments.

Weights are plain integer tuples ``(lambda_1, ..., lambda_k)``.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Optional, Sequence, Union

from . import affcosetmat as acm
from . import affsymgroup as asg
from . import cosetmat as cm
from . import symgroup as sg
from .affcosetmat import PeriodicMatrix
from .affsymgroup import AffPerm
from .cosetmat import CosetMatrix
from .klengine import inverse_by_backsubstitution
from .qpoly import ONE, ZERO, QPoly
from .symgroup import Perm


class DimensionMismatchError(ValueError):
    pass


class NotComparableError(ValueError):
    pass


class FundamentalDomainError(ValueError):
    pass


# segments and multisegments

@total_ordering
@dataclass(frozen=True)
class Segment:
    start: int
    end: int

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError(f"empty segment [{self.start},{self.end}]")

    def __lt__(self, other: "Segment") -> bool:
        return (self.start, self.end) < (other.start, other.end)

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __str__(self) -> str:
        return f"[{self.start},{self.end}]"


def _sorted_segments(segs: Iterable) -> tuple:
    out = []
    for s in segs:
        out.append(s if isinstance(s, Segment) else Segment(*s))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Multisegment:
    segments: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "segments", _sorted_segments(self.segments))

    @property
    def k(self) -> int:
        return len(self.segments)

    def dimension(self) -> Counter:
        out: Counter = Counter()
        for s in self.segments:
            for x in range(s.start, s.end + 1):
                out[x] += 1
        return out

    def support(self) -> tuple[int, int]:
        if not self.segments:
            return 1, 0
        return min(s.start for s in self.segments), max(s.end for s in self.segments)

    def __add__(self, other: "Multisegment") -> "Multisegment":
        return Multisegment(self.segments + other.segments)

    def shift(self, k: int) -> "Multisegment":
        return Multisegment(tuple((s.start + k, s.end + k) for s in self.segments))

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class CyclicMultisegment:
    n: int
    segments: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be positive")
        norm = []
        for s in _sorted_segments(self.segments):
            shift = ((s.start - 1) // self.n) * self.n
            norm.append(Segment(s.start - shift, s.end - shift))
        object.__setattr__(self, "segments", tuple(sorted(norm)))

    @property
    def k(self) -> int:
        return len(self.segments)

    def dimension(self) -> tuple:
        out = [0] * self.n
        for s in self.segments:
            for x in range(s.start, s.end + 1):
                out[(x - 1) % self.n] += 1
        return tuple(out)

    def __add__(self, other: "CyclicMultisegment") -> "CyclicMultisegment":
        if self.n != other.n:
            raise DimensionMismatchError("moduli differ")
        return CyclicMultisegment(self.n, self.segments + other.segments)

    def __str__(self) -> str:
        return to_text(self)


AnyMultisegment = Union[Multisegment, CyclicMultisegment]


def dimension_vector(m: Multisegment, n: Optional[int] = None) -> tuple:
    if n is None:
        n = ambient_range(m)
    dim = m.dimension()
    if any(x < 1 or x > n for x in dim):
        raise ValueError(f"contents of {m} leave [1, {n}]")
    return tuple(dim.get(i, 0) for i in range(1, n + 1))


def ambient_range(m: Multisegment) -> int:
    """Smallest ``n`` with every content in ``[1, n]``."""
    lo, hi = m.support()
    if m.segments and lo < 1:
        raise ValueError(f"contents of {m} must be positive; shift it first")
    return max(hi, 1)


# matrix encodings

def to_matrix(m: Multisegment, n: Optional[int] = None) -> CosetMatrix:
    if n is None:
        n = ambient_range(m)
    dimension_vector(m, n)  # range check
    rows = [[0] * n for _ in range(n)]
    for s in m.segments:
        rows[s.start - 1][s.end - 1] += 1
    for i in range(2, n + 1):
        rows[i - 1][i - 2] = sum(1 for s in m.segments if s.start <= i - 1 and s.end >= i)
    return CosetMatrix(tuple(tuple(r) for r in rows))


def from_matrix(mat: CosetMatrix) -> Multisegment:
    segs = []
    for i in range(1, mat.nrows + 1):
        for j in range(i, mat.ncols + 1):
            segs.extend([(i, j)] * mat[i, j])
    return Multisegment(tuple(segs))


def _lift_count(s: Segment, n: int, i: int) -> int:
    """Lifts ``[a + tn, b + tn]`` of ``s`` with ``a + tn <= i - 1`` and ``b + tn >= i``."""
    lo = _ceil_div(i - s.end, n)
    hi = (i - 1 - s.start) // n
    return max(0, hi - lo + 1)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def to_matrix_cyclic(m: CyclicMultisegment) -> PeriodicMatrix:
    n = m.n
    rows: list[dict[int, int]] = [dict() for _ in range(n)]
    for s in m.segments:
        rows[s.start - 1][s.end] = rows[s.start - 1].get(s.end, 0) + 1
    for i in range(1, n + 1):
        c = sum(_lift_count(s, n, i) for s in m.segments)
        if c:
            rows[i - 1][i - 1] = rows[i - 1].get(i - 1, 0) + c
    return PeriodicMatrix(n, n, tuple(rows))


def from_matrix_cyclic(mat: PeriodicMatrix) -> CyclicMultisegment:
    segs = []
    for i in range(1, mat.n + 1):
        for j, v in mat.row(i).items():
            if j >= i:
                segs.extend([(i, j)] * v)
    return CyclicMultisegment(mat.n, tuple(segs))


def encode(m: AnyMultisegment, n: Optional[int] = None):
    if isinstance(m, CyclicMultisegment):
        return to_matrix_cyclic(m)
    return to_matrix(m, n)


def _common_range(m: Multisegment, m2: Multisegment, n: Optional[int]) -> int:
    if n is not None:
        return n
    return max(ambient_range(m), ambient_range(m2))


def _place(*ms: AnyMultisegment) -> tuple:
    """Shift linear multisegments together so that every content is positive.

    Order, dimension and IC polynomials do not see a common shift.
    """
    if not ms or isinstance(ms[0], CyclicMultisegment):
        return ms
    lo = min((s.start for m in ms for s in m.segments), default=1)
    if lo >= 1:
        return ms
    return tuple(m.shift(1 - lo) for m in ms)


def _check_dims(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None):
    if isinstance(m, CyclicMultisegment) != isinstance(m2, CyclicMultisegment):
        raise DimensionMismatchError("cannot mix linear and cyclic multisegments")
    if isinstance(m, CyclicMultisegment):
        if m.n != m2.n or m.dimension() != m2.dimension():
            raise DimensionMismatchError(f"dimension vectors of {m} and {m2} differ")
    else:
        nn = _common_range(m, m2, n)
        if dimension_vector(m, nn) != dimension_vector(m2, nn):
            raise DimensionMismatchError(f"dimension vectors of {m} and {m2} differ")


def shift_f(mat: PeriodicMatrix, dims: Sequence[int]) -> int:
    """``f`` with ``m_{<=i,>=j} + f = d_j + ... + d_i`` for ``i >= j`` (test at ``i = j = 1``)."""
    return dims[0] - mat.ne(1, 1)


# order, dimension

def orbit_dim(m: AnyMultisegment, n: Optional[int] = None) -> int:
    (m,) = _place(m)
    if isinstance(m, CyclicMultisegment):
        dims = m.dimension()
        return acm.length_aff(to_matrix_cyclic(m)) - sum(d * (d - 1) // 2 for d in dims)
    dims = dimension_vector(m, n if n is not None else ambient_range(m))
    return cm.length(to_matrix(m, len(dims))) - sum(d * (d - 1) // 2 for d in dims)


def closure_leq(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None) -> bool:
    m, m2 = _place(m, m2)
    try:
        _check_dims(m, m2, n)
    except DimensionMismatchError:
        return False
    if isinstance(m, CyclicMultisegment):
        return acm.leq_aff(to_matrix_cyclic(m), to_matrix_cyclic(m2))
    nn = _common_range(m, m2, n)
    return cm.leq(to_matrix(m, nn), to_matrix(m2, nn))


def rank(m: AnyMultisegment, i: int, j: int) -> int:
    """Rank of the path map from vertex ``i`` to ``j`` (``i <= j``): segments covering ``[i, j]``."""
    if isinstance(m, CyclicMultisegment):
        total = 0
        for s in m.segments:
            # lifts [a + tn, b + tn] containing [i, j]
            lo = _ceil_div(j - s.end, m.n)
            hi = (i - s.start) // m.n
            total += max(0, hi - lo + 1)
        return total
    return sum(1 for s in m.segments if s.start <= i and s.end >= j)


def closure_leq_rank(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None) -> bool:
    """Degeneration order as rank domination of every path map."""
    m, m2 = _place(m, m2)
    try:
        _check_dims(m, m2, n)
    except DimensionMismatchError:
        return False
    if isinstance(m, CyclicMultisegment):
        longest = max((len(s) for s in m.segments + m2.segments), default=0)
        pairs = ((i, j) for i in range(1, m.n + 1) for j in range(i + 1, i + longest + 1))
    else:
        nn = _common_range(m, m2, n)
        pairs = ((i, j) for i in range(1, nn + 1) for j in range(i + 1, nn + 1))
    return all(rank(m, i, j) <= rank(m2, i, j) for i, j in pairs)


def mmax(dims: Sequence[int]) -> Multisegment:
    """The multisegment of the dense orbit for dimension vector ``dims`` on ``[1, n]``."""
    n = len(dims)

    def r(i: int, j: int) -> int:
        if i < 1 or j > n:
            return 0
        return min(dims[i - 1:j])

    segs = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            mult = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            segs.extend([(i, j)] * mult)
    return Multisegment(tuple(segs))


def enumerate_class(dims: Sequence[int], max_segments: Optional[int] = None) -> list[Multisegment]:
    """All multisegments on ``[1, n]`` with dimension vector ``dims``.

    ``max_segments`` drops those with more segments than that.
    """
    n = len(dims)
    cap = max_segments if max_segments is not None else sum(dims)
    out: list[Multisegment] = []
    left = list(dims)
    chosen: list[tuple] = []

    def rec(last: tuple):
        p = next((i for i in range(n) if left[i]), None)
        if p is None:
            out.append(Multisegment(tuple(chosen)))
            return
        if len(chosen) >= cap:
            return
        start = p + 1
        min_end = last[1] if last[0] == start else start
        for end in range(start, n + 1):
            if not left[end - 1]:
                break
            if end < min_end:
                continue
            for x in range(start - 1, end):
                left[x] -= 1
            chosen.append((start, end))
            rec((start, end))
            chosen.pop()
            for x in range(start - 1, end):
                left[x] += 1

    rec((0, 0))
    return out


def enumerate_class_cyclic(dims: Sequence[int],
                           max_segments: Optional[int] = None) -> list[CyclicMultisegment]:
    """All cyclic multisegments with residue dimension vector ``dims``."""
    n = len(dims)
    total = sum(dims)
    cap = max_segments if max_segments is not None else total
    cands = [(s, s + L - 1) for s in range(1, n + 1) for L in range(1, total + 1)]
    out: list[CyclicMultisegment] = []
    left = list(dims)
    chosen: list[tuple] = []

    def fits(seg, sign):
        for x in range(seg[0], seg[1] + 1):
            left[(x - 1) % n] -= sign
        ok = all(v >= 0 for v in left)
        return ok

    def rec(idx: int, remaining: int):
        if remaining == 0:
            out.append(CyclicMultisegment(n, tuple(chosen)))
            return
        if len(chosen) >= cap:
            return
        for c in range(idx, len(cands)):
            seg = cands[c]
            if seg[1] - seg[0] + 1 > remaining:
                continue
            if fits(seg, 1):
                chosen.append(seg)
                rec(c, remaining - (seg[1] - seg[0] + 1))
                chosen.pop()
            fits(seg, -1)

    rec(0, total)
    return out


def upper_set(m: AnyMultisegment, n: Optional[int] = None) -> list:
    """``<m>``: every multisegment of the same class lying above ``m``.

    Ranks only grow going up, and the number of segments is the total
    dimension minus the ranks of the arrows, so nothing above ``m`` has more
    segments than ``m``.
    """
    if isinstance(m, CyclicMultisegment):
        return [x for x in enumerate_class_cyclic(m.dimension(), m.k) if closure_leq(m, x)]
    (placed,) = _place(m)
    back = m.support()[0] - placed.support()[0] if m.segments else 0
    nn = n if n is not None else ambient_range(placed)
    return [x.shift(back) for x in enumerate_class(dimension_vector(placed, nn), placed.k)
            if closure_leq(placed, x, nn)]


def maximal_elements(m: AnyMultisegment, n: Optional[int] = None) -> set:
    ups = upper_set(m, n)
    return {x for x in ups
            if not any(y != x and closure_leq(x, y, n) for y in ups)}


def segment_interval(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None) -> list:
    m, m2 = _place(m, m2)
    if isinstance(m, CyclicMultisegment):
        cls = enumerate_class_cyclic(m.dimension())
        return [x for x in cls if closure_leq(m, x) and closure_leq(x, m2)]
    nn = _common_range(m, m2, n)
    cls = enumerate_class(dimension_vector(m, nn))
    return [x for x in cls if closure_leq(m, x, nn) and closure_leq(x, m2, nn)]


# reduction and IC polynomials

def _minus_part(mat: CosetMatrix) -> CosetMatrix:
    n = mat.nrows
    rows = [[0] * n for _ in range(n)]
    for i in range(2, n + 1):
        rows[i - 1][i - 2] = mat[i, i - 1]
    return CosetMatrix(tuple(tuple(r) for r in rows))


def _subtract(a: CosetMatrix, b: CosetMatrix) -> CosetMatrix:
    rows = []
    for ra, rb in zip(a.entries, b.entries):
        row = tuple(x - y for x, y in zip(ra, rb))
        if any(v < 0 for v in row):
            raise ValueError("subtraction leaves a negative entry")
        rows.append(row)
    return CosetMatrix(tuple(rows))


def _minus_part_cyclic(mat: PeriodicMatrix) -> PeriodicMatrix:
    rows = []
    for i in range(1, mat.n + 1):
        v = mat[i, i - 1]
        rows.append({i - 1: v} if v else {})
    return PeriodicMatrix(mat.n, mat.nprime, tuple(rows))


def reduce(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None):
    """Both encodings with the subdiagonal part of ``m`` removed."""
    m, m2 = _place(m, m2)
    if not closure_leq(m, m2, n):
        raise NotComparableError(f"{m} is not below {m2}")
    if isinstance(m, CyclicMultisegment):
        a, b = to_matrix_cyclic(m), to_matrix_cyclic(m2)
        minus = _minus_part_cyclic(a)
        return a - minus, b - minus
    nn = _common_range(m, m2, n)
    a, b = to_matrix(m, nn), to_matrix(m2, nn)
    minus = _minus_part(a)
    return _subtract(a, minus), _subtract(b, minus)


def reduce_shifted(m: AnyMultisegment, m2: AnyMultisegment, bs: Sequence[int],
                   n: Optional[int] = None):
    """Subtract ``a`` with ``a_{i,i-1} = d_i - b_i`` from both encodings.

    ``bs`` lists ``b_1..b_n``; it must satisfy ``b_1 = d_1`` in the linear
    case, and both matrices need ``m_{i,i-1} >= d_i - b_i``.
    """
    m, m2 = _place(m, m2)
    _check_dims(m, m2, n)
    if isinstance(m, CyclicMultisegment):
        dims = m.dimension()
        rows = [{i - 1: dims[i - 1] - bs[i - 1]} for i in range(1, m.n + 1)]
        shift = PeriodicMatrix(m.n, m.n, tuple(rows))
        return to_matrix_cyclic(m) - shift, to_matrix_cyclic(m2) - shift
    nn = _common_range(m, m2, n)
    dims = dimension_vector(m, nn)
    if bs[0] != dims[0]:
        raise ValueError("b_1 must equal d_1")
    rows = [[0] * nn for _ in range(nn)]
    for i in range(2, nn + 1):
        rows[i - 1][i - 2] = dims[i - 1] - bs[i - 1]
    shift = CosetMatrix(tuple(tuple(r) for r in rows))
    return _subtract(to_matrix(m, nn), shift), _subtract(to_matrix(m2, nn), shift)


def _kl(a, b) -> QPoly:
    if isinstance(a, PeriodicMatrix):
        return acm.kl_poly_mat_aff(a, b)
    return cm.kl_poly_mat(a, b)


def ic_poly(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None,
            method: str = "reduced") -> QPoly:
    """``IC_{m, m2}``.

    ``"reduced"`` evaluates KL polynomials in ``S_k`` (``k`` = number of
    segments of ``m``), ``"full"`` in ``S_d`` on the unreduced encodings,
    ``"both"`` checks they agree.
    """
    m, m2 = _place(m, m2)
    _check_dims(m, m2, n)
    if method == "both":
        a = ic_poly(m, m2, n, "reduced")
        b = ic_poly(m, m2, n, "full")
        if a != b:
            raise AssertionError(f"IC mismatch for {m}, {m2}: {a} vs {b}")
        return a
    if not closure_leq(m, m2, n):
        return ZERO
    if m == m2:
        return ONE
    if method == "reduced":
        return _kl(*reduce(m, m2, n))
    if method == "full":
        if isinstance(m, CyclicMultisegment):
            return _kl(to_matrix_cyclic(m), to_matrix_cyclic(m2))
        nn = _common_range(m, m2, n)
        return _kl(to_matrix(m, nn), to_matrix(m2, nn))
    raise ValueError(f"unknown method {method!r}")


def ic_inverse(m: AnyMultisegment, m2: AnyMultisegment, n: Optional[int] = None,
               method: str = "reduced") -> QPoly:
    """Entry ``(m, m2)`` of the inverse of the IC matrix.

    ``"reduced"`` inverts the KL matrix of the reduced encodings;
    ``"segments"`` back-substitutes over the multisegment interval using
    :func:`ic_poly`; ``"both"`` checks they agree.
    """
    m, m2 = _place(m, m2)
    _check_dims(m, m2, n)
    if method == "both":
        a = ic_inverse(m, m2, n, "reduced")
        b = ic_inverse(m, m2, n, "segments")
        if a != b:
            raise AssertionError(f"inverse IC mismatch for {m}, {m2}: {a} vs {b}")
        return a
    if not closure_leq(m, m2, n):
        return ZERO
    if m == m2:
        return ONE
    if method == "reduced":
        a, b = reduce(m, m2, n)
        if isinstance(a, PeriodicMatrix):
            return acm.kl_inverse_mat_aff(a, b)
        return cm.kl_inverse_mat(a, b)
    if method == "segments":
        nn = None if isinstance(m, CyclicMultisegment) else _common_range(m, m2, n)
        iv = segment_interval(m, m2, nn)
        return inverse_by_backsubstitution(
            lambda x, y: ic_poly(x, y, nn), iv, m, m2, lambda x: orbit_dim(x, nn))
    raise ValueError(f"unknown method {method!r}")


# weights and dot actions

def shifted(lam: Sequence[int]) -> tuple:
    """``(lambda_s - s)_s``."""
    return tuple(v - s for s, v in enumerate(lam, 1))


def in_domain(lam: Sequence[int]) -> bool:
    sh = shifted(lam)
    return all(a >= b for a, b in zip(sh, sh[1:]))


def in_domain_affine(lam: Sequence[int], n: int) -> bool:
    return in_domain(lam) and (not lam or lam[-1] - len(lam) >= lam[0] - 1 - n)


def extend_weight(lam: Sequence[int], n: int, s: int) -> int:
    """``lambda_s`` for any integer ``s`` under ``lambda_{s+k} = lambda_s + k - n``."""
    k = len(lam)
    q, r = divmod(s - 1, k)
    return lam[r] + q * (k - n)


def dot(w: Perm, lam: Sequence[int]) -> tuple:
    if w.degree != len(lam):
        raise DimensionMismatchError(f"permutation of degree {w.degree} on a weight of length {len(lam)}")
    winv = sg.inverse(w)
    return tuple(lam[winv(i) - 1] - winv(i) + i for i in range(1, len(lam) + 1))


def dot_affine(w: AffPerm, lam: Sequence[int], n: int) -> tuple:
    """Dot action of an affine permutation; ``tau`` acts by the same rule."""
    if w.degree != len(lam):
        raise DimensionMismatchError(f"affine permutation of degree {w.degree} on a weight of length {len(lam)}")
    winv = asg.inverse(w)
    out = []
    for i in range(1, len(lam) + 1):
        j = winv(i)
        out.append(extend_weight(lam, n, j) - j + i)
    return tuple(out)


def contains(lam: Sequence[int], mu: Sequence[int]) -> bool:
    return len(lam) == len(mu) and all(a >= b for a, b in zip(lam, mu))


def skew(lam: Sequence[int], mu: Sequence[int], n: Optional[int] = None) -> AnyMultisegment:
    """``lambda / mu = sum_s [mu_s - s + 1, lambda_s - s]``, empty segments dropped."""
    if not contains(lam, mu):
        raise NotComparableError(f"{tuple(lam)} does not contain {tuple(mu)}")
    segs = tuple((b - s + 1, a - s) for s, (a, b) in enumerate(zip(lam, mu), 1) if a > b)
    if n is None:
        return Multisegment(segs)
    return CyclicMultisegment(n, segs)


def stabilizer_generators(lam: Sequence[int], n: Optional[int] = None) -> tuple:
    """Simple reflections fixing ``lam`` under the dot action."""
    k = len(lam)
    sh = shifted(lam)
    gens = [i for i in range(1, k) if sh[i - 1] == sh[i]]
    if n is not None and k >= 2 and lam[k - 1] - k == lam[0] - 1 - n:
        gens.append(0)
    return tuple(sorted(gens))


def has_trivial_stabilizer(lam: Sequence[int], n: Optional[int] = None) -> bool:
    if n is None:
        return len(set(shifted(lam))) == len(lam)
    return len({v % n for v in shifted(lam)}) == len(lam)


# standard forms

@dataclass(frozen=True)
class StandardForm:
    """The data attached to weights ``lam, mu`` in the fundamental domain.

    ``n`` set means the cyclic (affine) setting.  Gives the membership test
    for ``S[lam, mu]``, the longest-in-double-coset map ``w -> w°`` and the
    poset map ``w -> lam/(w.mu)``.
    """

    lam: tuple
    mu: tuple
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(self.lam))
        object.__setattr__(self, "mu", tuple(self.mu))
        if len(self.lam) != len(self.mu):
            raise DimensionMismatchError("weights of different lengths")
        check = in_domain if self.n is None else (lambda x: in_domain_affine(x, self.n))
        for name, x in (("lambda", self.lam), ("mu", self.mu)):
            if not check(x):
                raise FundamentalDomainError(f"{name} = {x} is outside the fundamental domain")

    @property
    def k(self) -> int:
        return len(self.lam)

    def act(self, w, lam: Sequence[int]) -> tuple:
        return dot(w, lam) if self.n is None else dot_affine(w, lam, self.n)

    def contains(self, w) -> bool:
        return contains(self.lam, self.act(w, self.mu))

    def multisegment(self, w) -> AnyMultisegment:
        return skew(self.lam, self.act(w, self.mu), self.n)

    def circ(self, w):
        """Longest element of ``W_lam w W_mu``."""
        if self.n is None:
            return self._circ_finite(w)
        return self._circ_affine(w)

    def _circ_finite(self, w: Perm) -> Perm:
        k = self.k
        lo = min(min(shifted(self.lam)), min(v + 1 for v in shifted(self.mu)))
        hi = max(max(shifted(self.lam)), max(v + 1 for v in shifted(self.mu)))
        rows = Counter(v + 1 for v in shifted(self.mu))
        cols = Counter(shifted(self.lam))
        bs = [rows.get(i, 0) for i in range(lo, hi + 1)]
        cs = [cols.get(j, 0) for j in range(lo, hi + 1)]
        w0 = sg.longest_element(k)
        conj = sg.compose(sg.compose(w0, w), w0)
        rep = cm.longest_rep(cm.psi(conj, bs, cs))
        return sg.compose(sg.compose(w0, rep), w0)

    def _circ_affine(self, w: AffPerm) -> AffPerm:
        k, n = self.k, self.n
        assert n is not None

        def sh(x, s):
            return extend_weight(x, n, s) - s

        # blocks B_i = {-s : mu_s - s + 1 = i}, C_j = {-s : lam_s - s = j}
        bs = [0] * n
        cs = [0] * n
        for s in range(1, k + 1):
            bs[(sh(self.mu, s) + 1 - 1) % n] += 1
            cs[(sh(self.lam, s) - 1) % n] += 1
        row_start = 1 - _first_below(lambda s: sh(self.mu, s) < 0)
        col_start = 1 - _first_below(lambda s: sh(self.lam, s) <= 0)
        twisted = _tau_twist(w)
        mat = acm.psi_aff(twisted, bs, cs, row_start, col_start)
        return _tau_twist(acm.longest_rep_aff(mat, row_start, col_start))

    def circ_by_ascent(self, w):
        """``w°`` by climbing through left and right ascents inside the double coset."""
        left = stabilizer_generators(self.lam, self.n)
        right = stabilizer_generators(self.mu, self.n)
        mod = sg if self.n is None else asg
        changed = True
        while changed:
            changed = False
            for s in left:
                if s not in mod.left_descents(w):
                    w = mod.compose(mod.simple_reflection(self.k, s), w)
                    changed = True
            for s in right:
                if s not in mod.right_descents(w):
                    w = mod.compose(w, mod.simple_reflection(self.k, s))
                    changed = True
        return w

    def elements(self) -> list:
        """``S[lam, mu]``: a lower ideal, found by climbing from the identity."""
        if self.n is None:
            return [w for w in sg.all_perms(self.k) if self.contains(w)]
        start = asg.identity(self.k)
        if not self.contains(start):
            return []
        if self.k == 1:
            return [start]
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for s in range(self.k):
                y = asg.compose(x, asg.simple_reflection(self.k, s))
                if y not in seen and asg.length(y) > asg.length(x) and self.contains(y):
                    seen.add(y)
                    queue.append(y)
        return sorted(seen, key=lambda x: (asg.length(x), x.window))

    def circ_elements(self) -> list:
        return sorted({self.circ(w) for w in self.elements()},
                      key=lambda x: (self._length(x), _key(x)))

    def _length(self, w) -> int:
        return sg.length(w) if self.n is None else asg.length(w)

    def kl(self, w, w2) -> QPoly:
        return sg.kl_poly(w, w2) if self.n is None else asg.kl_poly(w, w2)


def _key(w):
    return w.oneline if isinstance(w, Perm) else w.window


def _first_below(pred) -> int:
    """Smallest ``s`` with ``pred(s)`` for a predicate that is monotone in ``s``."""
    s = 0
    while pred(s):
        s -= 1
    while not pred(s):
        s += 1
    return s


def _tau_twist(w: AffPerm) -> AffPerm:
    """``i -> -w(-i)``."""
    d = w.degree
    return AffPerm(tuple(-w(-i) for i in range(1, d + 1)))


def coset_interval_data(lam, mu, n: Optional[int] = None) -> StandardForm:
    return StandardForm(tuple(lam), tuple(mu), n)


def sign_inverse_check(lam, mu, n: Optional[int] = None) -> bool:
    """Check ``IC^{-1}_{lam/mu, lam/(w.mu)} = sign(w)`` over ``S[lam, mu]``."""
    if not (has_trivial_stabilizer(lam, n) and has_trivial_stabilizer(mu, n)):
        raise FundamentalDomainError("sign formula needs trivial stabilizers")
    form = StandardForm(tuple(lam), tuple(mu), n)
    base = form.multisegment(sg.identity(form.k) if n is None else asg.identity(form.k))
    for w in form.elements():
        target = form.multisegment(w)
        eps = sg.sign(w) if n is None else asg.sign(w)
        if ic_inverse(base, target) != QPoly.constant(eps):
            return False
    return True


# decomposition numbers

def to_domain(lam: Sequence[int], n: int) -> tuple[AffPerm, tuple]:
    """``(w, w.lam)`` with ``w.lam`` in the affine fundamental domain."""
    k = len(lam)
    w = asg.identity(k)
    cur = tuple(lam)
    if k == 1:
        return w, cur
    while True:
        sh = shifted(cur)
        s = next((i for i in range(1, k) if sh[i - 1] < sh[i]), None)
        if s is None and cur[k - 1] - k < cur[0] - 1 - n:
            s = 0
        if s is None:
            return w, cur
        g = asg.simple_reflection(k, s)
        cur = dot_affine(g, cur, n)
        w = asg.compose(g, w)


def same_orbit(lam: Sequence[int], mu: Sequence[int], n: int) -> bool:
    """Dot-orbit test: residues of ``lam_s - s`` mod ``n`` with multiplicity, and the sum."""
    if len(lam) != len(mu):
        return False
    a, b = shifted(lam), shifted(mu)
    return sorted(x % n for x in a) == sorted(x % n for x in b) and sum(a) == sum(b)


def _pad(p: Sequence[int], k: int) -> tuple:
    p = tuple(int(x) for x in p)
    if len(p) > k:
        raise ValueError(f"partition {p} has more than {k} parts")
    if any(x < 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
        raise ValueError(f"{p} is not a partition")
    return p + (0,) * (k - len(p))


def decomp_multiplicity(lam: Sequence[int], mu: Sequence[int], n: int, k: int) -> int:
    """Alternating sum over ``S_k`` of affine KL polynomials at ``q = 1``."""
    lam, mu = _pad(lam, k), _pad(mu, k)
    if not same_orbit(lam, mu, n):
        return 0
    zero = (0,) * k
    wl, lam_d = to_domain(lam, n)
    wm, mu_d = to_domain(mu, n)
    w0, zero_d = to_domain(zero, n)
    if lam_d != mu_d:
        raise AssertionError("orbit test and normal forms disagree")
    form = StandardForm(lam_d, zero_d, n)
    w0inv = asg.inverse(w0)
    target = form.circ(asg.compose(wm, w0inv))
    total = 0
    for p in sg.all_perms(k):
        x = AffPerm(p.oneline)
        elem = form.circ(asg.compose(asg.compose(wl, x), w0inv))
        val = asg.kl_poly(elem, target).eval_at_one()
        if val:
            total += sg.sign(p) * val
    return total


def decomp_multiplicity_by_segments(lam: Sequence[int], mu: Sequence[int], n: int, k: int) -> int:
    """The same number via ``sum_{w in S_k[lam, 0]} sign(w) IC_{lam/(w.0), mu/0}(1)``."""
    lam, mu = _pad(lam, k), _pad(mu, k)
    zero = (0,) * k
    target = skew(mu, zero, n)
    total = 0
    for p in sg.all_perms(k):
        w0mu = dot(p, zero)
        if not contains(lam, w0mu):
            continue
        src = skew(lam, w0mu, n)
        if src.dimension() != target.dimension():
            continue
        total += sg.sign(p) * ic_poly(src, target).eval_at_one()
    return total


# text and JSON

_SEG = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse(text: str) -> AnyMultisegment:
    """``"[1,2]+[2,2]"``, optionally followed by ``"mod n"``; ``"0"`` is empty."""
    text = text.strip()
    n = None
    m = re.search(r"\bmod\s+(\d+)\s*$", text)
    if m:
        n = int(m.group(1))
        text = text[: m.start()].strip()
    body = text.replace(" ", "")
    if body in ("", "0"):
        segs: list = []
    else:
        parts = body.split("+")
        segs = []
        for part in parts:
            mm = _SEG.fullmatch(part)
            if not mm:
                raise ValueError(f"cannot parse segment {part!r}")
            segs.append((int(mm.group(1)), int(mm.group(2))))
    if n is None:
        return Multisegment(tuple(segs))
    return CyclicMultisegment(n, tuple(segs))


def to_text(m: AnyMultisegment) -> str:
    body = "+".join(str(s) for s in m.segments) or "0"
    if isinstance(m, CyclicMultisegment):
        return f"{body} mod {m.n}"
    return body


def to_json(m: AnyMultisegment) -> dict:
    out: dict = {"segments": [[s.start, s.end] for s in m.segments]}
    if isinstance(m, CyclicMultisegment):
        out["mod"] = m.n
    return out


def from_json(data) -> AnyMultisegment:
    if isinstance(data, str):
        data = json.loads(data)
    segs = tuple(tuple(s) for s in data["segments"])
    if data.get("mod") is not None:
        return CyclicMultisegment(int(data["mod"]), segs)
    return Multisegment(segs)


def parse_weight(text: str) -> tuple:
    body = text.strip().strip("()[]")
    return tuple(int(x) for x in re.split(r"[\s,]+", body) if x)


def weight_text(lam: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in lam) + ")"
