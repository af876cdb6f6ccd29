"""Matrices indexing parabolic double cosets of ``S_d``.

With ``[1, d]`` cut into consecutive blocks ``B_1, ..., B_n`` (sizes ``b_i``)
and ``C_1, ..., C_n'`` (sizes ``c_j``), the double coset
``S_(c) w S_(b)`` is recorded by the matrix ``m_ij = |w(B_i) & C_j|``.  Order,
length and KL polynomials of such matrices are those of the longest element
``w_m`` of the coset, and can be read off the northeast sector sums
``m_{<=i,>=j}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

from . import symgroup as sg
from .klengine import inverse_by_backsubstitution
from .qpoly import ONE, ZERO, QPoly
from .symgroup import Perm


class SpecMismatchError(ValueError):
    """Two matrices (or a matrix and a permutation) have different block sizes."""


class NotComparableError(ValueError):
    pass


@dataclass(frozen=True)
class BlockSpec:
    """Block sizes ``(b_1, ..., b_n)``; zero-size blocks are allowed."""

    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if any(s < 0 for s in sizes):
            raise ValueError("block sizes must be nonnegative")
        object.__setattr__(self, "sizes", sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def blocks(self) -> list[range]:
        out, start = [], 1
        for s in self.sizes:
            out.append(range(start, start + s))
            start += s
        return out

    def block_of(self) -> dict[int, int]:
        """Map each element of ``[1, d]`` to the (1-based) index of its block."""
        return {a: i for i, blk in enumerate(self.blocks(), 1) for a in blk}


def _spec(x) -> BlockSpec:
    return x if isinstance(x, BlockSpec) else BlockSpec(tuple(x))


@dataclass(frozen=True)
class CosetMatrix:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        if any(v < 0 for r in rows for v in r):
            raise ValueError("matrix entries must be nonnegative")
        object.__setattr__(self, "entries", rows)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0])

    @property
    def rowsums(self) -> tuple:
        return tuple(sum(r) for r in self.entries)

    @property
    def colsums(self) -> tuple:
        return tuple(sum(c) for c in zip(*self.entries))

    @property
    def rowspec(self) -> BlockSpec:
        return BlockSpec(self.rowsums)

    @property
    def colspec(self) -> BlockSpec:
        return BlockSpec(self.colsums)

    @property
    def degree(self) -> int:
        return sum(self.rowsums)

    def __getitem__(self, ij) -> int:
        """1-based entry ``m_{i,j}``; zero outside the matrix."""
        i, j = ij
        if 1 <= i <= self.nrows and 1 <= j <= self.ncols:
            return self.entries[i - 1][j - 1]
        return 0

    @cached_property
    def _ne(self) -> tuple:
        # ne[i][j] = m_{<=i, >=j} with 0 <= i <= n, 1 <= j <= n' + 1
        n, n2 = self.nrows, self.ncols
        table = [[0] * (n2 + 2) for _ in range(n + 1)]
        for i in range(1, n + 1):
            row = self.entries[i - 1]
            acc = 0
            for j in range(n2, 0, -1):
                acc += row[j - 1]
                table[i][j] = table[i - 1][j] + acc
        return tuple(tuple(r) for r in table)

    def ne(self, i: int, j: int) -> int:
        """``m_{<=i, >=j}``."""
        i = min(max(i, 0), self.nrows)
        j = min(max(j, 1), self.ncols + 1)
        return self._ne[i][j]

    def sw(self, i: int, j: int) -> int:
        """``m_{>=i, <=j}``."""
        total = 0
        for a in range(max(i, 1), self.nrows + 1):
            total += sum(self.entries[a - 1][: max(min(j, self.ncols), 0)])
        return total

    def transpose(self) -> "CosetMatrix":
        return CosetMatrix(tuple(zip(*self.entries)))

    def __str__(self) -> str:
        return to_text(self)


def _check_specs(m: CosetMatrix, m2: CosetMatrix) -> None:
    if m.rowsums != m2.rowsums or m.colsums != m2.colsums:
        raise SpecMismatchError(
            f"row/column sums differ: {m.rowsums};{m.colsums} vs {m2.rowsums};{m2.colsums}")


def psi(w: Perm, rspec, cspec) -> CosetMatrix:
    """``psi(w)_{ij} = |w(B_i) & C_j|``."""
    rspec, cspec = _spec(rspec), _spec(cspec)
    if rspec.total != w.degree or cspec.total != w.degree:
        raise SpecMismatchError(
            f"block sizes {rspec.sizes}, {cspec.sizes} do not add up to {w.degree}")
    col_of = cspec.block_of()
    out = [[0] * len(cspec.sizes) for _ in rspec.sizes]
    for i, blk in enumerate(rspec.blocks()):
        for a in blk:
            out[i][col_of[w(a)] - 1] += 1
    return CosetMatrix(tuple(tuple(r) for r in out))


def longest_rep(m: CosetMatrix) -> Perm:
    """The longest permutation ``w_m`` with ``psi(w_m) = m``.

    Row ``i`` sends successive elements of ``B_i`` to the blocks ``C_j`` read
    from right to left, each time taking the largest unused element of
    ``C_j``.
    """
    used = [0] * m.ncols
    cblocks = m.colspec.blocks()
    image: list[int] = []
    for i, row in enumerate(m.entries):
        for j in range(m.ncols - 1, -1, -1):
            for _ in range(row[j]):
                blk = cblocks[j]
                image.append(blk[len(blk) - 1 - used[j]])
                used[j] += 1
    return Perm(tuple(image))


def longest_rep_formula(m: CosetMatrix) -> Perm:
    """``w_m`` computed entry by entry from the explicit position formula."""
    cblocks = m.colspec.blocks()
    image = []
    for i, blk in enumerate(m.rowspec.blocks(), 1):
        for s in range(1, len(blk) + 1):
            j = max(j for j in range(1, m.ncols + 1) if _row_tail(m, i, j) >= s)
            t = _col_head(m, i - 1, j) + s - _row_tail(m, i, j + 1)
            cb = cblocks[j - 1]
            image.append(cb[len(cb) - t])
    return Perm(tuple(image))


def _row_tail(m: CosetMatrix, i: int, j: int) -> int:
    return sum(m[i, jj] for jj in range(j, m.ncols + 1))


def _col_head(m: CosetMatrix, i: int, j: int) -> int:
    return sum(m[ii, j] for ii in range(1, i + 1))


def length(m: CosetMatrix) -> int:
    total = 0
    for i in range(1, m.nrows + 1):
        for j in range(1, m.ncols + 1):
            v = m[i, j]
            if v:
                total += v * m.ne(i, j) - v * (v + 1) // 2
    return total


def leq(m: CosetMatrix, m2: CosetMatrix) -> bool:
    """Northeast sector-sum dominance, equivalent to Bruhat order of ``w_m``."""
    _check_specs(m, m2)
    for i in range(1, m.nrows + 1):
        for j in range(1, m.ncols + 1):
            if m.ne(i, j) > m2.ne(i, j):
                return False
    return True


def leq_southwest(m: CosetMatrix, m2: CosetMatrix) -> bool:
    """The same order tested through southwest sector sums."""
    _check_specs(m, m2)
    for i in range(1, m.nrows + 1):
        for j in range(1, m.ncols + 1):
            if m.sw(i, j) > m2.sw(i, j):
                return False
    return True


def elementary(m: CosetMatrix, i: int, j: int) -> CosetMatrix:
    """``m`` with one subtracted at ``(i, j)``."""
    if m[i, j] < 1:
        raise ValueError(f"entry ({i},{j}) is zero")
    rows = [list(r) for r in m.entries]
    rows[i - 1][j - 1] -= 1
    return CosetMatrix(tuple(tuple(r) for r in rows))


def cancellable_entry(m: CosetMatrix, m2: CosetMatrix, i: int, j: int) -> bool:
    if not leq(m, m2):
        raise NotComparableError("first matrix is not below the second")
    return (m[i, j] >= 1 and m.ne(i - 1, j) == m2.ne(i - 1, j)
            and m.ne(i, j + 1) == m2.ne(i, j + 1))


def cancel_entry(m: CosetMatrix, i: int, j: int) -> CosetMatrix:
    return elementary(m, i, j)


def cancelled_position(m: CosetMatrix, i: int, j: int) -> int:
    """The largest ``a`` in ``B_i`` with ``w_m(a)`` in ``C_j``.

    Cancelling ``a`` from ``w_m`` gives ``w_{m - e}``.
    """
    if m[i, j] < 1:
        raise ValueError(f"entry ({i},{j}) is zero")
    w = longest_rep(m)
    cblock = set(m.colspec.blocks()[j - 1])
    return max(a for a in m.rowspec.blocks()[i - 1] if w(a) in cblock)


def kl_poly_mat(m: CosetMatrix, m2: CosetMatrix) -> QPoly:
    _check_specs(m, m2)
    return sg.kl_poly(longest_rep(m), longest_rep(m2))


def enumerate_leq(m2: CosetMatrix) -> set[CosetMatrix]:
    """Every matrix with the sums of ``m2`` lying below it.

    Rows are filled top to bottom; after each row the northeast sums of the
    finished rows must stay under those of ``m2``.
    """
    n, n2 = m2.nrows, m2.ncols
    rowsums, colsums = m2.rowsums, m2.colsums
    bound = [[m2.ne(i, j) for j in range(1, n2 + 1)] for i in range(n + 1)]
    out: set[CosetMatrix] = set()
    rows: list[tuple] = []

    def fill(i: int, remaining: list[int], acc: list[int]):
        # acc[j] = partial northeast sum m_{<=i-1, >=j+1} (0-based j)
        if i == n:
            if not any(remaining):
                out.add(CosetMatrix(tuple(rows)))
            return
        if i == n - 1:
            row = tuple(remaining)
            if sum(row) == rowsums[i] and _row_ok(row, acc, bound[i + 1]):
                rows.append(row)
                fill(i + 1, [0] * n2, acc)
                rows.pop()
            return
        for row in _compositions(rowsums[i], remaining):
            if not _row_ok(row, acc, bound[i + 1]):
                continue
            new_acc = _add_row(row, acc)
            rows.append(row)
            fill(i + 1, [r - v for r, v in zip(remaining, row)], new_acc)
            rows.pop()

    fill(0, list(colsums), [0] * n2)
    return out


def _add_row(row: Sequence[int], acc: Sequence[int]) -> list[int]:
    out = list(acc)
    tail = 0
    for j in range(len(row) - 1, -1, -1):
        tail += row[j]
        out[j] += tail
    return out


def _row_ok(row, acc, bound) -> bool:
    tail = 0
    for j in range(len(row) - 1, -1, -1):
        tail += row[j]
        if acc[j] + tail > bound[j]:
            return False
    return True


def _compositions(total: int, caps: Sequence[int]) -> Iterable[tuple]:
    """Tuples of nonnegative integers under ``caps`` summing to ``total``."""
    k = len(caps)
    suffix = [0] * (k + 1)
    for j in range(k - 1, -1, -1):
        suffix[j] = suffix[j + 1] + caps[j]
    cur = [0] * k

    def rec(j: int, left: int):
        if j == k:
            if left == 0:
                yield tuple(cur)
            return
        lo = max(0, left - suffix[j + 1])
        for v in range(lo, min(caps[j], left) + 1):
            cur[j] = v
            yield from rec(j + 1, left - v)
        cur[j] = 0

    yield from rec(0, total)


def interval(m: CosetMatrix, m2: CosetMatrix) -> list[CosetMatrix]:
    _check_specs(m, m2)
    if not leq(m, m2):
        return []
    return [x for x in enumerate_leq(m2) if leq(m, x)]


def double_coset(m: CosetMatrix) -> list[Perm]:
    """All permutations ``x`` with ``psi(x) = m`` (small degrees only)."""
    rspec, cspec = m.rowspec, m.colspec
    return [Perm(p) for p in permutations(range(1, m.degree + 1))
            if psi(Perm(p), rspec, cspec) == m]


def kl_inverse_mat(m: CosetMatrix, m2: CosetMatrix, method: str = "backsub") -> QPoly:
    """Entry ``(m, m2)`` of the inverse of the matrix ``(P_{x,z})``.

    ``"backsub"`` solves the unitriangular system over ``[m, m2]``;
    ``"cosetsum"`` sums signed KL polynomials over the double coset of ``m2``
    (cost grows like ``d!``); ``"both"`` demands they agree.
    """
    _check_specs(m, m2)
    if method == "both":
        a = kl_inverse_mat(m, m2, "backsub")
        b = kl_inverse_mat(m, m2, "cosetsum")
        if a != b:
            raise AssertionError(f"inverse KL mismatch: {a} vs {b}")
        return a
    if not leq(m, m2):
        return ZERO
    if m == m2:
        return ONE
    if method == "backsub":
        return inverse_by_backsubstitution(kl_poly_mat, interval(m, m2), m, m2, length)
    if method == "cosetsum":
        wm = longest_rep(m)
        w0 = sg.longest_element(m.degree)
        wm_w0 = sg.compose(wm, w0)
        acc = ZERO
        for x in double_coset(m2):
            p = sg.kl_poly(sg.compose(x, w0), wm_w0)
            if not p.is_zero():
                eps = -1 if (sg.length(x) + sg.length(wm)) % 2 else 1
                acc = acc + p * eps
        return acc
    raise ValueError(f"unknown method {method!r}")


# text and JSON

def to_text(m: CosetMatrix) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in m.entries)


def from_text(text: str) -> CosetMatrix:
    """Rows on separate lines (or separated by ``;``), entries by spaces/commas."""
    lines = [ln for ln in re.split(r"[;\n]", text) if ln.strip()]
    rows = [tuple(int(x) for x in re.split(r"[\s,]+", ln.strip().strip("[]")) if x)
            for ln in lines]
    return CosetMatrix(tuple(rows))


def to_json(m: CosetMatrix) -> dict:
    return {"rows": [list(r) for r in m.entries],
            "rowsums": list(m.rowsums), "colsums": list(m.colsums)}


def from_json(data) -> CosetMatrix:
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, list):
        return CosetMatrix(tuple(tuple(r) for r in data))
    m = CosetMatrix(tuple(tuple(r) for r in data["rows"]))
    if "rowsums" in data and tuple(data["rowsums"]) != m.rowsums:
        raise ValueError("rowsums do not match the rows")
    if "colsums" in data and tuple(data["colsums"]) != m.colsums:
        raise ValueError("colsums do not match the rows")
    return m
