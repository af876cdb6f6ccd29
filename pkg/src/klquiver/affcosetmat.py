"""Biperiodic matrices indexing parabolic double cosets of the affine group.

A matrix ``m`` on ``Z x Z`` with ``m_{i+n, j+n'} = m_{i,j}`` is stored by its
rows ``1..n``, each a finite map column -> positive entry.  Block sizes are
periodic: ``b_i`` (period ``n``) for rows, ``c_j`` (period ``n'``) for
columns, both summing to ``d`` over a period.  Blocks are anchored by the
first element of ``B_1`` and of ``C_1`` (``row_start`` and ``col_start``);
only ``w_m`` and ``psi`` depend on that choice.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

from . import affsymgroup as asg
from .affsymgroup import AffPerm
from .cosetmat import NotComparableError, SpecMismatchError
from .klengine import inverse_by_backsubstitution
from .qpoly import ONE, ZERO, QPoly


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class PeriodicMatrix:
    n: int
    nprime: int
    rows: tuple  # rows[i-1] = sorted tuple of (column, value) with value > 0

    def __post_init__(self):
        if self.n < 1 or self.nprime < 1:
            raise ValueError("periods must be positive")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} stored rows, got {len(self.rows)}")
        norm = []
        for row in self.rows:
            items = row.items() if isinstance(row, Mapping) else row
            clean: dict[int, int] = {}
            for c, v in items:
                c, v = int(c), int(v)
                if v < 0:
                    raise ValueError("matrix entries must be nonnegative")
                if v:
                    clean[c] = clean.get(c, 0) + v
            norm.append(tuple(sorted(clean.items())))
        object.__setattr__(self, "rows", tuple(norm))
        if sum(self.rowsums) != sum(self.colsums):
            raise ValueError("row and column sums over a period disagree")

    @classmethod
    def from_rows(cls, nprime: int, rows: Iterable[Mapping[int, int]]) -> "PeriodicMatrix":
        rows = tuple(dict(r) for r in rows)
        return cls(len(rows), nprime, rows)

    @cached_property
    def _entries(self) -> tuple:
        """All stored entries as ``(row, col, value)``."""
        return tuple((i, c, v) for i, row in enumerate(self.rows, 1) for c, v in row)

    @property
    def rowsums(self) -> tuple:
        return tuple(sum(v for _, v in row) for row in self.rows)

    @property
    def colsums(self) -> tuple:
        out = [0] * self.nprime
        for _, c, v in self._entries:
            out[(c - 1) % self.nprime] += v
        return tuple(out)

    @property
    def degree(self) -> int:
        return sum(self.rowsums)

    def _locate(self, i: int) -> tuple[int, int]:
        k, r = divmod(i - 1, self.n)
        return r + 1, k

    def __getitem__(self, ij) -> int:
        i, j = ij
        i0, k = self._locate(i)
        return dict(self.rows[i0 - 1]).get(j - k * self.nprime, 0)

    def row(self, i: int) -> dict[int, int]:
        """Row ``i`` (any integer) as a column -> value map."""
        i0, k = self._locate(i)
        return {c + k * self.nprime: v for c, v in self.rows[i0 - 1]}

    def ne(self, i: int, j: int) -> int:
        """``m_{<=i, >=j}``."""
        n, n2 = self.n, self.nprime
        total = 0
        for i0, c, v in self._entries:
            cnt = (i - i0) // n - _ceil_div(j - c, n2) + 1
            if cnt > 0:
                total += v * cnt
        return total

    def sw(self, i: int, j: int) -> int:
        """``m_{>=i, <=j}``."""
        n, n2 = self.n, self.nprime
        total = 0
        for i0, c, v in self._entries:
            cnt = (j - c) // n2 - _ceil_div(i - i0, n) + 1
            if cnt > 0:
                total += v * cnt
        return total

    def row_tail(self, i: int, j: int) -> int:
        """``m_{i, >=j}``."""
        return sum(v for c, v in self.row(i).items() if c >= j)

    def col_head(self, i: int, j: int) -> int:
        """``m_{<=i, j}``."""
        n, n2 = self.n, self.nprime
        total = 0
        for i0, c, v in self._entries:
            if (j - c) % n2 == 0 and i0 + ((j - c) // n2) * n <= i:
                total += v
        return total

    def col_range(self, rows: Iterable[int]) -> tuple[Optional[int], Optional[int]]:
        cols = [c for i in rows for c in self.row(i)]
        if not cols:
            return None, None
        return min(cols), max(cols)

    def transpose(self) -> "PeriodicMatrix":
        """Swap the roles of rows and columns (periods swap too)."""
        n, n2 = self.n, self.nprime
        cols: list[dict[int, int]] = [dict() for _ in range(n2)]
        for i0, c, v in self._entries:
            k, r = divmod(c - 1, n2)
            cols[r][i0 - k * n] = cols[r].get(i0 - k * n, 0) + v
        return PeriodicMatrix(n2, n, tuple(cols))

    def shift_columns(self, k: int) -> "PeriodicMatrix":
        return PeriodicMatrix(self.n, self.nprime,
                              tuple({c + k: v for c, v in row} for row in self.rows))

    def __sub__(self, other: "PeriodicMatrix") -> "PeriodicMatrix":
        if (self.n, self.nprime) != (other.n, other.nprime):
            raise SpecMismatchError("periods differ")
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for c, v in b:
                r[c] = r.get(c, 0) - v
                if r[c] < 0:
                    raise ValueError("subtraction leaves a negative entry")
            rows.append(r)
        return PeriodicMatrix(self.n, self.nprime, tuple(rows))

    def __str__(self) -> str:
        return to_text(self)


def _check_specs(m: PeriodicMatrix, m2: PeriodicMatrix) -> None:
    if (m.n, m.nprime) != (m2.n, m2.nprime):
        raise SpecMismatchError("periods differ")
    if m.rowsums != m2.rowsums or m.colsums != m2.colsums:
        raise SpecMismatchError(
            f"row/column sums differ: {m.rowsums};{m.colsums} vs {m2.rowsums};{m2.colsums}")


# periodic blocks

def _block_first(sizes: tuple, start: int, idx: int) -> int:
    """Smallest element of block ``idx`` (it may be empty)."""
    n, d = len(sizes), sum(sizes)
    k, r = divmod(idx - 1, n)
    return start + k * d + sum(sizes[:r])


def _block_of(sizes: tuple, start: int, x: int) -> int:
    n, d = len(sizes), sum(sizes)
    k, off = divmod(x - start, d)
    for r, s in enumerate(sizes):
        if off < s:
            return r + 1 + k * n
        off -= s
    raise AssertionError("unreachable")


def psi_aff(w: AffPerm, rsizes, csizes, row_start: int = 1, col_start: int = 1) -> PeriodicMatrix:
    rsizes, csizes = tuple(rsizes), tuple(csizes)
    d = w.degree
    if sum(rsizes) != d or sum(csizes) != d:
        raise SpecMismatchError(f"block sizes {rsizes}, {csizes} do not add up to {d}")
    rows: list[dict[int, int]] = []
    for i in range(1, len(rsizes) + 1):
        first = _block_first(rsizes, row_start, i)
        row: dict[int, int] = {}
        for a in range(first, first + rsizes[i - 1]):
            j = _block_of(csizes, col_start, w(a))
            row[j] = row.get(j, 0) + 1
        rows.append(row)
    return PeriodicMatrix(len(rsizes), len(csizes), tuple(rows))


def longest_rep_aff(m: PeriodicMatrix, row_start: int = 1, col_start: int = 1) -> AffPerm:
    """``w_m``: the same right-to-left prescription as the finite case.

    Within row ``i`` the ``s``-th element of ``B_i`` goes to the ``t``-th
    largest element of ``C_j``, ``j`` maximal with ``m_{i,>=j} >= s`` and
    ``t = m_{<=i-1,j} + s - m_{i,>=j+1}``.
    """
    bs, cs = m.rowsums, m.colsums
    d = m.degree
    image: dict[int, int] = {}
    for i in range(1, m.n + 1):
        first = _block_first(bs, row_start, i)
        row = m.row(i)
        cols = sorted(row, reverse=True)
        s = 0
        for j in cols:
            above = m.col_head(i - 1, j)
            cfirst = _block_first(cs, col_start, j)
            csize = cs[(j - 1) % m.nprime]
            for _ in range(row[j]):
                s += 1
                t = above + s - m.row_tail(i, j + 1)
                image[first + s - 1] = cfirst + csize - t
    win = []
    for a in range(1, d + 1):
        k, r = divmod(a - row_start, d)
        win.append(image[row_start + r] + k * d)
    return AffPerm(tuple(win))


def length_aff(m: PeriodicMatrix) -> int:
    total = 0
    for i0, c, v in m._entries:
        total += v * m.ne(i0, c) - v * (v + 1) // 2
    return total


def _leq_bounds(m: PeriodicMatrix, m2: PeriodicMatrix, i: int) -> tuple[int, int]:
    lows, highs = [], []
    for x in (m, m2):
        lo, _ = x.col_range(range(i + 1, i + x.n + 1))
        _, hi = x.col_range(range(i - x.n + 1, i + 1))
        if lo is not None:
            lows.append(lo)
        if hi is not None:
            highs.append(hi)
    low = min(lows) - 1 if lows else 0
    high = max(highs) + 1 if highs else low
    return low, max(high, low)


def leq_aff(m: PeriodicMatrix, m2: PeriodicMatrix) -> bool:
    """Northeast dominance for each row period, with agreement far to the left."""
    _check_specs(m, m2)
    for i in range(1, m.n + 1):
        low, high = _leq_bounds(m, m2, i)
        if m.ne(i, low) != m2.ne(i, low):
            return False
        for j in range(low + 1, high + 1):
            if m.ne(i, j) > m2.ne(i, j):
                return False
    return True


def leq_aff_southwest(m: PeriodicMatrix, m2: PeriodicMatrix) -> bool:
    """The transpose form: southwest dominance for each column period."""
    return leq_aff(m.transpose(), m2.transpose())


def elementary(m: PeriodicMatrix, i: int, j: int) -> PeriodicMatrix:
    """Subtract one from every ``(i + kn, j + kn')``."""
    if m[i, j] < 1:
        raise ValueError(f"entry ({i},{j}) is zero")
    i0, k = m._locate(i)
    rows = [dict(r) for r in m.rows]
    c = j - k * m.nprime
    rows[i0 - 1][c] -= 1
    return PeriodicMatrix(m.n, m.nprime, tuple(rows))


def cancellable_entry_aff(m: PeriodicMatrix, m2: PeriodicMatrix, i: int, j: int) -> bool:
    if not leq_aff(m, m2):
        raise NotComparableError("first matrix is not below the second")
    return (m[i, j] >= 1 and m.ne(i - 1, j) == m2.ne(i - 1, j)
            and m.ne(i, j + 1) == m2.ne(i, j + 1))


def cancel_entry_aff(m: PeriodicMatrix, i: int, j: int) -> PeriodicMatrix:
    return elementary(m, i, j)


def kl_poly_mat_aff(m: PeriodicMatrix, m2: PeriodicMatrix) -> QPoly:
    _check_specs(m, m2)
    return asg.kl_poly(longest_rep_aff(m), longest_rep_aff(m2))


def interval_aff(m: PeriodicMatrix, m2: PeriodicMatrix) -> list[PeriodicMatrix]:
    """``[m, m2]``, found by filling each stored row inside the columns it can reach."""
    _check_specs(m, m2)
    if not leq_aff(m, m2):
        return []
    n, n2 = m.n, m.nprime
    ranges = []
    for i in range(1, n + 1):
        lo, _ = m2.col_range(range(i, i + n))
        _, hi = m2.col_range(range(i - n + 1, i + 1))
        ranges.append((lo, hi))
    bs, cs = m.rowsums, m.colsums
    out: list[PeriodicMatrix] = []
    rows: list[dict[int, int]] = []

    def fill(i: int, colleft: list[int]):
        if i == n:
            if not any(colleft):
                x = PeriodicMatrix(n, n2, tuple(rows))
                if leq_aff(m, x) and leq_aff(x, m2):
                    out.append(x)
            return
        lo, hi = ranges[i]
        if bs[i] == 0:
            rows.append({})
            fill(i + 1, colleft)
            rows.pop()
            return
        cols = list(range(lo, hi + 1))
        caps = [colleft[(c - 1) % n2] for c in cols]
        for comp in _bounded_compositions(bs[i], caps):
            row = {c: v for c, v in zip(cols, comp) if v}
            left = list(colleft)
            for c, v in row.items():
                left[(c - 1) % n2] -= v
            if any(x < 0 for x in left):
                continue
            rows.append(row)
            fill(i + 1, left)
            rows.pop()

    fill(0, list(cs))
    return out


def _bounded_compositions(total: int, caps: list[int]):
    k = len(caps)
    cur = [0] * k

    def rec(j: int, left: int):
        if left == 0:
            yield tuple(cur)
            return
        if j == k:
            return
        for v in range(min(caps[j], left), -1, -1):
            cur[j] = v
            yield from rec(j + 1, left - v)
        cur[j] = 0

    yield from rec(0, total)


def kl_inverse_mat_aff(m: PeriodicMatrix, m2: PeriodicMatrix) -> QPoly:
    _check_specs(m, m2)
    if not leq_aff(m, m2):
        return ZERO
    if m == m2:
        return ONE
    return inverse_by_backsubstitution(kl_poly_mat_aff, interval_aff(m, m2), m, m2, length_aff)


# text and JSON

def to_json(m: PeriodicMatrix) -> dict:
    return {"n": m.n, "nprime": m.nprime,
            "rows": [{"i": i, "cols": {str(c): v for c, v in row}}
                     for i, row in enumerate(m.rows, 1)]}


def from_json(data) -> PeriodicMatrix:
    if isinstance(data, str):
        data = json.loads(data)
    n, n2 = int(data["n"]), int(data["nprime"])
    rows: list[dict[int, int]] = [{} for _ in range(n)]
    for entry in data["rows"]:
        i = int(entry["i"])
        if not 1 <= i <= n:
            raise ValueError(f"row index {i} outside [1, {n}]")
        rows[i - 1] = {int(c): int(v) for c, v in entry["cols"].items()}
    return PeriodicMatrix(n, n2, tuple(rows))


def to_text(m: PeriodicMatrix, lo: Optional[int] = None, hi: Optional[int] = None) -> str:
    """Rows ``1..n`` as a grid; the ``(1,1)`` entry is wrapped in ``*``."""
    clo, chi = m.col_range(range(1, m.n + 1))
    lo = min(x for x in (lo, clo, 1) if x is not None)
    hi = max(x for x in (hi, chi, 1) if x is not None)
    lines = [f"cols {lo}..{hi}"]
    for i in range(1, m.n + 1):
        row = m.row(i)
        cells = []
        for j in range(lo, hi + 1):
            v = str(row.get(j, 0))
            cells.append(f"*{v}*" if (i, j) == (1, 1) else v)
        lines.append(" ".join(cells))
    return "\n".join(lines)


def from_text(text: str, nprime: int) -> PeriodicMatrix:
    """Read a grid of rows ``1..n``; the ``(1,1)`` entry must be marked ``*v*``.

    A leading ``cols a..b`` line, if present, is ignored; the marker alone
    fixes the column origin.
    """
    lines = [ln.strip() for ln in re.split(r"[;\n]", text) if ln.strip()]
    lines = [ln for ln in lines if not ln.startswith("cols")]
    if not lines:
        raise ValueError("empty grid")
    first = re.split(r"[\s,]+", lines[0])
    marks = [k for k, tok in enumerate(first) if tok.startswith("*")]
    if len(marks) != 1:
        raise ValueError("the (1,1) entry must be marked exactly once, as *v*")
    origin = marks[0]
    rows = []
    for ln in lines:
        toks = re.split(r"[\s,]+", ln)
        row = {}
        for k, tok in enumerate(toks):
            v = int(tok.strip("*"))
            if v:
                row[k - origin + 1] = v
        rows.append(row)
    return PeriodicMatrix(len(rows), nprime, tuple(rows))
