"""Integer polynomials in one variable ``q``.

Coefficients are stored densely in ascending order of degree with no trailing
zeros.  Python integers never wrap, but every result is still checked against
the signed 64-bit range so that a runaway computation fails loudly instead of
producing numbers no other implementation could reproduce.
"""

from __future__ import annotations

import json
import re
from typing import Iterable, Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class QPolyOverflowError(OverflowError):
    """A coefficient left the signed 64-bit range."""


def _check(c: int) -> int:
    if c < INT64_MIN or c > INT64_MAX:
        raise QPolyOverflowError(f"coefficient {c} exceeds 64-bit range")
    return c


def _normalize(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [_check(int(c)) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class QPoly:
    """Immutable polynomial in ``q`` with exact integer coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _normalize(coeffs)
        self._hash = hash(self.coeffs)

    @classmethod
    def constant(cls, c: int) -> "QPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "QPoly":
        if k < 0:
            raise ValueError("negative exponent")
        return cls([0] * k + [c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> int:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QPoly.constant(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: Union["QPoly", int]) -> "QPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other: Union["QPoly", int]) -> "QPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Union["QPoly", int]) -> "QPoly":
        return _coerce(other) - self

    def __mul__(self, other: Union["QPoly", int]) -> "QPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPoly":
        """Multiply by ``q**k``."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if not self.coeffs:
            return self
        return QPoly((0,) * k + self.coeffs)

    def eval_at_one(self) -> int:
        return _check(sum(self.coeffs))

    def __call__(self, q: int) -> int:
        return _check(sum(c * q**k for k, c in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        return f"QPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        return to_text(self)


def _coerce(x: Union[QPoly, int]) -> QPoly:
    if isinstance(x, QPoly):
        return x
    if isinstance(x, int):
        return QPoly.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


ZERO = QPoly()
ONE = QPoly((1,))
Q = QPoly((0, 1))


def add(p: QPoly, r: QPoly) -> QPoly:
    return p + r


def mul(p: QPoly, r: QPoly) -> QPoly:
    return p * r


def shift(p: QPoly, k: int) -> QPoly:
    return p.shift(k)


def eval_at_one(p: QPoly) -> int:
    return p.eval_at_one()


def mu_coeff(p: QPoly, ell_diff: int) -> int:
    """Coefficient of ``q**((ell_diff - 1)/2)`` in ``p``.

    This is the leading-term coefficient ``mu`` used by the KL recursion;
    it vanishes when ``ell_diff`` is even.
    """
    if ell_diff < 1:
        raise ValueError("length difference must be at least 1")
    if ell_diff % 2 == 0:
        return 0
    return p.coeff((ell_diff - 1) // 2)


# text and JSON renderings

def to_text(p: QPoly) -> str:
    if not p.coeffs:
        return "0"
    terms = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"^(\d+)?\*?(q(?:\^(\d+))?)?$")


def from_text(s: str) -> QPoly:
    """Parse the rendering produced by :func:`to_text`.

    Accepts optional spaces and an optional ``*`` between coefficient and
    ``q``.
    """
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad term {body!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            k = 0
        else:
            k = int(m.group(3)) if m.group(3) is not None else 1
        coeffs[k] = coeffs.get(k, 0) + (c if sign == "+" else -c)
    if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ValueError(f"cannot parse polynomial {s!r}")
    top = max(coeffs)
    return QPoly(coeffs.get(k, 0) for k in range(top + 1))


def to_json(p: QPoly) -> list[int]:
    return list(p.coeffs)


def from_json(data: Union[str, list]) -> QPoly:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list) or not all(isinstance(c, int) for c in data):
        raise ValueError("expected a JSON array of integers")
    return QPoly(data)
