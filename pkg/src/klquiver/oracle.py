"""Brute-force ground truth for the group-level computations.

Everything here is rebuilt from scratch by breadth-first search over
generators: lengths are BFS depths (no inversion counting), Bruhat order is
the transitive closure of reflection covers, and KL tables are filled for
the whole group (or a length ball of the affine group) in length order.  The
table uses the two-term form

    P_{x,w} = q^(1-c) P_{xs,v} + q^c P_{x,v} - sum_z mu(z,v) q^((l(w)-l(z))/2) P_{x,z}

with ``v = ws`` for the largest right descent ``s`` of ``w`` and ``c = 1`` iff
``xs < x``, which is a different traversal from the memoized engine.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import affsymgroup as asg
from . import cosetmat as cm
from . import symgroup as sg
from .affsymgroup import AffPerm
from .qpoly import ONE, ZERO, QPoly
from .symgroup import Perm

MAX_ELEMENTS = 100_000


class OracleCapError(RuntimeError):
    """The requested group or ball is too large to enumerate."""


class SamplingExhaustedError(RuntimeError):
    """Rejection sampling gave up without finding a cancellable triple."""


@dataclass
class GroupData:
    """A finite group or length ball with its generators acting on the right."""

    elements: list
    length: dict
    rmul: dict  # (x, s) -> x s, present only when x s is in the set
    gens: tuple
    affine: bool
    d: int
    below: dict = field(default_factory=dict)  # x -> frozenset of y <= x

    def leq(self, y, w) -> bool:
        return y in self.below[w]


def _finite_gen(ol: tuple, s: int) -> tuple:
    lst = list(ol)
    lst[s - 1], lst[s] = lst[s], lst[s - 1]
    return tuple(lst)


def _affine_gen(win: tuple, s: int) -> tuple:
    d = len(win)
    lst = list(win)
    if s == 0:
        lst[0], lst[d - 1] = win[d - 1] - d, win[0] + d
    else:
        lst[s - 1], lst[s] = win[s], win[s - 1]
    return tuple(lst)


def _bfs(identity: tuple, gens: tuple, step: Callable, cap: Optional[int]):
    length = {identity: 0}
    order = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        if cap is not None and length[x] >= cap:
            continue
        for s in gens:
            y = step(x, s)
            if y not in length:
                length[y] = length[x] + 1
                if len(length) > MAX_ELEMENTS:
                    raise OracleCapError(f"more than {MAX_ELEMENTS} elements")
                order.append(y)
                queue.append(y)
    rmul = {}
    for x in order:
        for s in gens:
            y = step(x, s)
            if y in length:
                rmul[(x, s)] = y
    return order, length, rmul


def finite_group(d: int) -> GroupData:
    gens = tuple(range(1, d))
    order, length, rmul = _bfs(tuple(range(1, d + 1)), gens, _finite_gen, None)
    return GroupData(order, length, rmul, gens, False, d)


def affine_ball(d: int, len_cap: int) -> GroupData:
    """``{w in the Coxeter group of type affine A_{d-1} : l(w) <= len_cap}``."""
    if d < 2:
        raise ValueError("the affine ball needs d >= 2")
    gens = tuple(range(d))
    order, length, rmul = _bfs(tuple(range(1, d + 1)), gens, _affine_gen, len_cap)
    return GroupData(order, length, rmul, gens, True, d)


# reflections acting on the left

def _finite_reflections(d: int):
    for a in range(1, d + 1):
        for b in range(a + 1, d + 1):
            yield (a, b)


def _left_reflect_finite(x: tuple, t: tuple) -> tuple:
    a, b = t
    return tuple(b if v == a else a if v == b else v for v in x)


def _left_reflect_affine(x: tuple, t: tuple) -> tuple:
    # swap the values a + kd and b + kd for all k
    a, b = t
    d = len(x)
    out = []
    for v in x:
        if (v - a) % d == 0:
            out.append(v - a + b)
        elif (v - b) % d == 0:
            out.append(v - b + a)
        else:
            out.append(v)
    return tuple(out)


def _affine_reflections(d: int, len_cap: int):
    for a in range(1, d + 1):
        for b in range(a + 1, a + (len_cap + 1) * d + 1):
            if (b - a) % d:
                yield (a, b)


def bruhat_closure(d: int, len_cap: Optional[int] = None, affine: bool = False) -> GroupData:
    """Bruhat order as the closure of ``x < tx`` with ``l(tx) = l(x) + 1``."""
    if affine:
        if len_cap is None:
            raise ValueError("the affine group needs a length cap")
        data = affine_ball(d, len_cap)
        refl = list(_affine_reflections(d, len_cap))
        act = _left_reflect_affine
    else:
        data = finite_group(d)
        refl = list(_finite_reflections(d))
        act = _left_reflect_finite
    covers_down: dict = {x: [] for x in data.elements}
    for x in data.elements:
        lx = data.length[x]
        for t in refl:
            y = act(x, t)
            if data.length.get(y) == lx + 1:
                covers_down[y].append(x)
    below: dict = {}
    for x in sorted(data.elements, key=data.length.__getitem__):
        acc = {x}
        for c in covers_down[x]:
            acc |= below[c]
        below[x] = frozenset(acc)
    data.below = below
    return data


# KL tables

@dataclass
class KLTable:
    group: GroupData
    table: dict  # (y, w) -> QPoly, only for y <= w

    def __call__(self, y, w) -> QPoly:
        return self.table.get((y, w), ZERO)

    def check_invariants(self) -> list[str]:
        errors = []
        g = self.group
        for (y, w), p in self.table.items():
            if y == w and p != ONE:
                errors.append(f"P_{{w,w}} != 1 at {w}")
            if y != w:
                bound = (g.length[w] - g.length[y] - 1) // 2
                if p.degree > bound:
                    errors.append(f"degree bound fails at ({y}, {w})")
                if p.coeff(0) != 1:
                    errors.append(f"constant term is not 1 at ({y}, {w})")
        return errors


def kl_table(data: GroupData) -> KLTable:
    if not data.below:
        raise ValueError("compute the Bruhat closure first")
    L = data.length
    P: dict = {}

    def get(x, y) -> QPoly:
        return P.get((x, y), ZERO)

    def descents(x):
        return [s for s in data.gens if (x, s) in data.rmul and L[data.rmul[(x, s)]] < L[x]]

    for w in sorted(data.elements, key=L.__getitem__):
        P[(w, w)] = ONE
        if L[w] == 0:
            continue
        s = max(descents(w))
        v = data.rmul[(w, s)]
        lw = L[w]
        # mu(z, v) for z below v with zs < z
        mus = []
        for z in data.below[v]:
            if z == v:
                continue
            diff = L[v] - L[z]
            if diff % 2 == 0 or s not in descents(z):
                continue
            m = get(z, v).coeff((diff - 1) // 2)
            if m:
                mus.append((z, m))
        for x in data.below[w]:
            if x == w:
                continue
            xs = data.rmul.get((x, s))
            c = 1 if xs is not None and L[xs] < L[x] else 0
            term = ZERO
            if xs is not None:
                term = get(xs, v).shift(1 - c)
            term = term + get(x, v).shift(c)
            for z, m in mus:
                pz = get(x, z)
                if not pz.is_zero():
                    term = term - (pz * m).shift((lw - L[z]) // 2)
            P[(x, w)] = term
    return KLTable(data, P)


def finite_kl_table(d: int) -> KLTable:
    return kl_table(bruhat_closure(d))


def affine_kl_table(d: int, len_cap: int) -> KLTable:
    return kl_table(bruhat_closure(d, len_cap, affine=True))


# random cancellable triples

def _random_word(rng: random.Random, gens: tuple, length: int) -> list:
    return [rng.choice(gens) for _ in range(length)]


def _subword_below(rng: random.Random, word: list, build: Callable):
    drop = rng.uniform(0.1, 0.6)
    keep = [s for s in word if rng.random() >= drop]
    return build(keep)


def random_cancellable(d: int, affine: bool = False, seed: int = 0,
                       max_length: Optional[int] = None, tries: int = 20000):
    """A cancellable triple ``(y, w, i)`` with ``y <= w``.

    ``w`` comes from a random word, reduced by the group itself; ``y`` from a
    random subword of a reduced word of ``w`` (so ``y <= w``); triples without
    a cancellable index are rejected.  Deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    if affine:
        # in the affine group with d = 2 the window is fixed by w(1), so y < w
        # never shares a value with w
        if d < 3:
            raise ValueError("need d >= 3 for affine sampling")
        gens = tuple(range(d))
        cap = max_length if max_length is not None else 12
        mod = asg

        def build(word):
            return asg.from_word(d, word)
    else:
        gens = tuple(range(1, d))
        cap = max_length if max_length is not None else d * (d - 1) // 2
        mod = sg

        def build(word):
            return sg.from_word(d, word)

    for _ in range(tries):
        w = build(_random_word(rng, gens, rng.randint(1, cap)))
        if mod.length(w) > cap:
            continue
        if affine and rng.random() < 0.5:
            shift = rng.randint(-2, 2)
            tau = asg.tau_power(d, shift)
        else:
            tau = None
        y = _subword_below(rng, mod.reduced_word(w), build)
        if tau is not None:
            w, y = asg.compose(tau, w), asg.compose(tau, y)
        idx = [i for i in range(1, d + 1) if mod.cancellable(y, w, i)]
        if y != w and idx:
            return y, w, rng.choice(idx)
    raise SamplingExhaustedError(f"no cancellable triple after {tries} tries")


def random_blockspec(rng: random.Random, d: int, parts: Optional[int] = None) -> tuple:
    """Random composition of ``d`` (zero parts allowed)."""
    parts = parts if parts is not None else rng.randint(1, d)
    cuts = sorted(rng.randint(0, d) for _ in range(parts - 1))
    bounds = [0] + cuts + [d]
    return tuple(b - a for a, b in zip(bounds, bounds[1:]))


def random_cancellable_matrix(d: int, seed: int = 0, tries: int = 20000):
    """``(m, m2, (i, j))`` with ``m <= m2`` and ``(i, j)`` cancellable."""
    rng = random.Random(seed)
    for _ in range(tries):
        bs = random_blockspec(rng, d)
        cs = random_blockspec(rng, d)
        w = sg.from_word(d, _random_word(rng, tuple(range(1, d)), rng.randint(1, d * (d - 1) // 2)))
        y = _subword_below(rng, sg.reduced_word(w), lambda word: sg.from_word(d, word))
        m, m2 = cm.psi(y, bs, cs), cm.psi(w, bs, cs)
        if m == m2:
            continue
        cells = [(i, j) for i in range(1, m.nrows + 1) for j in range(1, m.ncols + 1)
                 if cm.cancellable_entry(m, m2, i, j)]
        if cells:
            return m, m2, rng.choice(cells)
    raise SamplingExhaustedError(f"no cancellable matrix pair after {tries} tries")


# self test

def selftest(verbose: bool = False) -> list[tuple[str, bool, str]]:
    """Oracle-versus-engine agreement on the standard small surfaces."""
    results = []

    def record(name, ok, detail=""):
        results.append((name, ok, detail))

    for d in (3, 4):
        tab = finite_kl_table(d)
        bad = sum(1 for (y, w), p in tab.table.items()
                  if sg.kl_poly(Perm(y), Perm(w)) != p)
        errs = tab.check_invariants()
        record(f"kl S_{d}", bad == 0 and not errs, f"{len(tab.table)} pairs, {bad} mismatches")
    data = bruhat_closure(5)
    bad = sum(1 for y in data.elements for w in data.elements
              if sg.bruhat_leq(Perm(y), Perm(w)) != data.leq(y, w))
    record("bruhat S_5", bad == 0, f"{len(data.elements) ** 2} pairs, {bad} mismatches")
    tab = affine_kl_table(2, 10)
    bad = sum(1 for (y, w), p in tab.table.items()
              if p != ONE or asg.kl_poly(AffPerm(y), AffPerm(w)) != p)
    record("kl affine S_2 ball 10", bad == 0, f"{len(tab.table)} pairs, {bad} mismatches")
    data = bruhat_closure(3, 8, affine=True)
    bad = sum(1 for y in data.elements for w in data.elements
              if asg.bruhat_leq(AffPerm(y), AffPerm(w)) != data.leq(y, w))
    record("bruhat affine S_3 ball 8", bad == 0,
           f"{len(data.elements) ** 2} pairs, {bad} mismatches")
    return results
