"""End-to-end acceptance checks.

Each criterion is a plain function returning ``(ok, detail)``; the pytest
wrappers print one PASS/FAIL line per criterion and then assert.  Running
this file directly prints the same lines without pytest.
"""

import random
import sys
import time

import pytest

from klquiver import affcosetmat as acm
from klquiver import affsymgroup as asg
from klquiver import cosetmat as cm
from klquiver import oracle
from klquiver import quiverorbits as qo
from klquiver import symgroup as sg
from klquiver.affsymgroup import AffPerm
from klquiver.cosetmat import CosetMatrix
from klquiver.qpoly import ONE, QPoly, ZERO
from klquiver.symgroup import Perm


class Check:
    """Collects failures instead of stopping at the first one."""

    def __init__(self):
        self.failures = []
        self.count = 0

    def __call__(self, cond, what):
        self.count += 1
        if not cond:
            self.failures.append(what)

    def result(self, detail):
        if self.failures:
            return False, f"{len(self.failures)} of {self.count} checks failed, first: {self.failures[0]}"
        return True, f"{self.count} checks; {detail}"


def _timed(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


# 1. coset matrices of the running finite example

def criterion_1():
    c = Check()
    bs, cs = (1, 4, 3, 1), (2, 3, 3, 1)
    y, w = sg.parse("128456379"), sg.parse("587429316")
    m, m2 = cm.psi(y, bs, cs), cm.psi(w, bs, cs)
    c(m == CosetMatrix(((1, 0, 0, 0), (1, 2, 1, 0), (0, 1, 2, 0), (0, 0, 0, 1))), f"psi(y) = {m}")
    c(m2 == CosetMatrix(((0, 1, 0, 0), (1, 1, 2, 0), (1, 1, 0, 1), (0, 0, 1, 0))), f"psi(w) = {m2}")
    wm = cm.longest_rep(m)
    c(wm == sg.parse("285417639"), f"w_m = {wm}")
    c(cm.longest_rep_formula(m) == wm, "position formula disagrees")
    c(cm.longest_rep(m2) == w, "w is not the longest in its double coset")
    c(sg.cancellable(wm, w, 2), "index 2 not cancellable")
    y2, w2 = sg.cancel(wm, 2), sg.cancel(w, 2)
    c(y2 == sg.parse("25417638"), f"cancelled y = {y2}")
    c(w2 == sg.parse("57428316"), f"cancelled w = {w2}")
    p1 = sg.kl_poly(y, w)
    p2 = sg.kl_poly(sg.parse("25417638"), sg.parse("57428316"))
    c(p1 == p2, f"{p1} != {p2}")
    return c.result(f"P = {p1}")


# 2. periodic matrices and affine cancellation

def criterion_2():
    c = Check()
    m = acm.PeriodicMatrix(2, 3, (((2, 2), (6, 1)), ((1, 1), (4, 2), (9, 1))))
    win = acm.longest_rep_aff(m)
    c(win.window == (13, 5, 4, 21, 10, 9, 1), f"window {win}")
    y, w = asg.parse("(3,4,2)"), asg.parse("(0,7,2)")
    c(asg.cancellable(y, w, 3), "index 3 not cancellable")
    c(asg.cancel(y, 3).window == (2, 3), f"cancelled y = {asg.cancel(y, 3)}")
    c(asg.cancel(w, 3).window == (0, 5), f"cancelled w = {asg.cancel(w, 3)}")
    return c.result("window (13,5,4,21,10,9,1); (2,3), (0,5)")


# 3. the cyclic quiver example

def criterion_3():
    c = Check()
    m = qo.parse("[1,2]+[2,3]+[3,4] mod 3")
    maxima = qo.maximal_elements(m)
    expected = {qo.parse(s) for s in ("[1,6] mod 3", "[2,7] mod 3", "[3,8] mod 3")}
    c(maxima == expected, f"maximal elements {sorted(map(str, maxima))}")
    for x in expected:
        p = qo.ic_poly(m, x)
        c(p == QPoly([1, 1]), f"IC at {x} = {p}")
    upper = qo.upper_set(m)
    for x in upper:
        sign = asg.sign(acm.longest_rep_aff(qo.reduce(m, x)[1], 1, 0))
        inv = qo.ic_inverse(m, x)
        c(inv == QPoly([sign]), f"inverse IC at {x} = {inv}, sign {sign}")
    words = {"[1,6] mod 3": "s1 s0 s2 s1", "[2,7] mod 3": "s2 s1 s0 s2", "[3,8] mod 3": "s0 s2 s1 s0"}
    for text, word in words.items():
        rep = acm.longest_rep_aff(qo.reduce(m, qo.parse(text))[1], 1, 0)
        c(rep == asg.parse(f"d=3: {word}"), f"{text}: {rep} is not {word}")
    return c.result(f"|<m>| = {len(upper)}")


# 4. engine versus whole-group tables

def criterion_4():
    c = Check()
    for d in (3, 4):
        table = oracle.finite_kl_table(d)
        c(table.check_invariants() == [], f"table invariants fail for S_{d}")
        group = [x for x in table.group.elements]
        for y in group:
            for w in group:
                expected = table(y, w)
                for policy in ("smallest", "largest"):
                    got = sg.kl_poly(Perm(y), Perm(w), policy)
                    c(got == expected, f"S_{d} ({y},{w}) {policy}: {got} vs {expected}")
    table = oracle.affine_kl_table(2, 10)
    for (y, w), p in table.table.items():
        c(p == ONE, f"oracle value {p} at ({y},{w})")
        c(asg.kl_poly(AffPerm(y), AffPerm(w)) == ONE, f"engine value at ({y},{w})")
    npairs = 0
    data = oracle.bruhat_closure(5)
    for y in data.elements:
        for w in data.elements:
            npairs += 1
            c(sg.bruhat_leq(Perm(y), Perm(w)) == data.leq(y, w), f"S_5 Bruhat at ({y},{w})")
    data = oracle.bruhat_closure(3, 8, affine=True)
    for y in data.elements:
        for w in data.elements:
            npairs += 1
            c(asg.bruhat_leq(AffPerm(y), AffPerm(w)) == data.leq(y, w), f"affine Bruhat at ({y},{w})")
    return c.result(f"{npairs} Bruhat pairs")


# 5. inversion identities

def criterion_5():
    c = Check()
    group = sg.all_perms(4)
    for y in group:
        for w in group:
            total = ZERO
            for x in group:
                total = total + sg.kl_poly(y, x) * sg.kl_inverse(x, w)
            c(total == (ONE if y == w else ZERO), f"sum at ({y},{w}) = {total}")
            a, b = sg.kl_inverse(y, w, "twist"), sg.kl_inverse(y, w, "backsub")
            c(a == b, f"twist {a} vs backsub {b} at ({y},{w})")
    rng = random.Random(2024)
    pairs = 0
    for _ in range(3):
        bs = oracle.random_blockspec(rng, 5, rng.randint(2, 4))
        cs = oracle.random_blockspec(rng, 5, rng.randint(2, 4))
        mats = sorted({cm.psi(p, bs, cs) for p in sg.all_perms(5)}, key=lambda x: x.entries)
        for m in mats:
            for m2 in mats:
                if not cm.leq(m, m2):
                    continue
                pairs += 1
                a = cm.kl_inverse_mat(m, m2, "backsub")
                b = cm.kl_inverse_mat(m, m2, "cosetsum")
                c(a == b, f"{bs};{cs} {m} {m2}: {a} vs {b}")
    return c.result(f"{pairs} matrix pairs over 3 block specs")


# 6. cancellation properties

def _check_cancellation(c, mod, y, w, i, label):
    iv = mod.interval(y, w)
    shift = mod.length(w) - mod.length(mod.cancel(w, i))
    for x in iv:
        c(x(i) == y(i) and mod.inv_below(x, i) == mod.inv_below(y, i), f"{label}: rigidity fails at {x}")
        c(mod.length(x) - mod.length(mod.cancel(x, i)) == shift, f"{label}: length shift at {x}")
    image = {x: mod.cancel(x, i) for x in iv}
    target = set(mod.interval(mod.cancel(y, i), mod.cancel(w, i)))
    c(len(set(image.values())) == len(iv) and set(image.values()) == target, f"{label}: not a bijection")
    for u in iv:
        for v in iv:
            c(mod.bruhat_leq(u, v) == mod.bruhat_leq(image[u], image[v]), f"{label}: order at ({u},{v})")
            c(mod.kl_poly(u, v) == mod.kl_poly(image[u], image[v]), f"{label}: KL at ({u},{v})")
    return len(iv)


def criterion_6():
    c = Check()
    sizes = []
    for seed in range(100):
        d = random.Random(seed).randint(3, 7)
        y, w, i = oracle.random_cancellable(d, seed=seed)
        sizes.append(_check_cancellation(c, sg, y, w, i, f"S_{d} seed {seed}"))
    for seed in range(30):
        d = random.Random(seed).randint(3, 4)
        y, w, i = oracle.random_cancellable(d, affine=True, seed=seed, max_length=12)
        c(asg.length(w) <= 12, f"affine seed {seed}: length {asg.length(w)}")
        sizes.append(_check_cancellation(c, asg, y, w, i, f"affine S_{d} seed {seed}"))
    for seed in range(20):
        d = 5 + seed % 2
        m, m2, (i, j) = oracle.random_cancellable_matrix(d, seed=seed)
        a, b = cm.cancel_entry(m, i, j), cm.cancel_entry(m2, i, j)
        iv = cm.interval(m, m2)
        cut = {x: cm.cancel_entry(x, i, j) for x in iv if x[i, j] >= 1}
        c(len(cut) == len(iv), f"matrix seed {seed}: entry vanishes inside the interval")
        c(set(cut.values()) == set(cm.interval(a, b)), f"matrix seed {seed}: not a bijection")
        for x in iv:
            c(cm.kl_poly_mat(x, m2) == cm.kl_poly_mat(cut[x], b), f"matrix seed {seed}: KL at {x}")
            c(cm.kl_inverse_mat(m, x) == cm.kl_inverse_mat(a, cut[x]),
              f"matrix seed {seed}: inverse KL at {x}")
    return c.result(f"150 triples, interval sizes up to {max(sizes)}")


# 7. two-segment multisegments on the cyclic quiver

def criterion_7():
    c = Check()
    pairs = 0
    for n in (1, 2, 3):
        segs = [(a, b) for a in range(1, 4 * n + 1) for b in range(a, 4 * n + 1)]
        seen = set()
        for s1 in range(len(segs)):
            for s2 in range(s1, len(segs)):
                m = qo.CyclicMultisegment(n, (segs[s1], segs[s2]))
                if m in seen:
                    continue
                seen.add(m)
                for x in qo.upper_set(m):
                    pairs += 1
                    p = qo.ic_poly(m, x)
                    c(p == ONE, f"IC({m}, {x}) = {p}")
    return c.result(f"{pairs} pairs")


# 8. inverse IC entries are signs for placed skew shapes

def _random_linear_shape(rng):
    while True:
        k = rng.randint(1, 4)
        lam = tuple(sorted((rng.randint(0, 6) for _ in range(k)), reverse=True))
        mu = tuple(sorted((rng.randint(0, 6) for _ in range(k)), reverse=True))
        if qo.contains(lam, mu) and qo.has_trivial_stabilizer(lam) and qo.has_trivial_stabilizer(mu):
            return lam, mu


def _random_affine_weight(rng, k, n):
    top = rng.randint(k, 6)
    while True:
        lam = tuple(sorted((rng.randint(top - n + k, top) for _ in range(k)), reverse=True))
        if lam[0] == top and qo.in_domain_affine(lam, n) and qo.has_trivial_stabilizer(lam, n):
            return lam


def criterion_8():
    c = Check()
    rng = random.Random(8)
    for _ in range(25):
        lam, mu = _random_linear_shape(rng)
        c(qo.sign_inverse_check(lam, mu), f"linear {lam}/{mu}")
    done = 0
    while done < 10:
        k = rng.randint(1, 3)
        n = rng.randint(k, k + 2)
        lam, mu = _random_affine_weight(rng, k, n), _random_affine_weight(rng, k, n)
        if not qo.contains(lam, mu):
            continue
        done += 1
        c(qo.sign_inverse_check(lam, mu, n), f"affine {lam}/{mu} mod {n}")
    return c.result("25 linear and 10 affine shapes")


# 9. IC on multisegments equals KL on the group side

def _random_domain_weight(rng, k, n):
    while True:
        lam = tuple(rng.randint(0, 6) for _ in range(k))
        if qo.in_domain(lam) if n is None else qo.in_domain_affine(lam, n):
            return lam


def criterion_9():
    c = Check()
    rng = random.Random(9)
    nonzero = 0
    for variant in ("finite", "affine"):
        done = 0
        while done < 20:
            k = rng.randint(2, 4) if variant == "finite" else rng.randint(2, 3)
            n = None if variant == "finite" else rng.randint(k, k + 2)
            lam, mu = _random_domain_weight(rng, k, n), _random_domain_weight(rng, k, n)
            if not qo.contains(lam, mu):
                continue
            form = qo.StandardForm(lam, mu, n)
            elems = form.elements()
            w = rng.choice(elems)
            above = [x for x in elems if (sg if n is None else asg).bruhat_leq(form.circ(w), form.circ(x))]
            w2 = rng.choice(above if rng.random() < 0.7 else elems)
            done += 1
            ic = qo.ic_poly(form.multisegment(w), form.multisegment(w2))
            a, b = form.circ(w), form.circ(w2)
            kl = sg.kl_poly(a, b) if n is None else asg.kl_poly(a, b)
            nonzero += not kl.is_zero()
            c(ic == kl, f"{variant} {lam}/{mu} ({w}, {w2}): IC {ic} vs P {kl}")
    return c.result(f"40 instances, {nonzero} with nonzero value")


# 10. decomposition multiplicities

def criterion_10():
    c = Check()
    for lam, n in [((2, 1), 3), ((3, 0), 2), ((4, 2, 1), 3), ((1, 1), 4)]:
        v = qo.decomp_multiplicity(lam, lam, n, len(lam))
        c(v == 1, f"diagonal {lam} mod {n}: {v}")
    for lam, mu, n in [((2, 0), (1, 1), 4), ((3, 1), (2, 2), 3), ((3, 0, 0), (1, 1, 1), 4)]:
        c(not qo.same_orbit(lam, mu, n), f"{lam}, {mu} share an orbit mod {n}")
        v = qo.decomp_multiplicity(lam, mu, n, len(lam))
        c(v == 0, f"off-orbit {lam}, {mu} mod {n}: {v}")
    rng = random.Random(10)
    values = []
    done = 0
    while done < 10:
        n = rng.randint(2, 4)
        total = rng.randint(2, 8)
        a, b = rng.randint(0, total), rng.randint(0, total)
        lam = tuple(sorted((a, total - a), reverse=True))
        mu = tuple(sorted((b, total - b), reverse=True))
        if not qo.same_orbit(lam, mu, n):
            continue
        done += 1
        v1 = qo.decomp_multiplicity(lam, mu, n, 2)
        v2 = qo.decomp_multiplicity_by_segments(lam, mu, n, 2)
        values.append(v1)
        c(v1 == v2, f"{lam}, {mu} mod {n}: {v1} vs {v2}")
    return c.result(f"k=2 values {values}")


CRITERIA = [
    (1, "coset matrices, longest representatives and cancellation (finite example)", criterion_1, 30),
    (2, "periodic matrix window and affine cancellation", criterion_2, None),
    (3, "cyclic quiver example: maxima, IC, inverse IC, reduced representatives", criterion_3, 60),
    (4, "engine agrees with whole-group tables and reflection closure", criterion_4, 300),
    (5, "inversion identities", criterion_5, None),
    (6, "cancellation property suite", criterion_6, None),
    (7, "two-segment IC sweep", criterion_7, None),
    (8, "sign formula for placed skew shapes", criterion_8, None),
    (9, "IC equals group-side KL polynomial", criterion_9, None),
    (10, "decomposition multiplicities", criterion_10, None),
]


def _run(number, title, fn, limit):
    ok, detail, secs = _timed(fn)
    if limit is not None and secs >= limit:
        ok, detail = False, f"{detail}; took {secs:.1f}s, limit {limit}s"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail}; {secs:.2f}s)"
    return ok, line


@pytest.mark.parametrize("number,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    ok, line = _run(number, title, fn, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_run(*crit) for crit in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
