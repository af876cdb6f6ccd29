import time

import pytest

from klquiver import affsymgroup as asg
from klquiver import cosetmat as cm
from klquiver import oracle
from klquiver import symgroup as sg
from klquiver.qpoly import ONE


def test_selftest_passes():
    results = oracle.selftest()
    assert results
    failed = [(name, detail) for name, ok, detail in results if not ok]
    assert failed == []


def test_s3_hexagon():
    data = oracle.bruhat_closure(3)
    assert len(data.elements) == 6
    comparable = sum(len(data.below[w]) for w in data.elements)
    assert comparable == 19
    ident, w0 = (1, 2, 3), (3, 2, 1)
    assert all(data.leq(ident, x) and data.leq(x, w0) for x in data.elements)
    # the two middle layers are complete bipartite
    middle = [x for x in data.elements if data.length[x] == 1]
    upper = [x for x in data.elements if data.length[x] == 2]
    assert all(data.leq(a, b) for a in middle for b in upper)


def test_s3_table_is_all_ones():
    table = oracle.finite_kl_table(3)
    assert set(table.table.values()) == {ONE}
    assert table.check_invariants() == []


def test_infinite_dihedral_table_is_all_ones():
    table = oracle.affine_kl_table(2, 10)
    assert set(table.table.values()) == {ONE}
    assert table.check_invariants() == []


def test_cap_is_enforced():
    with pytest.raises(oracle.OracleCapError):
        oracle.finite_group(9)
    with pytest.raises(ValueError):
        oracle.bruhat_closure(3, None, affine=True)


def test_random_cancellable_is_valid_and_deterministic():
    for seed in range(10):
        y, w, i = oracle.random_cancellable(6, seed=seed)
        assert sg.cancellable(y, w, i)
        assert (y, w, i) == oracle.random_cancellable(6, seed=seed)
    for seed in range(5):
        y, w, i = oracle.random_cancellable(3, affine=True, seed=seed)
        assert asg.cancellable(y, w, i)
        assert (y, w, i) == oracle.random_cancellable(3, affine=True, seed=seed)


def test_affine_sampling_needs_degree_three():
    with pytest.raises(ValueError):
        oracle.random_cancellable(2, affine=True, seed=0)


def test_random_cancellable_matrix():
    for seed in range(10):
        m, m2, (i, j) = oracle.random_cancellable_matrix(5, seed=seed)
        assert cm.leq(m, m2)
        assert cm.cancellable_entry(m, m2, i, j)


def test_sampling_speed_at_degree_seven():
    start = time.perf_counter()
    for seed in range(100):
        oracle.random_cancellable(7, seed=seed)
    assert time.perf_counter() - start < 60
