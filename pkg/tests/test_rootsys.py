import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adeflop import rootsys as R

SYSTEMS = [("A", n) for n in range(1, 9)] + [("D", n) for n in range(4, 9)] + [("E", n) for n in (6, 7, 8)]


def test_edges_of_small_systems():
    assert R.build("A", 3).edges == ((1, 2), (2, 3))
    assert set(R.build("D", 4).edges) == {(1, 3), (2, 3), (3, 4)}
    assert set(R.build("E", 6).edges) == {(1, 3), (2, 3), (3, 4), (4, 5), (2, 6)}


def test_order_of_small_systems():
    assert R.positive_roots_ordered(R.build("A", 2)) == [(1, 0), (0, 1), (1, 1)]
    d4 = R.positive_roots_ordered(R.build("D", 4))
    assert d4[:6] == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 1, 0), (0, 1, 1, 0), (1, 1, 1, 0)]


@pytest.mark.parametrize("kind,n", SYSTEMS)
def test_root_counts(kind, n):
    count = len(R.positive_roots(R.build(kind, n)))
    assert count == R.expected_count(kind, n)
    assert count == {"A": n * (n + 1) // 2, "D": n * (n - 1), "E": {6: 36, 7: 63, 8: 120}.get(n)}[kind]


# [DERIVED] highest roots from a separate brute-force reflection closure, frozen

@pytest.mark.parametrize("kind,n,root", [
    ("A", 3, (1, 1, 1)),
    ("D", 4, (1, 1, 2, 1)),
    ("E", 6, (2, 2, 3, 2, 1, 1)),
    ("E", 7, (2, 3, 4, 3, 2, 2, 1)),
    ("E", 8, (3, 5, 6, 4, 2, 4, 3, 2)),
])
def test_highest_root(kind, n, root):
    rs = R.build(kind, n)
    assert R.highest_root(rs) == root
    assert all(rs.cartan_pairing(root, i) >= 0 for i in range(1, n + 1))


def test_e8_highest_root_height():
    assert sum(R.highest_root(R.build("E", 8))) == 29


def test_pairing_with_e0():
    form = R.pairing_form(R.build("A", 3))
    assert R.pairing(form, 0, (1, 0, 0, 0)) == -2


@pytest.mark.parametrize("n", range(2, 9))
def test_pairing_with_interval_classes(n):
    form = R.pairing_form(R.build("A", n))
    for i, j in itertools.combinations_with_replacement(range(1, n + 1), 2):
        lam = R.e0_minus(R.interval_root(n, i, j))
        for k in range(1, n + 1):
            value = R.pairing(form, k, lam)
            if k in (i - 1, j + 1):
                assert value == -1
            elif i < k < j:
                assert value == 0


def test_wall_classes():
    assert R.wall_classes(R.build("A", 1)) == [(1, -1)]
    assert R.wall_classes(R.build("A", 3))[2] == (1, -1, -1, 0)
    for kind, n in SYSTEMS:
        rs = R.build(kind, n)
        assert R.wall_classes(rs)[-1] == R.e0_minus(R.highest_root(rs))


def test_unsupported_systems():
    for kind, n in (("A", 0), ("D", 3), ("E", 9), ("B", 3)):
        with pytest.raises(R.UnsupportedRootSystem):
            R.build(kind, n)


def test_pairing_index_errors():
    form = R.pairing_form(R.build("A", 2))
    with pytest.raises(IndexError):
        R.pairing(form, 3, (0, 0, 0))
    with pytest.raises(ValueError):
        R.pairing(form, 1, (0, 0))


# Properties

systems = st.sampled_from(SYSTEMS)


@given(systems, st.data())
def test_root_pairings_and_reflections(sys_, data):
    rs = R.build(*sys_)
    roots = set(R.positive_roots(rs))
    alpha = data.draw(st.sampled_from(sorted(roots)))
    i = data.draw(st.integers(1, rs.n))
    assert -2 <= rs.cartan_pairing(alpha, i) <= 2
    beta = R.reflect(rs, alpha, i)
    assert beta in roots or tuple(-c for c in beta) in roots
    assert rs.form(alpha, alpha) == 2


@pytest.mark.parametrize("kind,n", [("A", 8), ("D", 8), ("E", 8)])
def test_order_is_strict_total(kind, n):
    roots = R.positive_roots(R.build(kind, n))
    for a, b in itertools.product(roots, repeat=2):
        assert [R.root_less(a, b), R.root_less(b, a), a == b].count(True) == 1
    assert all(R.root_less(a, b) for a, b in zip(roots, roots[1:]))


@given(systems)
def test_highest_root_dominates(sys_):
    rs = R.build(*sys_)
    top = R.highest_root(rs)
    assert all(all(t >= c for t, c in zip(top, alpha)) for alpha in R.positive_roots(rs))


@given(systems)
def test_pairing_matrix_is_minus_a1_plus_cartan(sys_):
    rs = R.build(*sys_)
    form = R.pairing_form(rs)
    n = rs.n
    for k in range(n + 1):
        for m in range(n + 1):
            unit = tuple(1 if t == m else 0 for t in range(n + 1))
            want = -2 if k == m == 0 else 0 if 0 in (k, m) else -rs.cartan[k - 1][m - 1]
            assert R.pairing(form, k, unit) == want
