from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adeflop import wzcert as W


def test_small_sums():
    assert W.sum_lhs("eq22", 3, 1) == comb(4, 3) * comb(1, 1) == 4
    assert W.sum_lhs("eq21", 3, 0) == comb(4, 0) + comb(4, 2) + comb(4, 4) == 8
    assert W.sum_lhs("eq22", 5, 2) == comb(6, 5) * comb(2, 2) == 6


def test_printed_eq21_fails_at_3_1():
    assert W.sum_lhs("eq21", 3, 1) == 8
    assert W.rhs_printed("eq21", 3, 1) == 9
    assert W.rhs_corrected("eq21", 3, 1) == 2 * Fraction(4, 3) * 3 == 8


def test_printed_eq21_undefined_at_n_equal_k():
    assert W.rhs_printed("eq21", 1, 1) is None


@pytest.mark.parametrize("ident", W.IDS)
def test_identity_reports(ident):
    rep = W.verify_identity(ident, 60)
    assert rep.passed
    if ident == "eq21":
        assert "printed_form_fails_at_3_1" in {c.name for c in rep.checks}
        assert rep.params["printed_failures"] > 0


@pytest.mark.parametrize("ident", W.IDS)
def test_certificate_reports(ident):
    assert W.verify_certificate(ident, 20).passed


def test_eq22_certificate_at_a_grid_point():
    cert = W.certificate("eq22")
    for N in (7, 8):
        lhs = cert.F(N + 1, 2, 1) - cert.F(N, 2, 1)
        rhs = cert.G(N, 3, 1) - cert.G(N, 2, 1)
        assert lhs == rhs


def test_certificate_vanishes_beyond_support():
    cert = W.certificate("eq22")
    assert cert.F(6, 9, 1) == 0 and cert.F(6, -1, 1) == 0


def test_printed_normalisation_breaks_eq21_certificate():
    res = W.check_certificate(W.certificate("eq21", corrected=False), 20)
    assert res.failed


def test_unknown_identity():
    with pytest.raises(ValueError):
        W.summand("eq23", 3, 1, 1)


# Properties

@given(st.sampled_from(W.IDS), st.integers(1, 60), st.data())
def test_corrected_forms_match_brute_force(ident, n, data):
    k = data.draw(st.integers(0, W._upper(ident, n)))
    top = (n + 1) // 2 if ident == "eq21" else n // 2
    offset = 0 if ident == "eq21" else 1
    brute = sum(comb(n + 1, 2 * i + offset) * comb(i, k) for i in range(k, top + 1))
    assert W.sum_lhs(ident, n, k) == brute == W.rhs_corrected(ident, n, k)


@given(st.sampled_from(W.IDS), st.integers(1, 20), st.integers(0, 10))
def test_sum_over_k_is_one_where_defined(ident, N, i):
    cert = W.certificate(ident)
    try:
        total = sum((cert.F(N, k, i) for k in range(-2, N + 3)), Fraction(0))
    except W.Pole:
        return
    assert total == 1
