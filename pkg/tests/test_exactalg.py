from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adeflop.exactalg import (BudgetExceeded, Ideal, MPoly, NotInvertible, RegistryMismatch, SymbolicMatrix,
                              TruncSeries, VarRegistry, binomial, char_poly, contains, elimination_ideal,
                              groebner, lex, poly_arith, rational_det, reduce, series_ops, substitute)

R = VarRegistry(["x", "y", "z"])
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeffs, max_size=4).map(lambda t: MPoly(R, t))
points = st.tuples(coeffs, coeffs, coeffs).map(lambda v: dict(zip(R.names, v)))


def P(text, reg=R):
    return reg.parse(text)


# [TRIVIAL] direct identities

def test_difference_of_squares():
    assert poly_arith("mul", [P("x+y"), P("x-y")]) == P("x^2-y^2")


def test_additive_inverse_is_zero():
    p = P("3*x^2*y-1/2*z+7")
    assert (p + (-p)).is_zero()


def test_substitute_simple():
    assert substitute(P("x^2+y"), {"x": P("y")}) == P("y^2+y")


def test_identity_bindings_leave_polynomial_unchanged():
    p = P("x*y^2-z+4")
    assert p.substitute({n: R.var(n) for n in R.names}) == p


def test_membership_trivial_cases():
    assert reduce(P("x^2"), groebner(Ideal([P("x")]))).is_zero()
    nf = reduce(P("x*y"), groebner(Ideal([P("x^2"), P("y^2")])))
    assert nf == P("x*y")


def test_char_poly_small_matrices():
    reg = VarRegistry(["x"])
    ident = SymbolicMatrix.identity(reg, 2)
    lam = ident.registry.extend("lam").var("lam")
    assert char_poly(ident) == (lam - 1) ** 2
    jordan = SymbolicMatrix([[0, 1], [0, 0]], reg)
    assert char_poly(jordan) == lam ** 2


def test_geometric_series_inverse():
    reg = VarRegistry(["t"])
    s = TruncSeries.from_poly(P("1-t", reg), "t", None, 3)
    assert s.invert() == TruncSeries.from_poly(P("1+t+t^2+t^3", reg), "t", None, 3)


def test_truncate_to_order_zero_keeps_constant():
    reg = VarRegistry(["t"])
    s = TruncSeries.from_poly(P("5+t+2*t^2", reg), "t", None, 4)
    assert series_ops("truncate", [s], order=0) == TruncSeries.from_poly(P("5", reg), "t", None, 0)


def test_registry_mismatch_raises():
    other = VarRegistry(["x", "y"])
    with pytest.raises(RegistryMismatch):
        _ = P("x") + other.var("x")


def test_budget_exceeded_raises():
    gens = [P("x^2-y"), P("x*y-z"), P("y*z-x")]
    with pytest.raises(BudgetExceeded):
        groebner(Ideal(gens), budget=1)


def test_not_invertible_series():
    reg = VarRegistry(["t", "x"])
    s = TruncSeries.from_poly(P("x+t", reg), "t", None, 2)
    with pytest.raises(NotInvertible):
        s.invert()


def test_binomial_edges():
    assert binomial(5, 2) == 10 and binomial(3, 5) == 0 and binomial(4, -1) == 0


# [DERIVED] values computed once with sympy and frozen here

def test_even_part_expansion():
    reg = VarRegistry(["x2", "s"])
    got = P("(x2+s)^4+(x2-s)^4", reg)
    assert got == P("2*x2^4+12*x2^2*s^2+2*s^4", reg)


def test_series_inverse_with_pole():
    reg = VarRegistry(["z1", "d"])
    s = TruncSeries.from_poly(P("2*z1-d", reg), "d", "z1", 2)
    want = {(-1, 0): Fraction(1, 2), (-2, 1): Fraction(1, 4), (-3, 2): Fraction(1, 8)}
    assert s.invert().terms == want


def test_elimination_of_parametrised_curve():
    # twisted cubic: x = t, y = t^2, z = t^3
    reg = VarRegistry(["t", "x", "y", "z"])
    ideal = Ideal([P("x-t", reg), P("y-t^2", reg), P("z-t^3", reg)])
    elim = elimination_ideal(ideal, ["t"])
    for g in ("y-x^2", "z-x*y", "x*z-y^2"):
        assert reduce(P(g, reg), elim).is_zero()
    assert all(g.degree("t") == 0 for g in elim.generators)


def test_lex_basis_of_two_lines():
    gb = groebner(Ideal([P("x*y"), P("x+y-1")], lex(R)))
    assert reduce(P("y^2-y"), gb).is_zero()


def test_parse_and_render_round_trip():
    p = P("x^2-3*y+1/2")
    assert P(p.to_text()) == p


# Properties

@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a - b).evaluate(pt) == a.evaluate(pt) - b.evaluate(pt)


IDEAL_GENS = [P("x^2-y*z"), P("x*y-z^2+x"), P("y^3-x")]
GB = groebner(Ideal(IDEAL_GENS))


@given(st.lists(polys, min_size=3, max_size=3))
def test_combination_of_generators_reduces_to_zero(qs):
    combo = sum((q * g for q, g in zip(qs, IDEAL_GENS)), R.zero())
    assert reduce(combo, GB).is_zero()


@given(polys)
def test_groebner_is_idempotent_on_normal_forms(p):
    again = groebner(GB)
    assert reduce(p, again) == reduce(p, GB)
    assert contains(GB, p) == reduce(p, GB).is_zero()


@given(st.lists(coeffs, min_size=3, max_size=3).filter(lambda v: v[0] != 0))
def test_series_invert_then_multiply_is_one(c):
    reg = VarRegistry(["t"])
    s = TruncSeries(reg, "t", None, 5, {(0,): c[0], (1,): c[1], (2,): c[2]})
    assert (s * s.invert()).is_one()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3), coeffs)
def test_char_poly_agrees_with_gaussian_elimination(rows, lam0):
    reg = VarRegistry(["x"])
    m = SymbolicMatrix(rows, reg)
    cp = char_poly(m)
    shifted = [[(lam0 if i == j else 0) - rows[i][j] for j in range(3)] for i in range(3)]
    assert cp.evaluate({"x": 0, "lam": lam0}) == rational_det(shifted)
