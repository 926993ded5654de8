"""The sl4 slice through a sub-subregular nilpotent and its defining equations.

The nilpotent x = E12 + E34 sits in the sl2-triple (x, y, h) with
y = E21 + E43 and h = diag(1, -1, 1, -1).  The slice x + Ker(ad y) is the
matrix family

    [ t1   1   s1   0 ]
    [ t2   t1  s2   s1]
    [ s3   0  -t1   1 ]
    [ s4   s3  u  -t1 ]

and its intersection with the nilpotent cone is cut out by the
characteristic polynomial coefficients.  After eliminating t2 the result is
compared with two stated equations in t1, s1, s2, s3, s4, u by mutual
Groebner membership.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (DEFAULT_BUDGET, BudgetExceeded, Ideal, MPoly, SymbolicMatrix, VarRegistry,
                       char_poly, contains, elimination_ideal, groebner, reduce)
from .report import VerificationReport

VARS = ("t1", "t2", "s1", "s2", "s3", "s4", "u")
REGISTRY = VarRegistry(VARS)

PUBLISHED = (
    "2*t1^3+2*t1*s1*s3-s2*s3-s1*s4+2*t1*u",
    "6*t1^2*s1*s3+6*s1^2*s3^2+3*t1*s2*s3+3*t1*s1*s4-10*t1^2*u-4*s1*s3*u-2*s2*s4-2*u^2",
)


def _unit(i: int, j: int) -> SymbolicMatrix:
    return SymbolicMatrix([[1 if (r, c) == (i, j) else 0 for c in range(4)] for r in range(4)], REGISTRY)


def sl2_triple() -> tuple[SymbolicMatrix, SymbolicMatrix, SymbolicMatrix]:
    x = _unit(0, 1) + _unit(2, 3)
    y = _unit(1, 0) + _unit(3, 2)
    h = _unit(0, 0) - _unit(1, 1) + _unit(2, 2) - _unit(3, 3)
    return x, y, h


def bracket(a: SymbolicMatrix, b: SymbolicMatrix) -> SymbolicMatrix:
    return a @ b - b @ a


def sl4_slice() -> SymbolicMatrix:
    p = REGISTRY.parse
    rows = [["t1", "1", "s1", "0"],
            ["t2", "t1", "s2", "s1"],
            ["s3", "0", "-t1", "1"],
            ["s4", "s3", "u", "-t1"]]
    return SymbolicMatrix([[p(e) for e in row] for row in rows], REGISTRY)


def published_pair() -> tuple[MPoly, MPoly]:
    return tuple(REGISTRY.parse(t) for t in PUBLISHED)


def lambda_coefficients(m: SymbolicMatrix, var: str = "lam") -> dict[int, MPoly]:
    """Coefficients of det(var*I - m) by power of ``var``, over the matrix registry."""
    cp = char_poly(m, var)
    li = cp.registry.index(var)
    grouped: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for e, c in cp.terms.items():
        grouped.setdefault(e[li], {})[e[:li] + e[li + 1:]] = c
    return {k: MPoly(m.registry, t) for k, t in grouped.items()}


@dataclass
class SliceIdeal:
    generators: list[MPoly]
    c3: MPoly

    def ideal(self) -> Ideal:
        return Ideal(self.generators)


def nilpotency_ideal(m: SymbolicMatrix) -> SliceIdeal:
    """(c2, c1, c0) of the characteristic polynomial; c3, the trace term, is kept aside."""
    cs = lambda_coefficients(m)
    zero = m.registry.zero()
    return SliceIdeal([cs.get(k, zero) for k in (2, 1, 0)], cs.get(3, zero))


def triple_report() -> VerificationReport:
    rep = VerificationReport("slodowy_triple")
    x, y, h = sl2_triple()
    rep.add("x_y_is_h", bracket(x, y) == h, "[x,y] differs from h")
    rep.add("h_x_is_2x", bracket(h, x) == x.scale(2), "[h,x] differs from 2x")
    rep.add("h_y_is_minus_2y", bracket(h, y) == y.scale(-2), "[h,y] differs from -2y")
    m = sl4_slice()
    rep.add("slice_through_x", m.substitute({v: 0 for v in VARS}) == x, "slice at the origin is not x")
    rep.add("slice_in_ker_ad_y", bracket(y, m - x) == SymbolicMatrix.identity(REGISTRY, 4).scale(0),
            "m - x does not commute with y")
    rep.add("trace_zero", m.trace().is_zero(), m.trace().to_text())
    return rep


def eliminate_and_compare(budget: int = DEFAULT_BUDGET) -> VerificationReport:
    rep = VerificationReport("slodowy_sl4", {"budget": budget})
    rep.extend(triple_report())
    m = sl4_slice()
    nil = nilpotency_ideal(m)
    rep.add("c3_zero", nil.c3.is_zero(), nil.c3.to_text())
    rep.add("coefficients_nonzero", all(not g.is_zero() for g in nil.generators),
            "a characteristic coefficient vanishes identically")
    origin = {v: 0 for v in VARS}
    cs = lambda_coefficients(m.substitute(origin))
    rep.add("origin_char_poly_is_lam4", set(cs) == {4} and cs[4] == REGISTRY.one(),
            "characteristic polynomial at the origin is not lam^4")
    for k, g in zip((2, 1, 0), nil.generators):
        rep.note(f"c{k} = {g.to_text()}")
    try:
        elim = elimination_ideal(nil.ideal(), ["t2"], budget)
        pub = published_pair()
        for i, p in enumerate(pub, 1):
            r = reduce(p, elim)
            rep.add(f"published_{i}_in_eliminated", r.is_zero(), f"remainder {r.to_text()}")
        pub_gb = groebner(Ideal(pub), budget)
        back = [(g, reduce(g, pub_gb)) for g in elim.generators]
        lost = [f"{g.to_text()} -> {r.to_text()}" for g, r in back if not r.is_zero()]
        rep.add("eliminated_in_published", not lost, "; ".join(lost))
        rep.add("published_pair_has_no_linear_or_constant_terms",
                all(sum(e) >= 2 for p in pub for e in p.terms),
                "a published equation has a term of degree below 2")
    except BudgetExceeded as exc:
        rep.add_budget("groebner", str(exc))
        return rep
    rep.params["eliminated_generators"] = len(elim.generators)
    for g in elim.generators:
        rep.note(f"eliminated basis: {g.to_text()}")
    for i, p in enumerate(pub, 1):
        rep.note(f"published {i}: {p.to_text()}")
    rep.note("verdict: " + ("mutual membership" if not lost else "published pair inside the eliminated ideal only"))
    return rep


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    return Fraction(a, b) if a * a == q.numerator and b * b == q.denominator else None


def published_points(count: int, seed: int = 0, bound: int = 6, attempts: int = 20000
                     ) -> list[dict[str, Fraction]]:
    """Rational points of the published pair with nonzero s1.

    The first equation is solved for s4 and the second, then quadratic in u,
    is kept when its discriminant is a rational square.
    """
    rng = random.Random(seed)
    one = VarRegistry(("u",))
    e1, e2 = published_pair()
    out: list[dict[str, Fraction]] = []
    for _ in range(attempts):
        if len(out) >= count:
            break
        pt = {n: Fraction(rng.randint(-bound, bound)) for n in ("t1", "s1", "s2", "s3")}
        if pt["s1"] == 0:
            continue
        u = one.var("u")
        rest = e1.substitute({**pt, "t2": 0, "s4": 0, "u": u}, target=one)
        s4 = rest / pt["s1"]
        q = e2.substitute({**pt, "t2": 0, "s4": s4, "u": u}, target=one)
        a, b, c = (q.coefficient({"u": k}) for k in (2, 1, 0))
        if a == 0:
            continue
        root = _rational_sqrt(b * b - 4 * a * c)
        if root is None:
            continue
        uval = (-b + root) / (2 * a)
        point = {**pt, "u": uval, "s4": s4.evaluate({"u": uval})}
        if e1.evaluate({**point, "t2": 0}) == 0 and e2.evaluate({**point, "t2": 0}) == 0:
            out.append(point)
    return out


def lift_t2(point: dict[str, Fraction], nil: SliceIdeal) -> Fraction | None:
    """Solve the first generator that is linear in t2 with a nonzero slope at ``point``."""
    one = VarRegistry(("t2",))
    t2 = one.var("t2")
    for g in nil.generators:
        if g.degree("t2") != 1:
            continue
        h = g.substitute({**point, "t2": t2}, target=one)
        slope = h.coefficient({"t2": 1})
        if slope:
            return -h.coefficient({"t2": 0}) / slope
    return None


def specialization_report(count: int = 20, seed: int = 0) -> VerificationReport:
    rep = VerificationReport("slodowy_specialization", {"count": count, "seed": seed})
    nil = nilpotency_ideal(sl4_slice())
    pts = published_points(count, seed)
    rep.params["points"] = len(pts)
    bad = []
    for pt in pts:
        t2 = lift_t2(pt, nil)
        if t2 is None:
            continue
        full = {**pt, "t2": t2}
        if any(g.evaluate(full) != 0 for g in nil.generators):
            bad.append(str({k: str(v) for k, v in sorted(full.items())}))
    rep.add("lifted_points_nilpotent", bool(pts) and not bad, "; ".join(bad[:3]) or "no sample points")
    return rep


def membership(p: MPoly, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``p`` lies in the nilpotency ideal of the slice."""
    return contains(nilpotency_ideal(sl4_slice()).ideal(), p, budget)
