"""Wreath-product invariants of type A and D, their relations, and chart checks.

The group acts on C[a1, a2, b1, b2] by signed monomial substitutions whose
scalars are powers of a root of unity, kept as exponents modulo M.  Because
every element maps monomials to monomials bijectively, invariance reduces to
checking that each image coefficient is rational and equal to the original.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactalg import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CycScalar,
    Ideal,
    MPoly,
    VarRegistry,
    binomial,
    block_order,
    elimination_ideal,
    groebner,
    reduce,
)
from .report import VerificationReport

AB = VarRegistry(["a1", "a2", "b1", "b2"])
UVW = VarRegistry(["u1", "v1", "w1", "u2", "v2", "w2"])
X = VarRegistry([f"x{i}" for i in range(1, 10)])
CHART5 = VarRegistry(["x1", "x2", "x3", "x5", "x7p", "x9p"])
CHART4 = VarRegistry(["x1", "x2", "x3", "x4", "x7p", "x8p"])
BLOWUP = VarRegistry(["x1pp", "x2", "x3pp", "x5", "x7p", "x9p", "tpp"])

BD_ORDER_NOTE = ("binary dihedral factor has order 4(n-2), the order of the group generated by "
                 "diag(zeta, zeta^-1) and [[0,1],[-1,0]]; the printed 4(n-4) is not used")


def _check_type(kind: str, n: int) -> None:
    if kind == "A" and n >= 1:
        return
    if kind == "D" and n >= 4:
        return
    raise ValueError(f"unsupported type {kind}{n}")


def _mono(reg: VarRegistry, coef: int | Fraction, **exps: int) -> MPoly:
    """coef * prod(var^e); zero when coef is zero, error on a live negative exponent."""
    if coef == 0:
        return reg.zero()
    e = [0] * len(reg)
    for name, k in exps.items():
        if k < 0:
            raise ValueError(f"negative exponent {name}^{k} with nonzero coefficient")
        e[reg.index(name)] = k
    return MPoly(reg, {tuple(e): coef})


def _pow2(k: int) -> Fraction:
    return Fraction(2) ** k


# --------------------------------------------------------------------------
# Group elements


@dataclass(frozen=True)
class GroupElement:
    """Variable i goes to zeta^scalars[i] times variable perm[i]."""

    perm: tuple[int, ...]
    scalars: tuple[int, ...]
    modulus: int

    def compose(self, other: "GroupElement") -> "GroupElement":
        """The substitution 'apply other, then self' on variables."""
        perm = tuple(self.perm[other.perm[i]] for i in range(4))
        scal = tuple((other.scalars[i] + self.scalars[other.perm[i]]) % self.modulus for i in range(4))
        return GroupElement(perm, scal, self.modulus)

    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2, 3) and not any(self.scalars)

    def cyc(self, i: int) -> CycScalar:
        return CycScalar(self.scalars[i], self.modulus)

    def describe(self) -> str:
        names = AB.names
        parts = []
        for i in range(4):
            s = self.scalars[i]
            parts.append(f"{names[i]}->" + (f"z^{s}*" if s else "") + names[self.perm[i]])
        return "{" + ", ".join(parts) + f"}} (z primitive {self.modulus}-th root)"

    def act(self, p: MPoly) -> tuple[MPoly | None, str | None]:
        """Image of p over AB, or (None, reason) if a coefficient leaves Q."""
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in p.terms.items():
            f = [0, 0, 0, 0]
            k = 0
            for i, ei in enumerate(e):
                if ei:
                    f[self.perm[i]] += ei
                    k += ei * self.scalars[i]
            val = CycScalar(k, self.modulus).rational_value()
            if val is None:
                return None, f"coefficient picks up zeta^{k % self.modulus}"
            out[tuple(f)] = out.get(tuple(f), 0) + c * val
        return MPoly(AB, out), None


IDENTITY_PERM = (0, 1, 2, 3)
SWAP_PERM = (2, 3, 0, 1)


def group_generators(kind: str, n: int) -> list[GroupElement]:
    _check_type(kind, n)
    if kind == "A":
        m = n + 1
        gens = [GroupElement(IDENTITY_PERM, (1, m - 1, 0, 0), m),
                GroupElement(IDENTITY_PERM, (0, 0, 1, m - 1), m)]
    else:
        m = 2 * (n - 2)
        half = m // 2
        gens = [GroupElement(IDENTITY_PERM, (1, m - 1, 0, 0), m),
                GroupElement((1, 0, 2, 3), (0, half, 0, 0), m),
                GroupElement(IDENTITY_PERM, (0, 0, 1, m - 1), m),
                GroupElement((0, 1, 3, 2), (0, 0, 0, half), m)]
    gens.append(GroupElement(SWAP_PERM, (0, 0, 0, 0), gens[0].modulus))
    return gens


def expected_group_order(kind: str, n: int) -> int:
    _check_type(kind, n)
    if kind == "A":
        return 2 * (n + 1) ** 2
    return 2 * (4 * (n - 2)) ** 2


def _closure(gens: Sequence[GroupElement]) -> list[GroupElement]:
    identity = GroupElement(IDENTITY_PERM, (0, 0, 0, 0), gens[0].modulus)
    seen = {identity: None}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                k = h.compose(g)
                if k not in seen:
                    seen[k] = None
                    nxt.append(k)
        frontier = nxt
    return sorted(seen, key=lambda g: (g.perm, g.scalars))


def group_elements(kind: str, n: int) -> list[GroupElement]:
    return _closure(group_generators(kind, n))


def normal_subgroup(kind: str, n: int) -> list[GroupElement]:
    """The product of the two copies of the surface group (no swap)."""
    return _closure(group_generators(kind, n)[:-1])


def surface_group_order(kind: str, n: int) -> int:
    return n + 1 if kind == "A" else 4 * (n - 2)


# --------------------------------------------------------------------------
# Generators and relations


@dataclass(frozen=True)
class GeneratorSet:
    kind: str
    n: int
    first_stage: dict[str, MPoly]
    second_stage_uvw: dict[str, MPoly]
    second_stage_ab: dict[str, MPoly]


def first_stage(kind: str, n: int) -> dict[str, MPoly]:
    _check_type(kind, n)
    a1, a2, b1, b2 = AB.gens()
    out = {}
    for idx, (p, q) in ((1, (a1, a2)), (2, (b1, b2))):
        if kind == "A":
            u, v, w = p ** (n + 1), p * q, q ** (n + 1)
        else:
            u = p ** 2 * q ** 2
            v = p ** (2 * n - 4) + q ** (2 * n - 4)
            w = p ** (2 * n - 3) * q - p * q ** (2 * n - 3)
        out[f"u{idx}"], out[f"v{idx}"], out[f"w{idx}"] = u, v, w
    return out


def second_stage_uvw() -> dict[str, MPoly]:
    u1, v1, w1, u2, v2, w2 = UVW.gens()
    du, dv, dw = u1 - u2, v1 - v2, w1 - w2
    return {
        "x1": u1 + u2, "x2": v1 + v2, "x3": w1 + w2,
        "x4": du ** 2, "x5": dv ** 2, "x6": dw ** 2,
        "x7": du * dv, "x8": du * dw, "x9": dv * dw,
    }


def generator_set(kind: str, n: int) -> GeneratorSet:
    fs = first_stage(kind, n)
    ss = second_stage_uvw()
    ab = {k: v.substitute(fs, AB) for k, v in ss.items()}
    return GeneratorSet(kind, n, fs, ss, ab)


def relations(kind: str, n: int) -> dict[str, MPoly]:
    _check_type(kind, n)
    return _relations_a(n) if kind == "A" else _relations_d(n)


def _relations_a(n: int) -> dict[str, MPoly]:
    x = dict(zip(X.names, X.gens()))
    top = (n + 1) // 2
    c = _pow2(n - 1)
    m = lambda coef, **e: _mono(X, coef, **e)  # noqa: E731
    s1 = sum((m(binomial(n + 1, 2 * i), x2=n - 2 * i + 1, x5=i) for i in range(top + 1)), X.zero())
    s2 = sum((m(binomial(n + 1, 2 * i + 1), x2=n - 2 * i, x5=i + 1) for i in range(top + 1)), X.zero())
    s6 = sum((m(binomial(n + 1, 2 * i + 1), x2=n - 2 * i, x5=i, x9=1) for i in range(top + 1)), X.zero())
    s7 = sum((m(binomial(n + 1, 2 * i + 1), x2=n - 2 * i, x5=i, x7=1) for i in range(top + 1)), X.zero())
    return {
        "f1": s1 - c * (x["x1"] * x["x3"] + x["x8"]),
        "f2": s2 - c * (x["x1"] * x["x9"] + x["x3"] * x["x7"]),
        "f3": x["x5"] * x["x8"] - x["x7"] * x["x9"],
        "f4": x["x5"] * x["x6"] - x["x9"] ** 2,
        "f5": x["x4"] * x["x5"] - x["x7"] ** 2,
        "f6": s6 - c * (x["x1"] * x["x6"] + x["x3"] * x["x8"]),
        "f7": s7 - c * (x["x3"] * x["x4"] + x["x1"] * x["x8"]),
        "f8": x["x7"] * x["x8"] - x["x4"] * x["x9"],
        "f9": x["x6"] * x["x7"] - x["x8"] * x["x9"],
        "f10": x["x4"] * x["x6"] - x["x8"] ** 2,
    }


def _relations_d(n: int) -> dict[str, MPoly]:
    x1, x2, x3, x4, x5, x6, x7, x8, x9 = X.gens()
    c = _pow2(n - 6)
    m = lambda coef, **e: _mono(X, coef, **e)  # noqa: E731
    even = range((n - 1) // 2 + 1)
    odd = range(n // 2)
    s1 = sum((m(binomial(n - 1, 2 * i), x1=n - 2 * i - 1, x4=i) for i in even), X.zero())
    s2 = sum((m(binomial(n - 1, 2 * i + 1), x1=n - 2 * i - 2, x4=i + 1) for i in odd), X.zero())
    s6 = sum((m(binomial(n - 1, 2 * i + 1), x1=n - 2 * i - 2, x4=i, x7=1) for i in odd), X.zero())
    s8 = sum((m(binomial(n - 1, 2 * i + 1), x1=n - 2 * i - 2, x4=i, x8=1) for i in odd), X.zero())
    return {
        "f1": s1 + c * (-x1 * x2 ** 2 + 2 * x3 ** 2 - x1 * x5 + 2 * x6 - 2 * x2 * x7),
        "f2": s2 + c * (-x2 ** 2 * x4 - x4 * x5 - 2 * x1 * x2 * x7 + 4 * x3 * x8),
        "f3": x4 * x5 - x7 ** 2,
        "f4": x7 * x8 - x4 * x9,
        "f5": x4 * x6 - x8 ** 2,
        "f6": s6 + c * (-2 * x1 * x2 * x5 - x2 ** 2 * x7 - x5 * x7 + 4 * x3 * x9),
        "f7": x5 * x8 - x7 * x9,
        "f8": s8 + c * (4 * x3 * x6 - x2 ** 2 * x8 - 2 * x1 * x2 * x9 - x7 * x9),
        "f9": x6 * x7 - x8 * x9,
        "f10": x5 * x6 - x9 ** 2,
    }


def surface_relation(n: int, index: int = 1) -> MPoly:
    """u(v^2 - 4u^(n-2)) - w^2 in the index-th copy, over UVW."""
    u, v, w = (UVW.var(f"{s}{index}") for s in "uvw")
    return u * (v ** 2 - 4 * u ** (n - 2)) - w ** 2


# --------------------------------------------------------------------------
# Verifications


def verify_invariance(kind: str, n: int) -> VerificationReport:
    rep = VerificationReport("invariance", {"type": kind, "n": n})
    if kind == "D":
        rep.note(BD_ORDER_NOTE)
    gens = group_generators(kind, n)
    group = _closure(gens)
    rep.add("group_order", len(group) == expected_group_order(kind, n),
            f"closure has {len(group)} elements, expected {expected_group_order(kind, n)}")
    index = set(group)
    closed = all(h.compose(g) in index for g in group for h in gens)
    inverses = all(any(g.compose(h).is_identity() for h in group) for g in group[:64])
    rep.add("closure", closed and inverses, "composition leaves the enumerated set")
    normal = _closure(gens[:-1])
    rep.add("normal_subgroup_order", len(normal) == surface_group_order(kind, n) ** 2,
            f"{len(normal)} elements")
    gs = generator_set(kind, n)
    for name, p in gs.first_stage.items():
        bad = _first_violation(p, normal)
        rep.add(f"{name}_fixed_by_normal_subgroup", bad is None, bad)
    for name, p in gs.second_stage_ab.items():
        bad = _first_violation(p, group)
        rep.add(f"{name}_fixed_by_G", bad is None, bad)
    return rep


def _first_violation(p: MPoly, group: Sequence[GroupElement]) -> str | None:
    for g in group:
        img, why = g.act(p)
        if img is None:
            return f"{g.describe()}: {why}"
        if img != p:
            return f"{g.describe()}: image differs by {(img - p).to_text()[:200]}"
    return None


def verify_relations(kind: str, n: int) -> VerificationReport:
    rep = VerificationReport("relations", {"type": kind, "n": n})
    gs = generator_set(kind, n)
    for name, f in relations(kind, n).items():
        image = f.substitute(gs.second_stage_ab, AB)
        rep.add(f"{name}_vanishes", image.is_zero(), image.to_text()[:400])
    if kind == "D":
        for idx in (1, 2):
            img = surface_relation(n, idx).substitute(gs.first_stage, AB)
            rep.add(f"surface_relation_{idx}_vanishes", img.is_zero(), img.to_text()[:400])
    return rep


# --------------------------------------------------------------------------
# Charts


@dataclass(frozen=True)
class ChartPresentation:
    name: str
    registry: VarRegistry
    equations: tuple[MPoly, MPoly]
    substitution: dict[str, MPoly]


def _u5_substitution() -> dict[str, MPoly]:
    x1, x2, x3, x5, x7p, x9p = CHART5.gens()
    return {
        "x1": x1, "x2": x2, "x3": x3, "x5": x5,
        "x4": x5 * x7p ** 2, "x6": x5 * x9p ** 2, "x7": x5 * x7p, "x8": x5 * x7p * x9p, "x9": x5 * x9p,
    }


def _u4_substitution() -> dict[str, MPoly]:
    x1, x2, x3, x4, x7p, x8p = CHART4.gens()
    return {
        "x1": x1, "x2": x2, "x3": x3, "x4": x4,
        "x5": x4 * x7p ** 2, "x6": x4 * x8p ** 2, "x7": x4 * x7p, "x8": x4 * x8p, "x9": x4 * x7p * x8p,
    }


def chart_u5_equations(kind: str, n: int) -> tuple[MPoly, MPoly]:
    x1, x2, x3, x5, x7p, x9p = CHART5.gens()
    m = lambda coef, **e: _mono(CHART5, coef, **e)  # noqa: E731
    if kind == "A":
        top = (n + 1) // 2
        c = _pow2(n - 1)
        s1 = sum((m(binomial(n + 1, 2 * i), x2=n - 2 * i + 1, x5=i) for i in range(top + 1)), CHART5.zero())
        s2 = sum((m(binomial(n + 1, 2 * i + 1), x2=n - 2 * i, x5=i) for i in range(top + 1)), CHART5.zero())
        return (s1 - c * (x1 * x3 + x5 * x7p * x9p), s2 - c * (x1 * x9p + x3 * x7p))
    c = _pow2(n - 6)
    s1 = sum((m(binomial(n - 1, 2 * i), x1=n - 2 * i - 1, x5=i, x7p=2 * i) for i in range((n - 1) // 2 + 1)),
             CHART5.zero())
    s2 = sum((m(binomial(n - 1, 2 * i + 1), x1=n - 2 * i - 2, x5=i, x7p=2 * i + 1) for i in range(n // 2)),
             CHART5.zero())
    return (s1 + c * (-x1 * x2 ** 2 + 2 * x3 ** 2 - x1 * x5 + 2 * x5 * x9p ** 2 - 2 * x2 * x5 * x7p),
            s2 + c * (-2 * x1 * x2 - x2 ** 2 * x7p - x5 * x7p + 4 * x3 * x9p))


def chart_u4_equations(n: int) -> tuple[MPoly, MPoly]:
    """D-type U4 chart; the x5 of the printed first equation is read as x7'^2."""
    x1, x2, x3, x4, x7p, x8p = CHART4.gens()
    m = lambda coef, **e: _mono(CHART4, coef, **e)  # noqa: E731
    c = _pow2(n - 6)
    s1 = sum((m(binomial(n - 1, 2 * i), x1=n - 2 * i - 1, x4=i) for i in range((n - 1) // 2 + 1)), CHART4.zero())
    s2 = sum((m(binomial(n - 1, 2 * i + 1), x1=n - 2 * i - 2, x4=i) for i in range(n // 2)), CHART4.zero())
    return (s1 + c * (-x1 * x2 ** 2 + 2 * x3 ** 2 - x1 * x4 * x7p ** 2 + 2 * x4 * x8p ** 2 - 2 * x2 * x4 * x7p),
            s2 + c * (-2 * x1 * x2 * x7p - x2 ** 2 - x4 * x7p ** 2 + 4 * x3 * x8p))


def chart_u5(kind: str, n: int) -> ChartPresentation:
    if kind == "A" and n < 3:
        raise ValueError("the U5 chart is treated for n >= 3")
    _check_type(kind, n)
    return ChartPresentation(f"U5[{kind}{n}]", CHART5, chart_u5_equations(kind, n), _u5_substitution())


def chart_u4(n: int) -> ChartPresentation:
    if n < 5:
        raise ValueError("the U4 chart is treated for n >= 5")
    return ChartPresentation(f"U4[D{n}]", CHART4, chart_u4_equations(n), _u4_substitution())


def verify_chart_presentation(kind: str, n: int, chart: ChartPresentation,
                              budget: int = DEFAULT_BUDGET) -> VerificationReport:
    rep = VerificationReport("chart", {"type": kind, "n": n, "chart": chart.name.split("[")[0]})
    try:
        gb = groebner(Ideal(chart.equations), budget)
    except BudgetExceeded as exc:
        rep.add_budget("chart_groebner_basis", str(exc))
        return rep
    for name, f in relations(kind, n).items():
        pulled = f.substitute(chart.substitution, chart.registry)
        nf = reduce(pulled, gb)
        rep.add(f"{name}_pullback_in_chart_ideal", nf.is_zero(), nf.to_text()[:400])
    return rep


def verify_chart(kind: str, n: int, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """All relations pulled back into each chart lie in the chart ideal."""
    rep = VerificationReport("charts", {"type": kind, "n": n})
    charts = []
    if kind == "A" and n >= 3 or kind == "D":
        charts.append(chart_u5(kind, n))
    if kind == "D" and n >= 5:
        charts.append(chart_u4(n))
        rep.note("U4 first equation: the printed x1*x4*x5 term is read as x1*x4*x7'^2")
    if not charts:
        rep.note("no blow-up chart is treated at this n")
    for ch in charts:
        sub = verify_chart_presentation(kind, n, ch, budget)
        rep.extend(sub, prefix=ch.name.split("[")[0] + ":")
    return rep


def singular_locus_ideal(n: int) -> Ideal:
    x1, x2, x3, x5, x7p, x9p = CHART5.gens()
    return Ideal([x1 - x2 * x7p, x3 - x2 * x9p, x5 - x2 ** 2, x2 ** (n - 1) - x7p * x9p])


def jacobian_minors(eqs: Sequence[MPoly], registry: VarRegistry) -> list[tuple[str, MPoly]]:
    f, g = eqs
    out = []
    for a, b in itertools.combinations(registry.names, 2):
        minor = f.diff(a) * g.diff(b) - f.diff(b) * g.diff(a)
        out.append((f"{a},{b}", minor))
    return out


def verify_singular_locus(n: int, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    rep = VerificationReport("singular_locus", {"type": "A", "n": n})
    if n < 3:
        raise ValueError("singular locus is treated for n >= 3")
    eqs = chart_u5_equations("A", n)
    try:
        gb = groebner(singular_locus_ideal(n), budget)
    except BudgetExceeded as exc:
        rep.add_budget("locus_groebner_basis", str(exc))
        return rep
    for i, f in enumerate(eqs, 1):
        nf = reduce(f, gb)
        rep.add(f"f~{i}_vanishes_on_locus", nf.is_zero(), nf.to_text()[:400])
    minors = jacobian_minors(eqs, CHART5)
    bad = [(name, reduce(m, gb)) for name, m in minors]
    bad = [(name, nf) for name, nf in bad if not nf.is_zero()]
    rep.add(f"all_{len(minors)}_jacobian_minors_vanish_on_locus", not bad,
            "; ".join(f"{name}: {nf.to_text()[:120]}" for name, nf in bad[:3]))
    # The locus is the whole singular locus only if it has the expected dimension;
    # here we record that x2 parametrises it once x7'x9' = x2^(n-1) is solved.
    generic = {"x2": 1}
    spec = [g.substitute(generic) for g in singular_locus_ideal(n).generators]
    rep.add("locus_at_x2_equal_1_is_x7p_x9p_equal_1",
            spec[-1] == CHART5.parse("1 - x7p*x9p"), spec[-1].to_text())
    return rep


# --------------------------------------------------------------------------
# The blow-up recursion in the U5 chart


def recursion_f4_closed(n: int, reg: VarRegistry = CHART5, names: Mapping[str, str] | None = None) -> MPoly:
    """Closed form of the shifted second chart equation."""
    v = _vars(reg, names)
    t = v["x2"] ** (n - 1) - v["x7p"] * v["x9p"]
    s = reg.zero()
    for k in range(1, n // 2 + 1):
        s = s + _pow2(n - 2 * k) * binomial(n - k, k) * v["x2"] ** (n - 2 * k) * v["x5"] ** k
    return s - _pow2(n - 1) * (v["x1"] * v["x9p"] + v["x3"] * v["x7p"] - 2 * v["x2"] * t)


def recursion_f5_printed(n: int, reg: VarRegistry = CHART5, names: Mapping[str, str] | None = None) -> MPoly:
    """The combination f~3 - x2 f~4 exactly as displayed."""
    v = _vars(reg, names)
    t = v["x2"] ** (n - 1) - v["x7p"] * v["x9p"]
    s = reg.zero()
    for k in range(2, (n + 1) // 2 + 1):
        coef = _pow2(n - 2 * k + 1) * binomial(n - k, k - 1)
        if coef and n - 2 * k < 0:
            s = s + coef * v["x5"] ** k * _laurent_guard(n - 2 * k)
        elif coef:
            s = s + coef * v["x2"] ** (n - 2 * k) * v["x5"] ** k
    return s - _pow2(n - 1) * (v["x1"] * v["x3"] + v["x5"] * t)


def recursion_f5_closed(n: int, reg: VarRegistry = CHART5, names: Mapping[str, str] | None = None) -> MPoly:
    """Closed form of f~3 - x2 f~4 as it actually comes out of the substitution."""
    v = _vars(reg, names)
    t = v["x2"] ** (n - 1) - v["x7p"] * v["x9p"]
    s = reg.zero()
    for k in range(2, (n + 1) // 2 + 1):
        s = s + _pow2(n - 2 * k + 1) * binomial(n - k, k - 1) * v["x2"] ** (n - 2 * k + 1) * v["x5"] ** k
    return s - _pow2(n - 1) * (v["x1"] * v["x3"] - v["x5"] * t)


def _laurent_guard(k: int) -> MPoly:
    raise ValueError(f"displayed form calls for x2^{k}")


def _vars(reg: VarRegistry, names: Mapping[str, str] | None) -> dict[str, MPoly]:
    names = names or {}
    keys = ["x1", "x2", "x3", "x5", "x7p", "x9p"]
    return {k: reg.var(names.get(k, k)) for k in keys}


def recursion_g_printed(n: int) -> tuple[MPoly, MPoly]:
    x1, x2, x3, x5, x7p, x9p, _ = BLOWUP.gens()
    g1 = BLOWUP.zero()
    for k in range(2, (n + 1) // 2 + 1):
        g1 = g1 + _pow2(n - 2 * k + 1) * binomial(n - k - 1, k) * x2 ** (n - 2 * k + 1) * x5 ** (k - 1)
    g1 = g1 - _pow2(n - 1) * (x1 * x3 * x5 - x2 ** (n - 1) + x7p * x9p)
    g2 = BLOWUP.zero()
    for k in range(1, n // 2 + 1):
        g2 = g2 + _pow2(n - 2 * k) * binomial(n - k - 1, k - 1) * x2 ** (n - 2 * k) * x5 ** (k - 1)
    g2 = g2 - _pow2(n - 1) * (x1 * x9p + x3 * x7p - 2 * x1 * x2 * x3)
    return g1, g2


@dataclass
class RecursionData:
    n: int
    f3: MPoly
    f4: MPoly
    f5: MPoly
    g1: MPoly
    g2: MPoly
    h1: MPoly
    h2: MPoly


def _strip_power(p: MPoly, var: str) -> tuple[MPoly, int]:
    i = p.registry.index(var)
    k = min(e[i] for e in p.terms)
    out = {}
    for e, c in p.terms.items():
        f = list(e)
        f[i] -= k
        out[tuple(f)] = c
    return MPoly(p.registry, out), k


def recursion_pipeline(n: int) -> RecursionData:
    """Shift, blow up the singular locus in the x5 chart, eliminate t'', shift again."""
    f1, f2 = chart_u5_equations("A", n)
    x1, x2, x3, x5, x7p, x9p = CHART5.gens()
    shift = {"x1": x1 + x2 * x7p, "x3": x3 + x2 * x9p, "x5": x5 + x2 ** 2}
    f3 = f1.substitute(shift, CHART5)
    f4 = f2.substitute(shift, CHART5)
    f5 = f3 - x2 * f4

    B = BLOWUP
    y1, y2, y3, y5, y7, y9, tt = B.gens()
    relation = y7 * y9 - (y2 ** (n - 1) - tt * y5)
    rel_gb = Ideal([relation], block_order(B, ["x7p", "x9p"]), is_groebner=True)
    to_blowup = {"x1": y1 * y5, "x2": y2, "x3": y3 * y5, "x5": y5, "x7p": y7, "x9p": y9}

    def strict(p: MPoly) -> MPoly:
        q = reduce(p.substitute(to_blowup, B), rel_gb)
        return _strip_power(q, "x5")[0]

    s5 = strict(f5)
    s4 = strict(f4)
    if s5.degree("tpp") != 1:
        raise ValueError("strict transform is not linear in t''")
    lin = s5.diff("tpp")
    if not lin.is_constant():
        raise ValueError("t'' coefficient is not a constant")
    a = lin.constant_term()
    rest = s5 - a * tt
    t_solved = -rest / a
    elim = {"tpp": t_solved}
    chart_rel = (tt * y5 - y2 ** (n - 1) + y7 * y9).substitute(elim, B)
    g1 = -_pow2(n - 1) * chart_rel
    g2 = s4.substitute(elim, B)
    final = {"x7p": y7 + 2 * y1 * y2, "x9p": y9 + 2 * y2 * y3}
    h1 = (g1 - 2 * y2 * g2).substitute(final, B)
    h2 = g2.substitute(final, B)
    return RecursionData(n, f3, f4, f5, g1, g2, h1, h2)


_BLOWUP_NAMES = {"x1": "x1pp", "x3": "x3pp"}


def recursion_coordinate_change() -> dict[str, MPoly]:
    """Identification of the lower-rank chart inside the blow-up chart.

    The two pairs (x1, x3) and (x7', x9') trade places, each scaled by 2.
    """
    y1, y2, y3, y5, y7, y9, _ = BLOWUP.gens()
    return {"x1": 2 * y7, "x2": y2, "x3": 2 * y9, "x5": y5, "x7p": 2 * y1, "x9p": 2 * y3}


def recursion_targets(m: int) -> tuple[MPoly, MPoly]:
    """f~5 and f~4 at rank m, expressed in blow-up chart coordinates."""
    change = recursion_coordinate_change()
    return (recursion_f5_closed(m).substitute(change, BLOWUP),
            recursion_f4_closed(m).substitute(change, BLOWUP))


def verify_recursion(n: int) -> VerificationReport:
    rep = VerificationReport("recursion", {"type": "A", "n": n})
    if n < 3:
        raise ValueError("recursion is treated for n >= 3")
    d = recursion_pipeline(n)
    rep.add("f~4_matches_displayed_form", d.f4 == recursion_f4_closed(n),
            (d.f4 - recursion_f4_closed(n)).to_text()[:300])
    rep.add("f~5_matches_corrected_form", d.f5 == recursion_f5_closed(n),
            (d.f5 - recursion_f5_closed(n)).to_text()[:300])
    try:
        printed = recursion_f5_printed(n)
        same = d.f5 == printed
        rep.note(f"displayed f~5 {'agrees' if same else 'disagrees'} with the computed one"
                 + ("" if same else "; the corrected form has x2^(n-2k+1) and -x5*t"))
    except ValueError as exc:
        rep.note(f"displayed f~5 is not a polynomial at n={n}: {exc}")
    pg1, pg2 = recursion_g_printed(n)
    rep.add("g2_matches_displayed_form", d.g2 == pg2, (d.g2 - pg2).to_text()[:300])
    rep.note(f"displayed g1 {'agrees' if d.g1 == pg1 else 'disagrees'} with the eliminated chart equation")
    naive5 = recursion_f5_closed(n - 2, BLOWUP, _BLOWUP_NAMES)
    naive4 = recursion_f4_closed(n - 2, BLOWUP, _BLOWUP_NAMES)
    rep.note("with the identity renaming x1''->x1, x3''->x3 the match "
             + ("holds" if (d.h1, d.h2) == (naive5, naive4) else "fails")
             + "; the comparison uses x1=2x7', x3=2x9', x7'=2x1'', x9'=2x3''")
    target5, target4 = recursion_targets(n - 2)
    rep.add("g1-2x2g2_is_f~5_at_n-2", d.h1 == target5, f"residual {(d.h1 - target5).to_text()[:300]}")
    rep.add("g2_is_f~4_at_n-2", d.h2 == target4, f"residual {(d.h2 - target4).to_text()[:300]}")
    return rep


# --------------------------------------------------------------------------
# Stored E-type equations

E_REGISTRY = VarRegistry([f"x{i}" for i in range(1, 7)])

E_EQUATIONS_TEXT: dict[int, tuple[str, str]] = {
    6: ("x4*x5^3 + 2*x1^3 + 3*x2^2*x5 + 2*x1*x4 + 4*x3*x6",
        "x1^4 + 6*x2*x4*x5^2 + 2*x2^3 + 6*x1^2*x4 + 4*x4*x6^2 + 4*x3^2 + x4^2"),
    7: ("x1^3*x5 + 2*x4*x5^3 + 3*x1^2*x2 + 6*x2^2*x5 + 3*x1*x4*x5 + x2*x4 + 8*x3*x6",
        "x1^3*x2 + 3*x1^2*x4*x5 + 6*x2*x4*x5^2 + 2*x2^3 + 3*x1*x2*x4 + x4^2*x5 + 4*x4*x6^2 + 4*x3^2"),
    8: ("5*x1^4 + 4*x4*x5^3 + 10*x1^2*x4 + 12*x2^2*x5 + x4^2 + 16*x3*x6",
        "x1*x4*x5^3 - 10*x1^3*x4 + 3*x1*x2^2*x5 - 15*x2*x4*x5^2 - 5*x2^3 - 6*x1*x4^2"
        " + 4*x1*x3*x6 - 10*x4*x6^2 - 10*x3^2"),
}


def en_equations(n: int) -> tuple[MPoly, MPoly]:
    if n not in E_EQUATIONS_TEXT:
        raise ValueError(f"no stored equations for E{n}")
    a, b = E_EQUATIONS_TEXT[n]
    return E_REGISTRY.parse(a), E_REGISTRY.parse(b)


def verify_en_equations(n: int) -> VerificationReport:
    rep = VerificationReport("en_equations", {"type": "E", "n": n})
    eqs = en_equations(n)
    origin = {v: 0 for v in E_REGISTRY.names}
    for i, f in enumerate(eqs, 1):
        rep.add(f"eq{i}_min_degree_at_least_2", f.min_degree() >= 2, f"min degree {f.min_degree()}")
        grad = [f.diff(v).evaluate(origin) for v in E_REGISTRY.names]
        rep.add(f"eq{i}_gradient_vanishes_at_origin", all(g == 0 for g in grad), str(grad))
    if n == 7:
        rep.note("the token x_1^3x2 of the second equation is read as x1^3*x2")
    return rep


# --------------------------------------------------------------------------
# Optional: kernel completeness by elimination


def kernel_by_elimination(kind: str, n: int, budget: int = DEFAULT_BUDGET) -> Ideal:
    """Kernel of C[x] -> C[a, b] as an elimination ideal (slow; desk scale only)."""
    gs = generator_set(kind, n)
    reg = VarRegistry(AB.names + X.names)
    gens = [reg.var(name) - gs.second_stage_ab[name].embed(reg) for name in X.names]
    return elimination_ideal(Ideal(gens), AB.names, budget)


def verify_kernel(kind: str, n: int, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    rep = VerificationReport("kernel", {"type": kind, "n": n})
    try:
        ker = kernel_by_elimination(kind, n, budget)
    except BudgetExceeded as exc:
        rep.add_budget("elimination", str(exc))
        return rep
    reg = ker.registry
    rels = {k: v.embed(reg) for k, v in relations(kind, n).items()}
    order = block_order(reg, AB.names)
    gb = groebner(Ideal(list(rels.values()), order), budget)
    for i, g in enumerate(ker.generators):
        nf = reduce(g, gb)
        rep.add(f"kernel_generator_{i}_in_relation_ideal", nf.is_zero(), nf.to_text()[:200])
    return rep

