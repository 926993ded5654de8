"""Exact arithmetic kernel.

Everything here is exact: coefficients are :class:`fractions.Fraction`,
polynomials are sparse dictionaries keyed by dense exponent tuples, and the
Groebner engine is a plain Buchberger loop guarded by an S-polynomial budget.
"""

from __future__ import annotations

import ast
import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

DEFAULT_BUDGET = 100_000


class ExactAlgError(Exception):
    """Base class for kernel errors."""


class RegistryMismatch(ExactAlgError):
    """Operands live over different variable registries."""


class BudgetExceeded(ExactAlgError):
    """The S-polynomial reduction cap was hit before the basis closed."""

    def __init__(self, budget: int):
        super().__init__(f"S-polynomial budget of {budget} reductions exhausted")
        self.budget = budget


class NotInvertible(ExactAlgError):
    """A series whose constant coefficient is not a Laurent monomial."""


# --------------------------------------------------------------------------
# Variables


@dataclass(frozen=True)
class VarRegistry:
    """An ordered tuple of unique variable names."""

    names: tuple[str, ...]

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> "MPoly":
        i = self.index(name)
        e = [0] * len(self.names)
        e[i] = 1
        return MPoly(self, {tuple(e): Fraction(1)})

    def gens(self) -> tuple["MPoly", ...]:
        return tuple(self.var(n) for n in self.names)

    def const(self, c: Scalar) -> "MPoly":
        return MPoly.constant(self, c)

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return MPoly.constant(self, 1)

    def extend(self, *names: str) -> "VarRegistry":
        return VarRegistry(self.names + tuple(n for n in names if n not in self.names))

    def parse(self, text: str) -> "MPoly":
        return parse_poly(text, self)


# --------------------------------------------------------------------------
# Polynomials


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


class MPoly:
    """Sparse multivariate polynomial with rational coefficients.

    Instances are treated as immutable; every operation returns a new object.
    """

    __slots__ = ("registry", "terms", "_hash")

    def __init__(self, registry: VarRegistry, terms: Mapping[Exponent, Scalar] | None = None):
        self.registry = registry
        clean: dict[Exponent, Fraction] = {}
        width = len(registry)
        for e, c in (terms or {}).items():
            if c == 0:
                continue
            if len(e) != width or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e} for registry of size {width}")
            clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, registry: VarRegistry, terms: dict[Exponent, Fraction]) -> "MPoly":
        p = object.__new__(cls)
        p.registry = registry
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, registry: VarRegistry, c: Scalar) -> "MPoly":
        if c == 0:
            return cls._raw(registry, {})
        return cls._raw(registry, {(0,) * len(registry): Fraction(c)})

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other: object) -> "MPoly":
        if isinstance(other, MPoly):
            if other.registry is not self.registry and other.registry != self.registry:
                raise RegistryMismatch(f"{self.registry.names} vs {other.registry.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(self.registry, other)
        return NotImplemented  # type: ignore[return-value]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: object) -> "MPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(self.registry, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.registry, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> "MPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "MPoly":
        return (-self) + other

    def __mul__(self, other: object) -> "MPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if len(o.terms) == 1 and not any(next(iter(o.terms))):
            c = next(iter(o.terms.values()))
            return MPoly._raw(self.registry, {e: v * c for e, v in self.terms.items()})
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = _add_exp(e1, e2)
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MPoly._raw(self.registry, out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "MPoly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        inv = 1 / Fraction(other)
        return MPoly._raw(self.registry, {e: c * inv for e, c in self.terms.items()})

    def __pow__(self, k: int) -> "MPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a non-negative integer")
        result = self.registry.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.constant(self.registry, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.registry == other.registry and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.registry, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.registry.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> tuple[str, ...]:
        used = [any(e[i] for e in self.terms) for i in range(len(self.registry))]
        return tuple(n for n, u in zip(self.registry.names, used) if u)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.registry), Fraction(0))

    def coefficient(self, monomial: Mapping[str, int]) -> Fraction:
        e = [0] * len(self.registry)
        for n, k in monomial.items():
            e[self.registry.index(n)] = k
        return self.terms.get(tuple(e), Fraction(0))

    def diff(self, name: str) -> "MPoly":
        i = self.registry.index(name)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MPoly._raw(self.registry, out)

    # -- substitution -----------------------------------------------------

    def embed(self, registry: VarRegistry) -> "MPoly":
        """Re-express this polynomial over a registry containing its variables."""
        if registry == self.registry:
            return self
        pos = [registry.index(n) for n in self.registry.names]
        width = len(registry)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            f = [0] * width
            for i, k in zip(pos, e):
                f[i] += k
            out[tuple(f)] = c
        return MPoly._raw(registry, out)

    def substitute(self, bindings: Mapping[str, "MPoly | Scalar"],
                   target: VarRegistry | None = None) -> "MPoly":
        """Replace variables by polynomials; unbound variables pass through.

        The result lives over ``target`` (default: the registry of the bound
        values, or this registry when every value is a scalar).
        """
        for name in bindings:
            self.registry.index(name)
        if target is None:
            regs = [v.registry for v in bindings.values() if isinstance(v, MPoly)]
            target = regs[0] if regs else self.registry
        images: list[MPoly] = []
        for name in self.registry.names:
            if name in bindings:
                v = bindings[name]
                v = v if isinstance(v, MPoly) else MPoly.constant(target, v)
                if v.registry != target:
                    raise RegistryMismatch(f"binding for {name} lives over another registry")
                images.append(v)
            else:
                images.append(target.var(name))
        cache: dict[tuple[int, int], MPoly] = {}

        def power(i: int, k: int) -> MPoly:
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        result: dict[Exponent, Fraction] = {}
        one = target.one()
        for e, c in self.terms.items():
            term = one
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for f, d in term.terms.items():
                v = result.get(f, 0) + c * d
                if v:
                    result[f] = v
                else:
                    result.pop(f, None)
        return MPoly._raw(target, result)

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at rational values for every variable that occurs."""
        vals = [Fraction(values[n]) if n in values else None for n in self.registry.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    if v is None:
                        raise KeyError("evaluate needs values for every occurring variable")
                    t *= v ** k
            total += t
        return total

    # -- rendering --------------------------------------------------------

    def sorted_terms(self, order: "MonomialOrder | None" = None) -> list[tuple[Exponent, Fraction]]:
        order = order or grevlex(self.registry)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_text(self) -> str:
        """Render as ``coef*var^e*...`` terms joined by their signs."""
        if not self.terms:
            return "0"
        parts: list[str] = []
        for e, c in self.sorted_terms():
            factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(self.registry.names, e) if k]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign if parts or c < 0 else "") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self.to_text()})"

    __str__ = to_text


def poly_arith(op: str, operands: Sequence[MPoly | Scalar], exponent: int | None = None) -> MPoly:
    """Dispatch ``add``, ``mul``, ``neg`` or ``pow`` over a list of operands."""
    polys = [p for p in operands if isinstance(p, MPoly)]
    if not polys:
        raise ValueError("poly_arith needs at least one polynomial operand")
    reg = polys[0].registry
    items = [p if isinstance(p, MPoly) else MPoly.constant(reg, p) for p in operands]
    if op == "add":
        return sum(items[1:], items[0])
    if op == "mul":
        out = items[0]
        for p in items[1:]:
            out = out * p
        return out
    if op == "neg":
        (p,) = items
        return -p
    if op == "pow":
        (p,) = items
        if exponent is None:
            raise ValueError("pow needs an exponent")
        return p ** exponent
    raise ValueError(f"unknown op {op!r}")


def substitute(p: MPoly, bindings: Mapping[str, MPoly | Scalar],
               target: VarRegistry | None = None) -> MPoly:
    return p.substitute(bindings, target)


# --------------------------------------------------------------------------
# Parsing


def parse_poly(text: str, registry: VarRegistry) -> MPoly:
    """Parse an arithmetic expression in the registry's variables.

    Accepts ``+ - * / ^ **``, parentheses, integer literals and names.
    Division is only allowed by a constant.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def walk(node: ast.AST) -> MPoly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return registry.const(node.value)
        if isinstance(node, ast.Name):
            return registry.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                right = walk(node.right)
                if not right.is_constant() or right.constant_term().denominator != 1:
                    raise ValueError("exponent must be an integer constant")
                return left ** int(right.constant_term())
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise ValueError("division only by a nonzero constant")
                return left / right.constant_term()
        raise ValueError(f"unsupported syntax in {text!r}")

    return walk(tree)


# --------------------------------------------------------------------------
# Cyclotomic scalars


@dataclass(frozen=True, order=True)
class CycScalar:
    """The power zeta^exponent of a fixed primitive M-th root of unity."""

    exponent: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus <= 0:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    def __mul__(self, other: "CycScalar") -> "CycScalar":
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")
        return CycScalar(self.exponent + other.exponent, self.modulus)

    def __pow__(self, k: int) -> "CycScalar":
        return CycScalar(self.exponent * k, self.modulus)

    def inverse(self) -> "CycScalar":
        return CycScalar(-self.exponent, self.modulus)

    def is_one(self) -> bool:
        return self.exponent == 0

    def rational_value(self) -> Fraction | None:
        """Return 1 or -1 when zeta^exponent is rational, else ``None``."""
        if self.exponent == 0:
            return Fraction(1)
        if 2 * self.exponent == self.modulus:
            return Fraction(-1)
        return None


# --------------------------------------------------------------------------
# Monomial orders


class MonomialOrder:
    """A monomial order given by a flat integer sort key (bigger is bigger)."""

    def __init__(self, tag: str, registry: VarRegistry, key: Callable[[Exponent], tuple[int, ...]],
                 eliminate: tuple[str, ...] = ()):
        self.tag = tag
        self.registry = registry
        self.key = key
        self.eliminate = eliminate

    def __repr__(self) -> str:
        return f"MonomialOrder({self.tag})"


def _grevlex_key(e: Sequence[int]) -> tuple[int, ...]:
    return (sum(e),) + tuple(-x for x in reversed(e))


def grevlex(registry: VarRegistry) -> MonomialOrder:
    return MonomialOrder("grevlex", registry, _grevlex_key)


def lex(registry: VarRegistry) -> MonomialOrder:
    return MonomialOrder("lex", registry, tuple)


def block_order(registry: VarRegistry, eliminate: Sequence[str]) -> MonomialOrder:
    """Grevlex on ``eliminate`` first, ties broken by grevlex on the rest."""
    elim = [registry.index(n) for n in eliminate]
    rest = [i for i in range(len(registry)) if i not in elim]

    def key(e: Exponent) -> tuple[int, ...]:
        return _grevlex_key([e[i] for i in elim]) + _grevlex_key([e[i] for i in rest])

    return MonomialOrder("block", registry, key, tuple(eliminate))


# --------------------------------------------------------------------------
# Ideals and Buchberger


class Ideal:
    """Generators plus the monomial order they are to be read in."""

    def __init__(self, generators: Iterable[MPoly], order: MonomialOrder | None = None,
                 is_groebner: bool = False):
        gens = [g for g in generators if not g.is_zero()]
        if not gens and order is None:
            raise ValueError("an empty generator list needs an explicit order")
        reg = gens[0].registry if gens else order.registry
        for g in gens:
            if g.registry != reg:
                raise RegistryMismatch("generators must share one registry")
        self.registry = reg
        self.generators = tuple(gens)
        self.order = order or grevlex(reg)
        self.is_groebner = is_groebner

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[MPoly]:
        return iter(self.generators)


class _Basis:
    """A Groebner basis element: leading exponent, and the tail terms."""

    __slots__ = ("lead", "tail", "poly")

    def __init__(self, poly: dict[Exponent, Fraction], order: MonomialOrder):
        lead = max(poly, key=order.key)
        lc = poly[lead]
        self.lead = lead
        self.poly = {e: c / lc for e, c in poly.items()}
        self.tail = [(e, c) for e, c in self.poly.items() if e != lead]


def _neg_key(order: MonomialOrder, e: Exponent) -> tuple[int, ...]:
    return tuple(-x for x in order.key(e))


def _normal_form(poly: Mapping[Exponent, Fraction], basis: Sequence[_Basis],
                 order: MonomialOrder) -> dict[Exponent, Fraction]:
    work = dict(poly)
    heap = [(_neg_key(order, e), e) for e in work]
    heapq.heapify(heap)
    rem: dict[Exponent, Fraction] = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if c is None:
            continue
        for b in basis:
            if _divides(b.lead, e):
                shift = tuple(x - y for x, y in zip(e, b.lead))
                for te, tc in b.tail:
                    ne = _add_exp(te, shift)
                    old = work.get(ne)
                    if old is None:
                        work[ne] = -c * tc
                        heapq.heappush(heap, (_neg_key(order, ne), ne))
                    else:
                        v = old - c * tc
                        if v:
                            work[ne] = v
                        else:
                            del work[ne]
                break
        else:
            rem[e] = c
    return rem


def _spoly(f: _Basis, g: _Basis) -> dict[Exponent, Fraction]:
    lcm = tuple(max(a, b) for a, b in zip(f.lead, g.lead))
    sf = tuple(x - y for x, y in zip(lcm, f.lead))
    sg = tuple(x - y for x, y in zip(lcm, g.lead))
    out: dict[Exponent, Fraction] = {}
    for e, c in f.tail:
        out[_add_exp(e, sf)] = c
    for e, c in g.tail:
        k = _add_exp(e, sg)
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def groebner(ideal: Ideal, budget: int = DEFAULT_BUDGET) -> Ideal:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs with coprime leading monomials are skipped; every other S-polynomial
    reduction counts against ``budget`` and :class:`BudgetExceeded` is raised
    once the cap is reached.
    """
    order = ideal.order
    basis: list[_Basis] = []
    pairs: list[tuple[tuple[int, ...], int, int, int]] = []
    counter = itertools.count()

    def add(poly: dict[Exponent, Fraction]) -> None:
        b = _Basis(poly, order)
        j = len(basis)
        basis.append(b)
        for i in range(j):
            a = basis[i]
            if all(x == 0 or y == 0 for x, y in zip(a.lead, b.lead)):
                continue
            lcm = tuple(max(x, y) for x, y in zip(a.lead, b.lead))
            heapq.heappush(pairs, (order.key(lcm), next(counter), i, j))

    for g in ideal.generators:
        r = _normal_form(g.terms, basis, order)
        if r:
            add(r)
    spent = 0
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if spent >= budget:
            raise BudgetExceeded(budget)
        spent += 1
        s = _spoly(basis[i], basis[j])
        r = _normal_form(s, basis, order)
        if r:
            add(r)
    return Ideal(_interreduce(basis, order, ideal.registry), order, is_groebner=True)


def _interreduce(basis: list[_Basis], order: MonomialOrder, reg: VarRegistry) -> list[MPoly]:
    minimal: list[_Basis] = []
    for b in sorted(basis, key=lambda b: order.key(b.lead)):
        if not any(_divides(m.lead, b.lead) for m in minimal):
            minimal.append(b)
    reduced: list[MPoly] = []
    for k, b in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        tail = _normal_form(dict(b.tail), others, order)
        tail[b.lead] = Fraction(1)
        reduced.append(MPoly._raw(reg, tail))
    reduced.sort(key=lambda p: order.key(max(p.terms, key=order.key)), reverse=True)
    return reduced


def reduce(p: MPoly, gb: Ideal) -> MPoly:
    """Normal form of ``p`` modulo a Groebner basis."""
    if p.registry != gb.registry:
        raise RegistryMismatch("polynomial and basis live over different registries")
    basis = [_Basis(g.terms, gb.order) for g in gb.generators]
    return MPoly._raw(p.registry, _normal_form(p.terms, basis, gb.order))


def leading_exponent(p: MPoly, order: MonomialOrder | None = None) -> Exponent:
    order = order or grevlex(p.registry)
    return max(p.terms, key=order.key)


def contains(ideal: Ideal, p: MPoly, budget: int = DEFAULT_BUDGET) -> bool:
    gb = ideal if ideal.is_groebner else groebner(ideal, budget)
    return reduce(p, gb).is_zero()


def elimination_ideal(ideal: Ideal, eliminate: Sequence[str], budget: int = DEFAULT_BUDGET) -> Ideal:
    """Groebner basis of the ideal intersected with the ring without ``eliminate``.

    The result keeps the original registry but only involves surviving
    variables; it is itself a Groebner basis for the block order.
    """
    order = block_order(ideal.registry, eliminate)
    gb = groebner(Ideal(ideal.generators, order), budget)
    idx = [ideal.registry.index(n) for n in eliminate]
    kept = [g for g in gb.generators if all(e[i] == 0 for e in g.terms for i in idx)]
    return Ideal(kept, order, is_groebner=True)


# --------------------------------------------------------------------------
# Matrices


class SymbolicMatrix:
    """A square matrix of polynomials over one registry."""

    def __init__(self, rows: Sequence[Sequence[MPoly | Scalar]], registry: VarRegistry | None = None):
        if registry is None:
            for row in rows:
                for x in row:
                    if isinstance(x, MPoly):
                        registry = x.registry
                        break
                if registry is not None:
                    break
        if registry is None:
            raise ValueError("cannot infer a registry from a scalar matrix")
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.registry = registry
        self.dim = n
        self.rows = tuple(
            tuple(x if isinstance(x, MPoly) else MPoly.constant(registry, x) for x in r) for r in rows
        )
        for r in self.rows:
            for x in r:
                if x.registry != registry:
                    raise RegistryMismatch("entries must share one registry")

    def __getitem__(self, ij: tuple[int, int]) -> MPoly:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        n = self.dim
        z = self.registry.zero()
        return SymbolicMatrix(
            [[sum((self.rows[i][k] * other.rows[k][j] for k in range(n)), z) for j in range(n)]
             for i in range(n)],
            self.registry,
        )

    def __add__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        return SymbolicMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                              self.registry)

    def __sub__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        return SymbolicMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                              self.registry)

    def scale(self, c: MPoly | Scalar) -> "SymbolicMatrix":
        return SymbolicMatrix([[a * c for a in r] for r in self.rows], self.registry)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolicMatrix) and self.rows == other.rows

    def trace(self) -> MPoly:
        return sum((self.rows[i][i] for i in range(self.dim)), self.registry.zero())

    def embed(self, registry: VarRegistry) -> "SymbolicMatrix":
        return SymbolicMatrix([[a.embed(registry) for a in r] for r in self.rows], registry)

    def substitute(self, bindings: Mapping[str, MPoly | Scalar], target: VarRegistry | None = None
                   ) -> "SymbolicMatrix":
        rows = [[a.substitute(bindings, target) for a in r] for r in self.rows]
        return SymbolicMatrix(rows, rows[0][0].registry)

    def det(self) -> MPoly:
        """Laplace expansion along rows, memoised on column subsets."""
        n = self.dim
        memo: dict[tuple[int, ...], MPoly] = {}

        def minor(row: int, cols: tuple[int, ...]) -> MPoly:
            if row == n:
                return self.registry.one()
            if cols in memo:
                return memo[cols]
            total = self.registry.zero()
            for k, c in enumerate(cols):
                a = self.rows[row][c]
                if a.is_zero():
                    continue
                term = a * minor(row + 1, cols[:k] + cols[k + 1:])
                total = total + term if k % 2 == 0 else total - term
            memo[cols] = total
            return total

        return minor(0, tuple(range(n)))

    @classmethod
    def identity(cls, registry: VarRegistry, n: int) -> "SymbolicMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], registry)


def char_poly(m: SymbolicMatrix, var: str = "lam") -> MPoly:
    """det(var*I - m) over the registry extended by a fresh variable."""
    if var in m.registry:
        raise ValueError(f"{var!r} is not fresh")
    reg = m.registry.extend(var)
    lam = reg.var(var)
    shifted = SymbolicMatrix(
        [[(lam if i == j else 0) - m.rows[i][j].embed(reg) for j in range(m.dim)] for i in range(m.dim)],
        reg,
    )
    return shifted.det()


def rational_det(rows: Sequence[Sequence[Scalar]]) -> Fraction:
    """Determinant of a rational matrix by Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


# --------------------------------------------------------------------------
# Truncated Laurent series


class TruncSeries:
    """Power series in a small variable, truncated above a fixed order.

    Coefficients are polynomials in the remaining variables that may carry
    negative powers of one designated pole variable.  Terms whose small-variable
    degree exceeds ``order`` are discarded.
    """

    __slots__ = ("registry", "small", "pole", "order", "terms")

    def __init__(self, registry: VarRegistry, small: str, pole: str | None, order: int,
                 terms: Mapping[Exponent, Scalar] | None = None):
        self.registry = registry
        self.small = registry.index(small)
        self.pole = registry.index(pole) if pole is not None else None
        self.order = order
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            if c == 0 or e[self.small] > order:
                continue
            for i, k in enumerate(e):
                if k < 0 and i != self.pole:
                    raise ValueError("negative exponent outside the pole variable")
            clean[tuple(e)] = Fraction(c)
        self.terms = clean

    @classmethod
    def from_poly(cls, p: MPoly, small: str, pole: str | None, order: int) -> "TruncSeries":
        return cls(p.registry, small, pole, order, p.terms)

    def _like(self, terms: Mapping[Exponent, Scalar], order: int | None = None) -> "TruncSeries":
        s = object.__new__(TruncSeries)
        s.registry, s.small, s.pole = self.registry, self.small, self.pole
        s.order = self.order if order is None else order
        s.terms = {e: Fraction(c) for e, c in terms.items() if c != 0 and e[self.small] <= s.order}
        return s

    def _check(self, other: "TruncSeries") -> int:
        if other.registry != self.registry or other.small != self.small or other.pole != self.pole:
            raise RegistryMismatch("series live over different variables")
        return min(self.order, other.order)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        order = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._like(out, order)

    def __neg__(self) -> "TruncSeries":
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries | Scalar") -> "TruncSeries":
        if isinstance(other, (int, Fraction)):
            return self._like({e: c * other for e, c in self.terms.items()})
        order = self._check(other)
        out: dict[Exponent, Fraction] = {}
        s = self.small
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                if e1[s] + e2[s] > order:
                    continue
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return self._like(out, order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.registry == other.registry and self.small == other.small
                and self.order == other.order and self.terms == other.terms)

    def truncate(self, order: int) -> "TruncSeries":
        return self._like(self.terms, min(order, self.order))

    def coefficient(self, k: int) -> dict[Exponent, Fraction]:
        """Terms of small-variable degree ``k`` (exponent vectors kept whole)."""
        return {e: c for e, c in self.terms.items() if e[self.small] == k}

    def pole_depth(self) -> int:
        if self.pole is None:
            return 0
        return max((-e[self.pole] for e in self.terms), default=0) if self.terms else 0

    def is_one(self) -> bool:
        return self.terms == {(0,) * len(self.registry): Fraction(1)}

    def invert(self) -> "TruncSeries":
        """Inverse, provided the degree-0 part is a monomial in the pole variable."""
        c0 = self.coefficient(0)
        if len(c0) != 1:
            raise NotInvertible("constant coefficient is not a single monomial")
        (e0, a0), = c0.items()
        if any(k for i, k in enumerate(e0) if i != self.pole):
            raise NotInvertible("constant coefficient involves non-pole variables")
        inv0 = self._like({tuple(-k for k in e0): 1 / a0})
        rest = self._like({e: c for e, c in self.terms.items() if e[self.small] > 0})
        r = rest * inv0
        total = self._like({(0,) * len(self.registry): 1})
        power = total
        for _ in range(self.order):
            power = -(power * r)
            total = total + power
        return total * inv0

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self.registry.names
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (t[0][self.small], tuple(-x for x in t[0]))):
            fac = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
            body = "*".join(([str(abs(c))] if abs(c) != 1 or not fac else []) + fac)
            parts.append(("-" if c < 0 else "+" if parts else "") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"TruncSeries({self.to_text()}, order={self.order})"


def series_ops(op: str, operands: Sequence[TruncSeries], order: int | None = None) -> TruncSeries:
    """Dispatch ``mul``, ``invert`` or ``truncate``."""
    if op == "mul":
        out = operands[0]
        for s in operands[1:]:
            out = out * s
        return out
    if op == "invert":
        (s,) = operands
        return s.invert()
    if op == "truncate":
        (s,) = operands
        if order is None:
            raise ValueError("truncate needs an order")
        return s.truncate(order)
    raise ValueError(f"unknown op {op!r}")


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)
