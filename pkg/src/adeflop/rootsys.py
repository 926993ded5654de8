"""Simply-laced root systems with a fixed labeling of the Dynkin diagram.

Labelings:

* ``A_n``: the path 1-2-...-n.
* ``D_n``: leaves 1 and 2 hang off vertex 3, then the chain 3-4-...-n.
* ``E_n``: the D_5 graph on 1..5, then 6 attached to 2, 7 to 6 and 8 to 7.
  This labeling is derived, not read off a figure.

Positive roots are coefficient tuples over the simple roots.  They are
ordered by comparing coefficients from the highest vertex index downwards.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

PosRoot = tuple[int, ...]
ClassVector = tuple[int, ...]

DERIVED_LABELING = {"A": False, "D": False, "E": True}


class UnsupportedRootSystem(ValueError):
    pass


def _edges(kind: str, n: int) -> list[tuple[int, int]]:
    if kind == "A":
        if n < 1:
            raise UnsupportedRootSystem(f"A_{n}")
        return [(i, i + 1) for i in range(1, n)]
    if kind == "D":
        if n < 4:
            raise UnsupportedRootSystem(f"D_{n}")
        return [(1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n)]
    if kind == "E":
        if n not in (6, 7, 8):
            raise UnsupportedRootSystem(f"E_{n}")
        full = [(1, 3), (2, 3), (3, 4), (4, 5), (2, 6), (6, 7), (7, 8)]
        return [(a, b) for a, b in full if b <= n]
    raise UnsupportedRootSystem(kind)


@dataclass(frozen=True)
class RootSystem:
    kind: str
    n: int
    edges: tuple[tuple[int, int], ...]
    cartan: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.n}"

    @property
    def derived_labeling(self) -> bool:
        return DERIVED_LABELING[self.kind]

    def adjacency(self) -> list[list[int]]:
        return [[0 if i == j else -self.cartan[i][j] for j in range(self.n)] for i in range(self.n)]

    def neighbors(self, v: int) -> list[int]:
        """Neighbours of the 1-based vertex ``v``."""
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def simple_root(self, i: int) -> PosRoot:
        return tuple(1 if j == i - 1 else 0 for j in range(self.n))

    def cartan_pairing(self, alpha: PosRoot, i: int) -> int:
        """Pairing of ``alpha`` with the simple root of 1-based index ``i``."""
        return sum(c * self.cartan[j][i - 1] for j, c in enumerate(alpha))

    def form(self, alpha: PosRoot, beta: PosRoot) -> int:
        return sum(a * self.cartan[i][j] * b
                   for i, a in enumerate(alpha) if a
                   for j, b in enumerate(beta) if b)


@functools.lru_cache(maxsize=None)
def build(kind: str, n: int) -> RootSystem:
    edges = tuple(_edges(kind, n))
    cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        cartan[a - 1][b - 1] = cartan[b - 1][a - 1] = -1
    return RootSystem(kind, n, edges, tuple(tuple(r) for r in cartan))


def order_key(alpha: PosRoot) -> tuple[int, ...]:
    """Sort key for the root order: reversed coefficient tuple, compared lexicographically."""
    return tuple(reversed(alpha))


def root_less(alpha: PosRoot, beta: PosRoot) -> bool:
    """True when some j has alpha_j < beta_j and alpha_k = beta_k for all k > j."""
    for a, b in zip(reversed(alpha), reversed(beta)):
        if a != b:
            return a < b
    return False


@functools.lru_cache(maxsize=None)
def positive_roots(rs: RootSystem) -> tuple[PosRoot, ...]:
    """Closure of the simple roots under adding a simple root with negative pairing."""
    found = {rs.simple_root(i) for i in range(1, rs.n + 1)}
    frontier = list(found)
    while frontier:
        nxt = []
        for alpha in frontier:
            for i in range(1, rs.n + 1):
                if alpha == rs.simple_root(i):
                    continue
                if rs.cartan_pairing(alpha, i) < 0:
                    beta = tuple(c + (1 if j == i - 1 else 0) for j, c in enumerate(alpha))
                    if beta not in found:
                        found.add(beta)
                        nxt.append(beta)
        frontier = nxt
    return tuple(sorted(found, key=order_key))


def positive_roots_ordered(rs: RootSystem) -> list[PosRoot]:
    return list(positive_roots(rs))


def highest_root(rs: RootSystem) -> PosRoot:
    return positive_roots(rs)[-1]


def reflect(rs: RootSystem, alpha: PosRoot, i: int) -> tuple[int, ...]:
    p = rs.cartan_pairing(alpha, i)
    return tuple(c - (p if j == i - 1 else 0) for j, c in enumerate(alpha))


def expected_count(kind: str, n: int) -> int:
    if kind == "A":
        return n * (n + 1) // 2
    if kind == "D":
        return n * (n - 1)
    return {6: 36, 7: 63, 8: 120}[n]


# --------------------------------------------------------------------------
# Curve classes and the divisor pairing


@dataclass(frozen=True)
class PairingForm:
    """(E_k . e_m) for k, m in 0..n, equal to -(A_1 + Cartan)."""

    matrix: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.matrix)


def pairing_form(rs: RootSystem) -> PairingForm:
    n = rs.n
    m = [[0] * (n + 1) for _ in range(n + 1)]
    m[0][0] = -2
    for i in range(n):
        for j in range(n):
            m[i + 1][j + 1] = -rs.cartan[i][j]
    return PairingForm(tuple(tuple(r) for r in m))


def pairing(form: PairingForm, k: int, v: ClassVector) -> int:
    if not 0 <= k < form.size:
        raise IndexError(f"divisor index {k} out of range 0..{form.size - 1}")
    if len(v) != form.size:
        raise ValueError("class vector has the wrong length")
    return sum(a * b for a, b in zip(form.matrix[k], v))


def e0_minus(alpha: PosRoot) -> ClassVector:
    return (1,) + tuple(-c for c in alpha)


def wall_classes(rs: RootSystem) -> list[ClassVector]:
    return [e0_minus(a) for a in positive_roots(rs)]


def interval_root(n: int, i: int, j: int) -> PosRoot:
    """e_i + ... + e_j in type A_n."""
    return tuple(1 if i <= k + 1 <= j else 0 for k in range(n))


def format_root(alpha: PosRoot) -> str:
    return "(" + ",".join(map(str, alpha)) + ")"
