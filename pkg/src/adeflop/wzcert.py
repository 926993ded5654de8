"""Two binomial sum identities and their Wilf-Zeilberger certificates.

``eq21``: sum_{i=k}^{floor((n+1)/2)} C(n+1, 2i) C(i, k)
``eq22``: sum_{i=k}^{floor(n/2)}     C(n+1, 2i+1) C(i, k) = 2^(n-2k) C(n-k, k)

For ``eq21`` two closed forms are carried: the printed
2^(n-2k) n/(n-k) C(n-k+1, k), which fails at (3, 1), and the corrected
2^(n-2k) (n+1)/(n+1-k) C(n+1-k, k).

Certificates follow the usual WZ layout with the roles of the letters
swapped: ``i`` is the fixed parameter and ``k`` the summation index.  The
rational multiplier R is written in terms of N = n + 1, the top argument of
the first binomial, so the pair is F(N, k) = C(N, 2k [+1]) C(k, i) / RHS(N-1, i)
and G = F R.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exactalg import binomial
from .report import VerificationReport

IDS = ("eq21", "eq22")


def _upper(ident: str, n: int) -> int:
    return (n + 1) // 2 if ident == "eq21" else n // 2


def summand(ident: str, n: int, k: int, i: int) -> int:
    if ident == "eq21":
        return binomial(n + 1, 2 * i) * binomial(i, k)
    if ident == "eq22":
        return binomial(n + 1, 2 * i + 1) * binomial(i, k)
    raise ValueError(f"unknown identity {ident!r}")


def sum_lhs(ident: str, n: int, k: int) -> Fraction:
    return Fraction(sum(summand(ident, n, k, i) for i in range(k, _upper(ident, n) + 1)))


def rhs_printed(ident: str, n: int, k: int) -> Fraction | None:
    """Printed closed form; ``None`` where it is undefined (division by zero)."""
    if ident == "eq22":
        return Fraction(2) ** (n - 2 * k) * binomial(n - k, k)
    if n == k:
        return None
    return Fraction(2) ** (n - 2 * k) * Fraction(n, n - k) * binomial(n - k + 1, k)


def rhs_corrected(ident: str, n: int, k: int) -> Fraction | None:
    if ident == "eq22":
        return rhs_printed(ident, n, k)
    if n + 1 == k:
        return None
    return Fraction(2) ** (n - 2 * k) * Fraction(n + 1, n + 1 - k) * binomial(n + 1 - k, k)


def admissible_k(ident: str, n: int) -> range:
    return range(0, _upper(ident, n) + 1)


def verify_identity(ident: str, n_max: int) -> VerificationReport:
    rep = VerificationReport("wz_identity", {"id": ident, "nmax": n_max})
    failures_printed: list[str] = []
    failures_corrected: list[str] = []
    undefined: list[str] = []
    points = 0
    for n in range(1, n_max + 1):
        for k in admissible_k(ident, n):
            points += 1
            lhs = sum_lhs(ident, n, k)
            corr = rhs_corrected(ident, n, k)
            if lhs != corr:
                failures_corrected.append(f"(n={n},k={k}): lhs {lhs} vs {corr}")
            pr = rhs_printed(ident, n, k)
            if pr is None:
                undefined.append(f"(n={n},k={k})")
            elif lhs != pr:
                failures_printed.append(f"(n={n},k={k}): lhs {lhs} vs printed {pr}")
    rep.params["points"] = points
    if ident == "eq22":
        rep.add("printed_form_holds", not failures_printed, "; ".join(failures_printed[:10]))
    else:
        rep.add("corrected_form_holds", not failures_corrected, "; ".join(failures_corrected[:10]))
        if n_max >= 3:
            lhs, pr = sum_lhs("eq21", 3, 1), rhs_printed("eq21", 3, 1)
            rep.add("printed_form_fails_at_3_1", lhs == 8 and pr == 9, f"lhs {lhs}, printed {pr}")
        rep.note(f"printed form fails at {len(failures_printed)} of {points} points"
                 + (f", first: {failures_printed[0]}" if failures_printed else ""))
        if undefined:
            rep.note("printed form undefined (n = k) at " + ", ".join(undefined))
        rep.params["printed_failures"] = len(failures_printed)
    return rep


def discrepancy_table(n_max: int) -> list[dict[str, str]]:
    """Per-point comparison for eq21 where the printed form is off."""
    rows = []
    for n in range(1, n_max + 1):
        for k in admissible_k("eq21", n):
            lhs = sum_lhs("eq21", n, k)
            pr = rhs_printed("eq21", n, k)
            if pr != lhs:
                rows.append({"n": str(n), "k": str(k), "lhs": str(lhs),
                             "printed": "undefined" if pr is None else str(pr),
                             "corrected": str(rhs_corrected("eq21", n, k))})
    return rows


# --------------------------------------------------------------------------
# Certificates


class Pole(ArithmeticError):
    pass


@dataclass(frozen=True)
class WZCertificate:
    ident: str
    normalisation: Callable[[int, int], Fraction | None]

    def R(self, N: int, k: int, i: int) -> Fraction:
        if self.ident == "eq21":
            num, den = (i - k) * (2 * k - 1), (N - i) * (N - 2 * k + 1)
        else:
            num, den = (i - k) * (2 * k + 1), (N - i) * (N - 2 * k)
        if den == 0:
            raise Pole(f"R({N},{k}) with i={i}")
        return Fraction(num, den)

    def F(self, N: int, k: int, i: int) -> Fraction:
        norm = self.normalisation(N - 1, i)
        if not norm:
            raise Pole(f"normalisation vanishes at n={N - 1}, i={i}")
        return summand(self.ident, N - 1, i, k) / norm

    def G(self, N: int, k: int, i: int) -> Fraction:
        return self.F(N, k, i) * self.R(N, k, i)


def certificate(ident: str, corrected: bool = True) -> WZCertificate:
    norm = (lambda n, i: rhs_corrected(ident, n, i)) if corrected else (lambda n, i: rhs_printed(ident, n, i))
    return WZCertificate(ident, norm)


@dataclass
class CertificateResult:
    holds: int
    failed: list[tuple[int, int, int]]
    poles: list[tuple[int, int, int]]
    sums_ok: bool


def check_certificate(cert: WZCertificate, n_max: int) -> CertificateResult:
    holds = 0
    failed: list[tuple[int, int, int]] = []
    poles: list[tuple[int, int, int]] = []
    sums_ok = True
    for N in range(1, n_max + 1):
        for i in range(0, N + 1):
            try:
                cert.F(N, 0, i)
                cert.F(N + 1, 0, i)
            except Pole:
                continue
            ks = range(-2, N + 3)
            total = sum((cert.F(N, k, i) for k in ks), Fraction(0))
            if total != 1:
                sums_ok = False
            for k in ks:
                try:
                    lhs = cert.F(N + 1, k, i) - cert.F(N, k, i)
                    rhs = cert.G(N, k + 1, i) - cert.G(N, k, i)
                except Pole:
                    poles.append((N, k, i))
                    continue
                if lhs == rhs:
                    holds += 1
                else:
                    failed.append((N, k, i))
    return CertificateResult(holds, failed, poles, sums_ok)


def verify_certificate(ident: str, n_max: int = 20) -> VerificationReport:
    rep = VerificationReport("wz_certificate", {"id": ident, "nmax": n_max})
    res = check_certificate(certificate(ident, corrected=True), n_max)
    rep.params["points_checked"] = res.holds + len(res.failed)
    rep.params["pole_points"] = len(res.poles)
    rep.add("telescoping_holds_off_poles", not res.failed and res.holds > 0,
            f"{len(res.failed)} failures, first {res.failed[:5]}")
    rep.add("sum_over_k_is_one", res.sums_ok, "sum_k F(N,k) differs from 1")
    rep.note("pole points (N,k,i), not evaluated: "
             + ", ".join(f"({a},{b},{c})" for a, b, c in res.poles[:40])
             + (" ..." if len(res.poles) > 40 else ""))
    rep.note("R is read in N = n+1, the top argument of the first binomial")
    if ident == "eq21":
        printed = check_certificate(certificate(ident, corrected=False), n_max)
        rep.note(f"with the printed normalisation the telescoping fails at {len(printed.failed)} points")
    return rep
