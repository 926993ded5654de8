"""Command-line front end.

    adeflop verify {relations|invariance|charts|recursion|wz|poisson|slodowy} [options]
    adeflop flop {walk|sequence|initial} --type T --n N [options]

Every (suite, type, n) cell writes one JSON report into ``--out``; flop walks
also write a JSON-lines step log, and ``--emit-dot DIR`` writes DOT files of
the diagrams involved.  A ``summary.json`` lists every report with its
status.  Reports carry no timing unless ``--timing`` is given, so two runs
with the same arguments write identical files.

Exit status: 0 when every report passes, 1 when any check fails, 2 when the
only non-passing checks ran out of Groebner budget, 3 on I/O errors and 4 on
invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__, flopper, invariants, poisson, rootsys, slodowy, wzcert
from .exactalg import DEFAULT_BUDGET
from .report import BUDGET, FAIL, PASS, VerificationReport, timed

BUDGET_ENV = "ADEFLOP_BUDGET"
EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_IO, EXIT_USAGE = 0, 1, 2, 3, 4

VERIFY_SUITES = ("relations", "invariance", "charts", "recursion", "wz", "poisson", "slodowy")
FLOP_SUITES = ("walk", "sequence", "initial")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_n(text: str) -> list[int]:
    """``8``, ``1..8`` or ``4,6,8`` (ranges inclusive)."""
    out: list[int] = []
    for part in text.split(","):
        m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", part)
        if not m:
            raise argparse.ArgumentTypeError(f"bad n {text!r}; use an int, a range a..b or a comma list")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) else lo
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {part!r}")
        out.extend(range(lo, hi + 1))
    return sorted(set(out))


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV}={raw!r} is not an integer") from None
    if v <= 0:
        raise UsageError(f"{BUDGET_ENV} must be positive")
    return v


# --------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class Cell:
    """One unit of work: a suite and its parameters."""

    group: str
    suite: str
    kind: str | None = None
    n: int | None = None
    options: tuple[tuple[str, Any], ...] = ()

    @property
    def stem(self) -> str:
        name = f"{self.group}_{self.suite}"
        if self.kind is not None:
            name += f"_{self.kind}{self.n}"
        for k, v in self.options:
            if k.startswith("part"):
                name += f"_{v}"
        return name

    def opt(self, key: str, default: Any = None) -> Any:
        return dict(self.options).get(key, default)


@dataclass
class RunConfig:
    cells: list[Cell]
    out: Path
    emit_dot: Path | None = None
    timing: bool = False
    jobs: int = 1
    quiet: bool = False
    extra: dict[str, Any] = field(default_factory=dict)


_SUPPORTED = {
    "relations": {"A": range(1, 9), "D": range(4, 9), "E": range(6, 9)},
    "invariance": {"A": range(1, 9), "D": range(4, 9)},
    "charts": {"A": range(1, 9), "D": range(4, 9)},
    "recursion": {"A": range(3, 16)},
    "walk": {"A": range(1, 9), "D": range(4, 9), "E": range(6, 9)},
    "sequence": {"A": range(1, 9), "D": range(4, 9), "E": range(6, 9)},
    "initial": {"A": range(1, 9), "D": range(4, 9), "E": range(6, 9)},
}


def _grid(suite: str, kind: str | None, ns: list[int] | None, default_kind: str | None = None) -> list[tuple[str, int]]:
    table = _SUPPORTED[suite]
    kind = kind or default_kind
    if kind is None:
        raise UsageError(f"{suite} needs --type")
    if kind not in table:
        raise UsageError(f"{suite} supports types {', '.join(table)}, not {kind}")
    if ns is None:
        raise UsageError(f"{suite} needs --n")
    bad = [n for n in ns if n not in table[kind]]
    if bad:
        r = table[kind]
        raise UsageError(f"{suite} {kind}: n must lie in {r.start}..{r.stop - 1}, got {bad}")
    return [(kind, n) for n in ns]


def build_cells(args: argparse.Namespace) -> list[Cell]:
    group, suite = args.command, args.suite
    budget = args.budget
    if group == "verify":
        if suite in ("relations", "invariance", "charts", "recursion"):
            opts = (("budget", budget),) if suite == "charts" else ()
            default = "A" if suite == "recursion" else None
            return [Cell(group, suite, k, n, opts) for k, n in _grid(suite, args.type, args.n, default)]
        if suite == "wz":
            if args.nmax < 1 or args.cert_nmax < 1:
                raise UsageError("--nmax and --cert-nmax must be at least 1")
            cells = [Cell(group, suite, options=(("part", f"identity_{i}"), ("nmax", args.nmax))) for i in wzcert.IDS]
            cells += [Cell(group, suite, options=(("part", f"certificate_{i}"), ("nmax", args.cert_nmax)))
                      for i in wzcert.IDS]
            return cells
        if suite == "poisson":
            if args.nmax < 3:
                raise UsageError("poisson needs --nmax >= 3")
            if args.order < 5:
                raise UsageError("series order too low to compare the printed terms (need >= 5)")
            parts: list[tuple[tuple[str, Any], ...]] = [
                (("part", "axioms"), ("trials", args.trials), ("seed", args.seed)),
                (("part", "generators"),),
                (("part", "recurrence"), ("nmax", args.nmax)),
            ]
            parts += [(("part", f"gluing_{w}"), ("order", args.order)) for w in ("W", "W1W2", "Wprime")]
            parts += [(("part", f"theta_n{k}"), ("lift", k)) for k in range(1, args.lift_nmax + 1)]
            parts.append((("part", "swap"),))
            return [Cell(group, suite, options=p) for p in parts]
        if suite == "slodowy":
            return [Cell(group, suite, options=(("part", "sl4"), ("budget", budget))),
                    Cell(group, suite, options=(("part", "specialization"), ("seed", args.seed)))]
    if group == "flop":
        opts = (("check_steps", bool(getattr(args, "check_steps", False))),)
        return [Cell(group, suite, k, n, opts) for k, n in _grid(suite, args.type, args.n)]
    raise UsageError(f"unknown suite {group} {suite}")


# --------------------------------------------------------------------------
# Execution


@dataclass
class CellResult:
    cell: Cell
    report: VerificationReport
    artifacts: list[tuple[str, str]]


def _verify_report(cell: Cell) -> VerificationReport:
    s, k, n = cell.suite, cell.kind, cell.n
    if s == "relations":
        return invariants.verify_en_equations(n) if k == "E" else invariants.verify_relations(k, n)
    if s == "invariance":
        return invariants.verify_invariance(k, n)
    if s == "charts":
        budget = cell.opt("budget")
        rep = invariants.verify_chart(k, n, budget)
        if k == "A" and n >= 3:
            rep.extend(invariants.verify_singular_locus(n, budget), prefix="singular_locus:")
        return rep
    if s == "recursion":
        return invariants.verify_recursion(n)
    part = cell.opt("part")
    if s == "wz":
        what, ident = part.split("_", 1)
        if what == "identity":
            return wzcert.verify_identity(ident, cell.opt("nmax"))
        return wzcert.verify_certificate(ident, cell.opt("nmax"))
    if s == "poisson":
        if part == "axioms":
            return poisson.bracket_axioms_suite(cell.opt("trials"), cell.opt("seed"))
        if part == "generators":
            return poisson.remark4_suite()
        if part == "recurrence":
            return poisson.remark5_suite(cell.opt("nmax"))
        if part.startswith("gluing_"):
            return poisson.verify_gluing(part.split("_", 1)[1], cell.opt("order"))
        if part.startswith("theta_"):
            lift = cell.opt("lift")
            rep = poisson.verify_theta_lift(lift, 1)
            rep.params["c"] = "1, -2/3"
            rep.extend(poisson.verify_theta_lift(lift, Fraction(-2, 3)), prefix="c=-2/3:")
            return rep
        if part == "swap":
            return poisson.verify_swap_automorphism()
    if s == "slodowy":
        if part == "sl4":
            return slodowy.eliminate_and_compare(cell.opt("budget"))
        return slodowy.specialization_report(seed=cell.opt("seed"))
    raise UsageError(f"unknown cell {cell}")


def _flop_result(cell: Cell) -> tuple[VerificationReport, list[tuple[str, str]]]:
    k, n = cell.kind, cell.n
    stem = f"{k}{n}"
    if cell.suite == "sequence":
        seq = flopper.flop_sequence(k, n)
        rs = rootsys.build(k, n)
        closure = len(rootsys.positive_roots(rs))
        rep = VerificationReport("flop_sequence", {"type": k, "n": n, "steps": len(seq)})
        rep.add("length_is_expected_count", len(seq) == rootsys.expected_count(k, n),
                f"{len(seq)} vs {rootsys.expected_count(k, n)}")
        rep.add("length_is_positive_root_count", len(seq) == closure, f"{len(seq)} vs {closure}")
        for text in seq.notes:
            rep.note(text)
        rep.params["sequence"] = " ".join(st.render() for st in seq.steps)
        return rep, []
    if cell.suite == "initial":
        d = flopper.initial_diagram(k, n)
        rep = VerificationReport("flop_initial", {"type": k, "n": n, "components": len(d.components)})
        issues = flopper.diagram_issues(d)
        rep.add("bookkeeping", not issues, "; ".join(issues[:5]))
        rep.params["descriptors"] = {lab: d.descriptor(lab) for lab in sorted(d.components, key=flopper.label_key)}
        return rep, [(f"initial_{stem}.dot", flopper.emit_dot(d, name=f"initial_{stem}"))]
    walk = flopper.run_walk(k, n, check_each_step=cell.opt("check_steps", False))
    rep = walk.report
    artifacts = [(f"walk_{stem}.jsonl", "".join(line + "\n" for line in walk.log_lines())),
                 (f"initial_{stem}.dot", flopper.emit_dot(walk.initial, name=f"initial_{stem}"))]
    if walk.final is not None:
        fiber = flopper.central_fiber(walk.final)
        artifacts.append((f"final_{stem}.dot", flopper.emit_dot(walk.final, highlight=fiber, name=f"final_{stem}")))
        rep.extend(flopper.compare(walk.final, flopper.expected_final(k, n)), prefix="fiber:")
        rep.params["fiber_components"] = len(fiber)
    return rep, artifacts


def run_cell(cell: Cell, with_timing: bool = False) -> CellResult:
    rep = VerificationReport(cell.stem)
    with timed(rep):
        if cell.group == "verify":
            out, artifacts = _verify_report(cell), []
        else:
            out, artifacts = _flop_result(cell)
    out.timing = rep.timing if with_timing else None
    return CellResult(cell, out, artifacts)


def _run_cell_star(args: tuple[Cell, bool]) -> CellResult:
    return run_cell(*args)


def overall_status(reports: Sequence[VerificationReport]) -> str:
    states = {r.status for r in reports}
    if FAIL in states:
        return FAIL
    if BUDGET in states:
        return BUDGET
    return PASS


def exit_code(status: str) -> int:
    return {PASS: EXIT_OK, FAIL: EXIT_FAIL, BUDGET: EXIT_BUDGET}[status]


def run(config: RunConfig) -> int:
    try:
        config.out.mkdir(parents=True, exist_ok=True)
        if config.emit_dot is not None:
            config.emit_dot.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO
    work = [(c, config.timing) for c in config.cells]
    if config.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_cell_star, work))
    else:
        results = [_run_cell_star(w) for w in work]
    summary = []
    try:
        for res in results:
            name = res.cell.stem + ".json"
            (config.out / name).write_text(res.report.to_json(with_timing=config.timing), encoding="utf-8")
            for fname, text in res.artifacts:
                target = config.out
                if fname.endswith(".dot"):
                    if config.emit_dot is None:
                        continue
                    target = config.emit_dot
                (target / fname).write_text(text, encoding="utf-8")
            summary.append({"report": name, "status": res.report.status,
                            "failures": [c.name for c in res.report.failures()]})
            if not config.quiet:
                print(res.report.summary_line())
        status = overall_status([r.report for r in results])
        doc = {"status": status, "reports": summary, **config.extra}
        (config.out / "summary.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write reports: {exc}", file=sys.stderr)
        return EXIT_IO
    if not config.quiet:
        print(f"{status}: {sum(r.report.passed for r in results)}/{len(results)} reports pass")
    return exit_code(status)


# --------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("reports"), help="report directory (default: reports)")
    common.add_argument("--budget", type=_positive, default=None,
                        help=f"Groebner budget in S-pair reductions (default: ${BUDGET_ENV} or {DEFAULT_BUDGET})")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the reports")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for independent cells")
    common.add_argument("--quiet", action="store_true", help="print nothing on success")
    common.add_argument("--type", choices=("A", "D", "E"), default=None)
    common.add_argument("--n", type=parse_n, default=None, help="an int, a range a..b, or a comma list")

    parser = _Parser(prog="adeflop", description="Exact verification suites and flop walks for ADE Hilbert squares.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run an identity suite")
    vsub = verify.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    for name in ("relations", "invariance", "charts", "recursion"):
        vsub.add_parser(name, parents=[common])
    wz = vsub.add_parser("wz", parents=[common])
    wz.add_argument("--nmax", type=int, default=60, help="range of the identity checks (default 60)")
    wz.add_argument("--cert-nmax", type=int, default=20, help="range of the certificate checks (default 20)")
    po = vsub.add_parser("poisson", parents=[common])
    po.add_argument("--nmax", type=int, default=10, help="largest n of the recurrence check (default 10)")
    po.add_argument("--order", type=int, default=8, help="series truncation order (default 8)")
    po.add_argument("--trials", type=_positive, default=1000, help="random triples for the bracket axioms")
    po.add_argument("--seed", type=int, default=0)
    po.add_argument("--lift-nmax", type=_positive, default=4, help="largest exponent of the lifted maps")
    sl = vsub.add_parser("slodowy", parents=[common])
    sl.add_argument("--seed", type=int, default=0)

    flop = sub.add_parser("flop", help="run or inspect the Mukai flop walk")
    fsub = flop.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    for name in FLOP_SUITES:
        p = fsub.add_parser(name, parents=[common])
        p.add_argument("--emit-dot", type=Path, default=None, metavar="DIR", help="write DOT diagrams into DIR")
        if name == "walk":
            p.add_argument("--check-steps", action="store_true", help="run the bookkeeping checks after every flop")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.budget is None:
            args.budget = default_budget()
        cells = build_cells(args)
    except UsageError as exc:
        print(f"adeflop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig(cells, args.out, getattr(args, "emit_dot", None), args.timing, args.jobs, args.quiet)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
