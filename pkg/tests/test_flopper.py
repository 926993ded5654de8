import functools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adeflop import flopper as F
from adeflop import rootsys
from adeflop.exactalg import rational_det

CELLS = [("A", n) for n in range(1, 9)] + [("D", n) for n in range(4, 9)] + [("E", n) for n in (6, 7, 8)]


@functools.lru_cache(maxsize=None)
def walk(kind, n):
    return F.run_walk(kind, n)


def names(text):
    return frozenset(text.split())


# Surfaces

def test_classify_basic_surfaces():
    assert F.classify_surface(F.plane_model()) == "P2"
    sigma4 = F.hirzebruch_model(4)
    sigma4.classes = {"s": (0, 1)}
    assert F.classify_surface(sigma4) == "Sigma4"
    assert F.classify_surface(F.quadric_blown_up_model()) == "Bl2P2"
    assert F.classify_surface(F.quadric_model()) == "Sigma0"


def test_blow_up_then_contract_restores_the_plane():
    m = F.plane_model()
    m.classes = {"c": (2,)}
    m.delta = {}
    m.blow_up({"c": 1}, "e")
    assert m.rank == 2 and m.k_squared == 8
    m.contraction_map("e")
    assert m.gram == ((1,),) and m.canonical == (-3,) and m.classes == {"c": (2,)}


def test_contracting_a_tangent_line_makes_a_cusp():
    m = F.plane_model()
    m.blow_up({}, "e")
    m.classes["c"] = (3, -2)
    m.contraction_map("e")
    assert m.delta == {"c": 1}


# Initial diagrams

def test_a2_initial_types():
    d = F.initial_diagram("A", 2)
    assert {lab: d.descriptor(lab) for lab in d.components} == {
        "P1,1": "P2", "P1,2": "Bl2P2", "P2,2": "P2", "Q1": "Sigma4", "Q2": "Sigma4"}
    m = d.components["P1,2"].model
    assert (m.rank, m.k_squared) == (3, 7)


@pytest.mark.parametrize("kind,n,count", [("A", 6, 27), ("D", 4, 14), ("E", 8, 44)])
def test_initial_component_counts(kind, n, count):
    d = F.initial_diagram(kind, n)
    assert len(d.components) == count
    assert len([lab for lab in d.components if lab.startswith("Q")]) == n


@pytest.mark.parametrize("kind,n", CELLS)
def test_initial_bookkeeping(kind, n):
    assert F.diagram_issues(F.initial_diagram(kind, n)) == []


# Sequences

@pytest.mark.parametrize("kind,n", CELLS)
def test_sequence_lengths(kind, n):
    seq = F.flop_sequence(kind, n)
    assert len(seq) == rootsys.expected_count(kind, n) == len(rootsys.positive_roots(rootsys.build(kind, n)))


def test_sequence_examples():
    assert len(F.flop_sequence("A", 6)) == 21
    assert len(F.flop_sequence("D", 5)) == 20
    e8 = F.flop_sequence("E", 8)
    assert len(e8) == 120 and e8.steps[-1].render() == "Q8" and e8.steps[-2].render() == "P8,8(2)"


def test_e8_recount_note():
    notes = F.flop_sequence("E", 8).notes
    assert notes == ["entry 105: printed P1,7(2) is occurrence 3"]


# Walks

@pytest.mark.parametrize("kind,n", CELLS)
def test_walk_is_legal(kind, n):
    rep = walk(kind, n).report
    status = {c.name: c.status for c in rep.checks}
    assert all(status[k] == "pass" for k in ("sequence_length", "every_step_legal", "line_class_is_root",
                                             "final_bookkeeping"))
    assert rep.params["steps"] == rootsys.expected_count(kind, n)


@pytest.mark.parametrize("kind,n", [("A", 3), ("D", 5), ("E", 6)])
def test_walk_with_checks_after_every_step(kind, n):
    assert F.run_walk(kind, n, check_each_step=True).ok


def test_every_target_is_a_plane_at_its_turn():
    for kind, n in (("A", 5), ("D", 6), ("E", 7)):
        assert all(step.before == "P2" and step.after == "P2" for step in walk(kind, n).steps)


def test_mukai_flop_rejects_non_planes():
    d = F.initial_diagram("A", 2)
    with pytest.raises(F.FlopError):
        F.mukai_flop(d, "P1,2")


# Final fibers

@pytest.mark.parametrize("kind,n", [c for c in CELLS if c[0] != "A"])
def test_final_fiber_tables(kind, n):
    rep = F.compare(walk(kind, n).final, F.expected_final(kind, n))
    assert rep.passed, rep.failures()


def test_e6_f5():
    slices = F.fiber_slices(walk("E", 6).final)["F"]
    assert slices[5] == names("P2,2 P2,3 P4,6 Q3 Q5")


def test_e7_f7_is_d6():
    final = walk("E", 7).final
    f7 = F.fiber_slices(final)["F"][7]
    assert f7 == names("P1,1 P1,2 P1,3 P1,4 Q2 Q7")
    labels = sorted(f7)
    edges = [tuple(sorted(pair)) for pair in F.curve_pairs(final, labels)]
    assert F.dynkin_type(labels, edges) == "D6"


def test_d4_f_cap_e3():
    slices = F.fiber_slices(walk("D", 4).final)["F"]
    assert slices[3] == names("P1,1 P2,2 P4,4")
    final = walk("D", 4).final
    assert len(F.connected_parts(final, sorted(slices[3]))) == 3


@pytest.mark.parametrize("n", range(5, 9))
def test_d_f1_cap_en_is_qn(n):
    assert F.fiber_slices(walk("D", n).final)["F1"][n] == {f"Q{n}"}


@pytest.mark.parametrize("n", range(3, 9))
def test_type_a_final_fiber(n):
    final = walk("A", n).final
    rep = F.compare(final, F.expected_final("A", n))
    status = {c.name: c.status for c in rep.checks}
    # every published claim except the count of P1xP1 components holds
    assert [k for k, v in status.items() if v != "pass"] == ["fiber_Sigma0_count"]
    fiber = F.central_fiber(final)
    types = [final.descriptor(lab) for lab in fiber]
    assert types.count("Sigma0") == (n - 1) * (n - 2) // 2
    assert types.count("Sigma2") == n - 2


def test_a6_q_types_and_membership():
    final = walk("A", 6).final
    assert {q: final.descriptor(q) for q in ("Q1", "Q6")} == {"Q1": "Sigma3", "Q6": "Sigma3"}
    assert all(final.descriptor(f"Q{i}") == "Sigma2" for i in range(2, 6))
    member = F.divisor_membership(final)
    assert all(member[f"Q{i}"] == {i} for i in range(1, 7))


@pytest.mark.parametrize("n", range(2, 9))
def test_type_a_membership_rule(n):
    member = F.divisor_membership(walk("A", n).final)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            want = {k for k in range(1, n + 1) if i == k + 1 or j == k - 1}
            assert member[F.p_label(i, j)] == want


def test_dynkin_types():
    assert F.dynkin_type(list("abcd"), [("a", "b"), ("b", "c"), ("c", "d")]) == "A4"
    assert F.dynkin_type(list("abcd"), [("a", "b"), ("a", "c"), ("a", "d")]) == "D4"
    assert F.dynkin_type(list("abcde"), [("a", "b"), ("b", "c"), ("c", "d"), ("c", "e")]) == "D5"
    assert F.dynkin_type(list("abc"), [("a", "b"), ("b", "c"), ("c", "a")]) is None
    assert F.dynkin_type(list("ab"), [("a", "b"), ("a", "b")]) is None


# Involution

def _isolated_plane_with_neighbour():
    p = F.plane_model()
    p.classes = {"a": (1,)}
    q = F.plane_model()
    q.classes = {"b": (1,)}
    comps = {
        "P1,1": F.FiberComponent("P1,1", p, [(2,), (-2,)], frozenset({1}), line_class=(-1, 1)),
        "Q1": F.FiberComponent("Q1", q, [(0,), (0,)], frozenset()),
    }
    return F.FiberDiagram("A", 1, comps, {"x1": F.Point(frozenset({"a", "b"}))}, fresh=1)


def test_double_flop_of_a1_is_identity():
    pr = F.pairing_for("A", 1)
    d = F.initial_diagram("A", 1)
    once, _ = F.mukai_flop(d, "P1,1", pr)
    twice, _ = F.mukai_flop(once, "P1,1", pr)
    assert F.graph_signature(twice) == F.graph_signature(d)


def test_double_flop_with_point_neighbour_is_identity():
    pr = F.pairing_for("A", 1)
    d = _isolated_plane_with_neighbour()
    once, _ = F.mukai_flop(d, "P1,1", pr)
    assert F.graph_signature(once) != F.graph_signature(d)
    twice, _ = F.mukai_flop(once, "P1,1", pr)
    assert F.graph_signature(twice) == F.graph_signature(d)


# DOT output

def test_dot_of_empty_diagram():
    assert F.emit_dot(None) == "graph fiber {\n}\n"


def test_dot_of_initial_e8():
    text = F.emit_dot(F.initial_diagram("E", 8))
    nodes = [line for line in text.splitlines() if "label=" in line]
    assert len(nodes) == 44
    assert sum('"P' in line.split("[")[0] for line in nodes) == 36


def test_dot_highlight_and_determinism():
    final = walk("E", 6).final
    fiber = F.central_fiber(final)
    text = F.emit_dot(final, highlight=fiber)
    assert text.count("fillcolor") == len(fiber)
    assert text == F.emit_dot(walk("E", 6).final, highlight=fiber)


# Properties

small_cells = st.sampled_from([("A", 3), ("A", 4), ("D", 4), ("D", 5), ("E", 6)])


@given(small_cells, st.data())
def test_lattices_stay_unimodular_along_the_walk(cell, data):
    kind, n = cell
    stop = data.draw(st.integers(1, rootsys.expected_count(kind, n)))
    pr = F.pairing_for(kind, n)
    d = F.initial_diagram(kind, n)
    for step in F.flop_sequence(kind, n).steps[:stop]:
        d, _ = F.mukai_flop(d, step.label, pr)
    for comp in d.components.values():
        m = comp.model
        assert abs(rational_det(m.gram)) == 1
        assert F.signature(m.gram) == (1, m.rank - 1)
        assert m.k_squared + m.rank == 10


@given(st.integers(1, 8), st.data())
def test_membership_rule_from_pairing_signs(n, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(i, n))
    k = data.draw(st.integers(1, n))
    form = rootsys.pairing_form(rootsys.build("A", n))
    lam = rootsys.e0_minus(rootsys.interval_root(n, i, j))
    assert (rootsys.pairing(form, k, lam) < 0) == (i == k + 1 or j == k - 1)
