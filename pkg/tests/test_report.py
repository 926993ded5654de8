import json

from hypothesis import given
from hypothesis import strategies as st

from adeflop.report import BUDGET, FAIL, PASS, VerificationReport, timed


def test_empty_report_passes():
    assert VerificationReport("t").status == PASS


def test_status_precedence():
    rep = VerificationReport("t")
    rep.add("a", True)
    rep.add_budget("gb", "out of budget")
    assert rep.status == BUDGET and not rep.passed
    rep.add("b", False, "witness")
    assert rep.status == FAIL
    assert [c.name for c in rep.failures()] == ["gb", "b"]


def test_witness_dropped_on_pass():
    rep = VerificationReport("t")
    rep.add("a", True, "unused")
    assert rep.to_dict()["checks"] == [{"name": "a", "status": "pass"}]


def test_extend_prefixes_names():
    inner = VerificationReport("inner")
    inner.add("x", False, "w")
    inner.note("remark")
    outer = VerificationReport("outer")
    outer.extend(inner, "sub:")
    assert [(c.name, c.witness) for c in outer.checks] == [("sub:x", "w")]
    assert outer.notes == ["remark"]


def test_timing_only_when_asked():
    rep = VerificationReport("t", {"n": 1})
    with timed(rep):
        pass
    assert "timing_seconds" not in json.loads(rep.to_json())
    assert json.loads(rep.to_json(with_timing=True))["timing_seconds"] >= 0


def test_summary_line():
    rep = VerificationReport("t", {"n": 2})
    for i in range(7):
        rep.add(f"c{i}", False)
    assert rep.summary_line() == '[fail] t {"n": 2} (c0, c1, c2, c3, c4, ...)'


@given(st.dictionaries(st.text(min_size=1, max_size=5), st.integers(), max_size=5),
       st.lists(st.tuples(st.text(min_size=1, max_size=5), st.booleans()), max_size=6))
def test_json_is_canonical(params, checks):
    a = VerificationReport("t", dict(params))
    b = VerificationReport("t", dict(reversed(list(params.items()))))
    for name, ok in checks:
        a.add(name, ok, "w")
        b.add(name, ok, "w")
    assert a.to_json() == b.to_json()
    assert json.loads(a.to_json())["status"] == a.status
