import pytest

from handlecalc.codes import DiagramError
from handlecalc.ddc import parse_ddc, serialize
from handlecalc.engine import (
    MoveScript,
    canonical_recognize,
    evaluate_invariant,
    run_script,
    simplify_search,
    watch_invariants,
)

from test_ddc import HOPF, MAZUR


def test_recognize_empty():
    assert canonical_recognize(parse_ddc("diagram e\n")) == "EmptyS4orB5"


def test_recognize_dotted_unlink():
    d = parse_ddc(
        "diagram u\ncomponent D1 dotted :\ncomponent D2 dotted :\ncomponent D3 dotted :\n"
    )
    assert canonical_recognize(d) == "DottedUnlink(3)"


def test_recognize_framed_zero_unlink():
    d = parse_ddc("diagram u\ncomponent U framed:0 :\n")
    assert canonical_recognize(d) == "FramedZeroUnlink(1)"


def test_recognize_hopf_pairs():
    text = """\
diagram hp
component A framed:0 : a1 a2
component B framed:1 : b1 b2
component C framed:0 : c1 c2
component D framed:0 : d1 d2
crossing x1 + over=A.a1 under=B.b1
crossing x2 + over=B.b2 under=A.a2
crossing y1 + over=C.c1 under=D.d1
crossing y2 + over=D.d2 under=C.c2
"""
    assert canonical_recognize(parse_ddc(text)) == "HopfPairs(1,1)"


def test_recognize_unknown():
    assert canonical_recognize(parse_ddc(MAZUR)) == "Unknown"


def test_script_runs_and_expects(tmp_path):
    fx = tmp_path / "hopf.ddc"
    fx.write_text(HOPF)
    script = MoveScript.parse(
        f"""\
input {fx}
kirby pair23 create names=U1
expect components = 3
kirby pair23 annihilate site=U1
expect components = 2
expect h1 = 0
"""
    )
    trace = run_script(script)
    assert trace.ok, trace.failures
    # deterministic byte-identical traces
    assert run_script(script).text() == trace.text()


def test_script_expect_failure(tmp_path):
    fx = tmp_path / "e.ddc"
    fx.write_text("diagram e\n")
    script = MoveScript.parse(f"input {fx}\nexpect components = 5\n")
    trace = run_script(script)
    assert not trace.ok
    assert "FAIL" in trace.failures[0]


def test_script_move_rejection_reports_step(tmp_path):
    fx = tmp_path / "e.ddc"
    fx.write_text("diagram e\n")
    script = MoveScript.parse(f"input {fx}\nkirby pair23 annihilate site=Z\n")
    trace = run_script(script)
    assert not trace.ok
    assert "step 2" in trace.failures[0]


def test_empty_script_trace_single_entry():
    script = MoveScript.parse("")
    trace = run_script(script, initial=parse_ddc("diagram e\n"))
    assert len(trace.entries) == 1
    assert trace.ok


def test_watchdog_flags_nothing_for_pair_moves(tmp_path):
    fx = tmp_path / "m.ddc"
    fx.write_text(MAZUR)
    script = MoveScript.parse(
        f"""\
input {fx}
kirby pair12 create framing=2 names=C9,M9
kirby pair12 annihilate site=M9
kirby slide21 i=K j=D
"""
    )
    report = watch_invariants(script, watch=("h0", "h1", "h2", "pi1ab"))
    assert report == []


def test_watchdog_labels_dotzero_permitted(tmp_path):
    fx = tmp_path / "m.ddc"
    fx.write_text(MAZUR)
    script = MoveScript.parse(f"input {fx}\nkirby dotzero site=D\n")
    report = watch_invariants(script, watch=("h1", "h2"))
    assert report
    assert all("permitted" in line for line in report)


def test_simplify_search_cancelling_pair():
    text = """\
diagram c
component D dotted :
component C framed:3 : p
piercing q disk=D strand=C.p sign=+
"""
    res = simplify_search(parse_ddc(text), budget=50)
    assert canonical_recognize(res.best) == "EmptyS4orB5"
    assert res.script == ("kirby pair12 annihilate site=D",)
    # witness replays to the same result
    replayed = res.replay(parse_ddc(text))
    assert serialize(replayed) == serialize(res.best)


def test_simplify_search_identity_on_empty():
    d = parse_ddc("diagram e\n")
    res = simplify_search(d, budget=10)
    assert res.script == ()
    assert serialize(res.best) == serialize(d)


def test_simplify_never_worse():
    d = parse_ddc(MAZUR)
    res = simplify_search(d, budget=100)
    from handlecalc.engine import _score

    assert _score(res.best) <= _score(d)


def test_evaluate_invariants_on_codes():
    d = parse_ddc(MAZUR)
    assert evaluate_invariant(d, "h1") == "0"
    assert evaluate_invariant(d, "pi1ab") == "0"
    assert evaluate_invariant(d, "components") == "2"
    assert evaluate_invariant(d, "chi") == "1"
    with pytest.raises(DiagramError):
        evaluate_invariant(d, "bogus")


def test_check_resolutions_trivial():
    from handlecalc.engine import check_resolutions_trivial

    b = parse_ddc(
        "diagram t\ncomponent U surface : f\ncomponent V surface : t\n"
        "band B1 from=U.f to=V.t twists=0 core=( )\n"
    )
    assert check_resolutions_trivial(b) is True
    # a clasped pair of surface circles is not visibly an unlink
    text = """\
diagram clasp
component U surface : a b
component V surface : c d
crossing x + over=U.a under=V.c
crossing y + over=V.d under=U.b
"""
    assert check_resolutions_trivial(parse_ddc(text)) is None


def test_fixture_resolutions_verify():
    import os

    from handlecalc.engine import check_resolutions_trivial
    from handlecalc.hgd import parse_hgd

    fx = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    # the spun trefoil's resolutions are visibly trivial in the 3-sphere
    tri = parse_ddc(open(os.path.join(fx, "spun_trefoil.ddc")).read())
    assert check_resolutions_trivial(tri, budget=30) is True
    # the cobordism example's banded resolution is trivial only in the
    # surgered boundary; the bounded diagram-level search stays agnostic
    h = parse_hgd(open(os.path.join(fx, "s4_to_homology_sphere.hgd")).read())
    assert check_resolutions_trivial(h.as_banded(), budget=30) is None


def test_twenty_move_fuzz_h1_constant():
    import random

    from handlecalc.engine import evaluate_invariant
    from handlecalc.kirby import apply_kirby
    from handlecalc.randgen import random_closed_kirby_diagram, random_preserving_move

    rng = random.Random(99)
    d = random_closed_kirby_diagram(rng)
    start = evaluate_invariant(d, "h1")
    for _ in range(20):
        mv = random_preserving_move(rng, d)
        if mv is None:
            break
        try:
            d = apply_kirby(d, mv)
        except Exception:
            continue
        assert evaluate_invariant(d, "h1") == start
