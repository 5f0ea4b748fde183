"""Acceptance suite: one test per criterion, exact tolerances, printed
pass/fail lines."""

import os
import random
from dataclasses import replace

import pytest

from handlecalc.codes import validate
from handlecalc.ddc import parse_ddc, serialize
from handlecalc.engine import (
    MoveScript,
    canonical_recognize,
    canonical_state,
    run_script,
    simplify_search,
    watch_invariants,
)
from handlecalc.heegaard import (
    euler_class,
    gluck_cobordism,
    homology_5manifold,
    strip_surfaces,
    surgery_kirby,
)
from handlecalc.hgd import parse_hgd, serialize_hgd
from handlecalc.invariants import (
    abelianization,
    alternating_group,
    hom_count,
    homology_4manifold,
    pi1_presentation,
)
from handlecalc.kirby import KirbyMove, apply_kirby
from handlecalc.randgen import (
    random_closed_kirby_diagram,
    random_kirby_diagram,
    random_preserving_move,
)
from handlecalc.snf import (
    IntMatrix,
    determinant_divisors,
    is_unimodular,
    smith_normal_form,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture(name: str) -> str:
    return open(os.path.join(FIXTURES, name), encoding="utf-8").read()


def report(name: str, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_framing_arithmetic_slide22():
    d = parse_ddc(fixture("split_pm1.ddc"))
    out = apply_kirby(d, KirbyMove("slide22", i="B", j="A"))
    got = serialize(replace(out, name="hopf10"))
    want = fixture("hopf10.ddc")
    ok = got == want and out.component("B").framing == 0
    report("framing arithmetic: slide22 (-1,1,0) -> 0 and the 1/0 Hopf pattern", ok)


def test_mazur_script_reaches_b5():
    script = MoveScript.parse(fixture("mazur_b5.kms"))
    trace = run_script(script, base_dir=FIXTURES)
    ok = trace.ok and canonical_recognize(trace.final_state) == "EmptyS4orB5"
    drift = watch_invariants(
        script,
        watch=("h0", "h1", "h2", "h3", "h4", "h5", "pi1ab"),
        base_dir=FIXTURES,
    )
    report(
        "Mazur script: empty diagram, recognize=EmptyS4orB5, no invariant drift",
        ok and drift == [],
        "; ".join(trace.failures + drift),
    )


def test_wu_manifold_homology():
    h = parse_hgd(fixture("wu.hgd"))
    hs = homology_5manifold(h, "closed")
    fc = euler_class(h, "closed")
    ok = str(hs[1]) == "0" and str(hs[2]) == "Z/2" and fc.euler == 0
    report("Wu manifold: H1 = 0, H2 = Z/2, chi = 0", ok, f"got {[str(g) for g in hs]}")


def test_cobordism_alpha_side_simplifies():
    h = parse_hgd(fixture("s4_to_homology_sphere.hgd"))
    a = canonical_state(surgery_kirby(h, "alpha"))
    res = simplify_search(a, budget=500)
    ok = canonical_recognize(res.best) == "EmptyS4orB5"
    report("cobordism example: alpha surgery simplifies to empty (budget 500)", ok)


def test_cobordism_beta_side_a5_epimorphism():
    h = parse_hgd(fixture("s4_to_homology_sphere.hgd"))
    b = surgery_kirby(h, "beta")
    p = pi1_presentation(b)
    ab = abelianization(p)
    total, surj = hom_count(p, alternating_group(5), order_bound=60)
    ok = ab.is_trivial and surj >= 1
    report(
        "cobordism example: pi1(beta surgery) surjects onto A5, H1 trivial",
        ok,
        f"abelianization={ab}, surjections={surj}",
    )


def test_gluck_spun_trefoil():
    k = parse_ddc(fixture("spun_trefoil.ddc"))
    x = replace(strip_surfaces(k), name="spun_trefoil")
    gh = gluck_cobordism(x, k)
    got = serialize_hgd(replace(gh, code=replace(gh.code, name="gluck_spun_trefoil")))
    ok_fixture = got == fixture("gluck_spun_trefoil.hgd")

    h = parse_hgd(fixture("gluck_spun_trefoil.hgd"))
    a = canonical_state(surgery_kirby(h, "alpha"))
    res = simplify_search(a, budget=500)
    ok_alpha = canonical_recognize(res.best) == "EmptyS4orB5"

    script = MoveScript.parse(fixture("gluck_spun_trefoil.kms"))
    trace = run_script(script, base_dir=FIXTURES)
    ok_beta = trace.ok and canonical_recognize(trace.final_state) == "EmptyS4orB5"
    report(
        "Gluck twist along the spun trefoil: fixture reproduced, both sides standard",
        ok_fixture and ok_alpha and ok_beta,
        f"fixture={ok_fixture} alpha={ok_alpha} beta={ok_beta} {trace.failures}",
    )


def test_one_surgery_compiler_byte_exact():
    from handlecalc.heegaard import one_surgery

    g = parse_ddc(fixture("s1xs3_gamma2.ddc"))
    out = one_surgery(g, "c", 0)
    got = serialize(replace(out, name="one_surgery_gamma2"))
    ok = got == fixture("one_surgery_gamma2.ddc")
    report("1-surgery compiler matches the fixture byte-for-byte", ok)


def test_invariance_fuzz_1000():
    rng = random.Random(20250810)
    failures = []
    checked = 0
    for trial in range(1000):
        d = random_closed_kirby_diagram(rng)
        move = random_preserving_move(rng, d)
        if move is None:
            continue
        before = (
            [str(g) for g in homology_4manifold(d, closed=True)],
            str(abelianization(pi1_presentation(d))),
            _chi(d),
        )
        try:
            out = apply_kirby(d, move)
        except Exception as e:  # applicability guard: only real failures count
            failures.append(f"trial {trial}: {move.kind} raised {e}")
            continue
        after = (
            [str(g) for g in homology_4manifold(out, closed=True)],
            str(abelianization(pi1_presentation(out))),
            _chi(out),
        )
        checked += 1
        if before != after:
            failures.append(f"trial {trial}: {move.kind}: {before} -> {after}")
    ok = not failures and checked >= 900
    report(
        "invariance fuzz: 1000 diagrams x manifold-preserving moves, zero drift",
        ok,
        f"checked={checked}, failures={failures[:3]}",
    )


def _chi(d):
    nd = len(d.by_kind("dotted"))
    nf = len(d.by_kind("framed"))
    return 1 - nd + nf - (d.r3 or 0) + 1


def test_snf_oracle_10k():
    rng = random.Random(5)
    failures = 0
    for _ in range(10_000):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = IntMatrix(
            [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
        )
        f = smith_normal_form(a)
        ok = (
            is_unimodular(f.left)
            and is_unimodular(f.right)
            and f.left * a * f.right == f.diagonal_matrix(rows, cols)
            and all(y % x == 0 for x, y in zip(f.d, f.d[1:]))
        )
        gs = determinant_divisors(a)
        expected = []
        prev = 1
        for g in gs:
            if g == 0:
                break
            expected.append(g // prev)
            prev = g
        ok = ok and list(f.d) == expected
        if not ok:
            failures += 1
    report("Smith form oracle: 10^4 samples up to 4x4, zero failures", failures == 0)


def test_chi_consistency_closed_fixtures():
    bad = []
    for name in sorted(os.listdir(FIXTURES)):
        if not name.endswith(".hgd"):
            continue
        h = parse_hgd(fixture(name))
        if h.asserted_r is None or h.asserted_k is None:
            continue
        fc = euler_class(h, "closed")
        if fc.euler != 0:
            bad.append(name)
    report("chi consistency: every closed Heegaard fixture has chi = 0", not bad, str(bad))
