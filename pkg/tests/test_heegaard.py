import pytest

from handlecalc.codes import DiagramError, linking_number, validate
from handlecalc.ddc import canonically_equal, parse_ddc, serialize
from handlecalc.heegaard import (
    FiveManifoldClass,
    HeegaardDiagram,
    HeegaardMove,
    apply_heegaard,
    delete_side,
    double_kirby,
    euler_class,
    gluck_cobordism,
    handlebody_heegaard,
    homology_5manifold,
    one_surgery,
    pi1_heegaard,
    s2bundles_to_double,
    sphere_groups,
    surgery_kirby,
    twisted_double_heegaard,
    validate_heegaard,
)
from handlecalc.hgd import hgd_equal, parse_hgd, serialize_hgd
from handlecalc.invariants import abelianization, homology_4manifold
from handlecalc.kirby import KirbyMove, annihilable_pairs, apply_kirby

from test_ddc import MAZUR

WU = """\
heegaard wu
assert k=0 r=0
base:
r3 0
component A framed:1 : pa pb
component B framed:-1 : qa qb
alpha:
component ua surface : va1 va2
beta:
component ub surface : vb1 vb2
piercing p1 disk=ua strand=A.pa sign=+
piercing p2 disk=ua strand=B.qa sign=+
piercing p3 disk=ub strand=A.pb sign=+
piercing p4 disk=ub strand=B.qb sign=-
xvertex v1 a=ua.va1 b=ub.vb1 sign=+ marking=ac
xvertex v2 a=ua.va2 b=ub.vb2 sign=+ marking=ac
"""

S5 = """\
heegaard s5
assert k=0 r=0
base:
r3 0
alpha:
beta:
"""


def groups(hs):
    return [str(g) for g in hs]


def test_wu_parses_round_trips():
    h = parse_hgd(WU)
    assert validate_heegaard(h) == []
    assert h.alpha == frozenset({"ua"})
    assert h.beta == frozenset({"ub"})
    text = serialize_hgd(h)
    again = parse_hgd(text)
    assert hgd_equal(h, again)
    assert serialize_hgd(again) == text


def test_wu_euler_class():
    h = parse_hgd(WU)
    fc = euler_class(h, "closed")
    assert (fc.k, fc.alpha_count, fc.beta_count, fc.r) == (0, 1, 1, 0)
    assert fc.euler == 0


def test_wu_homology():
    h = parse_hgd(WU)
    hs = homology_5manifold(h, "closed")
    assert groups(hs) == ["Z", "0", "Z/2", "0", "0", "Z"]


def test_s5_homology():
    h = parse_hgd(S5)
    assert groups(homology_5manifold(h, "closed")) == ["Z", "0", "0", "0", "0", "Z"]
    assert euler_class(h, "closed").euler == 0


def test_empty_threehandlebody_b5():
    h = parse_hgd(S5)
    fc = euler_class(h, "threehandlebody")
    assert fc.euler == 1
    assert groups(homology_5manifold(h, "threehandlebody")) == [
        "Z", "0", "0", "0", "0", "0",
    ]


# -- doubles -------------------------------------------------------------------


def test_double_of_zero_framed_unknot_is_hopf():
    d = parse_ddc("diagram y\ncomponent K framed:0 :\n")
    dd = double_kirby(d)
    assert dd.r3 == 0
    assert len(dd.components) == 2
    assert linking_number(dd, "K", "Km1") == 1
    # closed homology of S2xS2
    assert groups(homology_4manifold(dd, closed=True)) == ["Z", "0", "Z^2", "0", "Z"]


def test_handlebody_heegaard_of_mazur():
    d = parse_ddc(MAZUR)
    h = handlebody_heegaard(d)
    assert h.asserted_k == 1
    assert len(h.alpha) == 1
    assert not h.beta
    assert validate_heegaard(h) == []
    # chi of the 2-handlebody (Mazur x B1): 1 - 1 + 1 = 1
    assert euler_class(h, "cobordism").euler == 1
    # H_* of the contractible 3-handlebody
    assert groups(homology_5manifold(h, "threehandlebody")) == [
        "Z", "0", "0", "0", "0", "0",
    ]


def test_twisted_double_identity_map():
    d = parse_ddc("diagram y\ncomponent K framed:0 :\n")
    dd = double_kirby(d)
    # beta = parallel of the meridian: pierced once by K, like alpha
    text = serialize(dd) + (
        "component bK surface :\n"
        "piercing bp disk=bK strand=K.sb sign=+\n"
    )
    text = text.replace(
        "component K framed:0 : 0 1", "component K framed:0 : 0 1 sb"
    )
    beta = parse_ddc(text)
    h = twisted_double_heegaard(d, beta)
    assert h.beta == frozenset({"bK"})
    assert validate_heegaard(h) == []
    # S2 x S3: closed, k=0, r=0
    h = h.with_assertions(k=0, r=0)
    assert groups(homology_5manifold(h, "closed")) == ["Z", "0", "Z", "Z", "0", "Z"]
    assert euler_class(h, "closed").euler == 0


def test_s2bundles_to_double_mazur():
    d = parse_ddc(MAZUR)
    h = s2bundles_to_double(d)
    assert len(h.beta) == 1
    assert not h.alpha
    # base is dotted-free
    assert not h.code.by_kind("dotted")
    assert validate_heegaard(h) == []
    # framing parity of the single 2-handle: 0 -> one S2xS2 summand
    parities = [c.framing % 2 for c in d.by_kind("framed")]
    assert parities.count(0) == 1


# -- 1-surgery -----------------------------------------------------------------


def test_one_surgery_on_unknot_in_s4():
    # surgery on a split unknot in S4 gives S2xS2 (framing 0) or the twisted
    # bundle (framing 1)
    d0 = parse_ddc("diagram s4c\ncomponent c framed:0 :\n")
    out0 = one_surgery(d0, "c", 0)
    assert groups(homology_4manifold(__import__("dataclasses").replace(out0, r3=0), closed=True)) == [
        "Z", "0", "Z^2", "0", "Z",
    ]
    out1 = one_surgery(d0, "c", 1)
    assert out1.component("c").framing == 1
    assert linking_number(out1, "c", "cm1") == 1


def test_one_surgery_rejects_other_framings():
    d = parse_ddc("diagram s\ncomponent c framed:0 :\n")
    with pytest.raises(DiagramError):
        one_surgery(d, "c", 2)


# -- surgery compiler ------------------------------------------------------------


def test_surgery_trivial_sphere_gives_s1xs3():
    # (S4, trivial 2-knot): compile the alpha side
    text = """\
heegaard triv
assert k=? r=?
base:
r3 0
alpha:
component U surface :
beta:
"""
    h = parse_hgd(text)
    out = surgery_kirby(h, "alpha")
    assert [c.kind for c in out.components] == ["dotted"]
    assert out.r3 == 1
    assert groups(homology_4manifold(out, closed=True)) == ["Z", "Z", "0", "Z", "Z"]


def test_surgery_deletes_other_side():
    h = parse_hgd(WU)
    out = surgery_kirby(h, "alpha")
    assert not any(c.kind == "surface" for c in out.components)
    assert out.has_component("ua")
    assert not out.has_component("ub")
    assert validate(out) == []


def test_surgery_band_becomes_two_handle():
    text = """\
heegaard sphere_pair
assert k=? r=?
base:
r3 0
alpha:
component U surface : f
component V surface : t
band B1 from=U.f to=V.t twists=0 core=( )
beta:
"""
    h = parse_hgd(text)
    out = surgery_kirby(h, "alpha")
    assert out.has_component("B1")
    b1 = out.component("B1")
    assert b1.kind == "framed" and b1.framing == 0
    # the band circle passes once through each new dotted disk
    words = {}
    for p in out.piercings:
        words.setdefault(p.strand[0], []).append((p.disk, p.sign))
    assert sorted(words["B1"]) == [("U", -1), ("V", 1)]
    assert out.r3 == 1  # one resolved component


def test_surgery_rejects_nonsphere_side():
    text = """\
heegaard torus
assert k=? r=?
base:
r3 0
alpha:
component U surface : a b c d
band B1 from=U.a to=U.c twists=0 core=( )
band B2 from=U.b to=U.d twists=0 core=( )
beta:
"""
    h = parse_hgd(text)
    with pytest.raises(DiagramError):
        surgery_kirby(h, "alpha")


# -- moves ---------------------------------------------------------------------


def test_stab1_and_destab1():
    h = parse_hgd(S5)
    up = apply_heegaard(h, HeegaardMove("stab1", names=("U",)))
    assert up.asserted_k == 1
    assert up.alpha == frozenset({"U"})
    assert up.duals["U"].startswith("virtual:")
    assert groups(homology_5manifold(up, "closed")) == groups(
        homology_5manifold(h, "closed")
    )
    down = apply_heegaard(up, HeegaardMove("destab1", site="U"))
    assert hgd_equal(down, h)


def test_stab3_and_destab3():
    h = parse_hgd(S5)
    up = apply_heegaard(h, HeegaardMove("stab3", names=("W",)))
    assert up.asserted_r == 1
    assert up.beta == frozenset({"W"})
    assert groups(homology_5manifold(up, "closed")) == groups(
        homology_5manifold(h, "closed")
    )
    down = apply_heegaard(up, HeegaardMove("destab3", site="W"))
    assert hgd_equal(down, h)


def test_stab2_and_destab2():
    h = parse_hgd(S5)
    up = apply_heegaard(h, HeegaardMove("stab2"))
    assert len(up.alpha) == 1 and len(up.beta) == 1
    assert len(up.vertices) == 1
    assert validate_heegaard(up) == []
    assert groups(homology_5manifold(up, "closed")) == groups(
        homology_5manifold(h, "closed")
    )
    assert euler_class(up, "closed").euler == 0
    sa = next(iter(up.alpha))
    down = apply_heegaard(up, HeegaardMove("destab2", site=sa))
    assert hgd_equal(down, h)


def test_base_kirby_move_keeps_sides():
    h = parse_hgd(WU)
    up = apply_heegaard(
        h, HeegaardMove("kirby", kirby_move=KirbyMove("pair23_create", names=("U9",)))
    )
    assert up.code.has_component("U9")
    assert up.alpha == h.alpha
    down = apply_heegaard(
        up, HeegaardMove("kirby", kirby_move=KirbyMove("pair23_annihilate", site="U9"))
    )
    assert hgd_equal(down, h)


def test_base_pair12_annihilate_revirtualizes_duals():
    d = parse_ddc(MAZUR)
    h = handlebody_heegaard(d)
    # cancel (D, K): the alpha circle was dual to K, which disappears
    # first make K pierce D exactly once: transpose p3 next to p2 and cancel
    from handlecalc.bandmoves import BandMove

    h2 = apply_heegaard(
        h,
        HeegaardMove(
            "isotopy",
            side="alpha",
            band_move=BandMove("isotopy", rewrite="transpose", args=(("K", "bo"),)),
        ),
    )
    h3 = apply_heegaard(
        h2,
        HeegaardMove(
            "isotopy",
            side="alpha",
            band_move=BandMove("isotopy", rewrite="cancel_pp", args=("q2", "q3")),
        ),
    )
    before = groups(homology_5manifold(h3, "threehandlebody"))
    h4 = apply_heegaard(
        h3, HeegaardMove("kirby", kirby_move=KirbyMove("pair12_annihilate", site="D"))
    )
    assert h4.duals[next(iter(h4.alpha))].startswith("virtual:")
    assert groups(homology_5manifold(h4, "threehandlebody")) == before


def test_heegaard_slide_between_spheres():
    # two disjoint alpha spheres over an empty base
    text = """\
heegaard twosph
assert k=? r=?
base:
r3 0
alpha:
component U surface :
component V surface :
beta:
"""
    h = parse_hgd(text)
    up = apply_heegaard(h, HeegaardMove("slide", side="alpha", i="U", j="V"))
    assert len(sphere_groups(up, "alpha")) == 2
    assert len(up.bands) == 2  # long band and rainbow band
    assert validate_heegaard(up) == []


def test_heegaard_slide_over_banded_sphere():
    # slide a plain sphere over a two-circle banded sphere
    text = """\
heegaard slideb
assert k=? r=?
base:
r3 0
alpha:
component U surface :
component V1 surface : f
component V2 surface : t
band BV from=V1.f to=V2.t twists=0 core=( )
beta:
"""
    h = parse_hgd(text)
    up = apply_heegaard(h, HeegaardMove("slide", side="alpha", i="U", j="V1"))
    assert len(sphere_groups(up, "alpha")) == 2
    assert validate_heegaard(up) == []
    # the copy carries a copied band: 1 original + 1 copy + long + rainbow
    assert len(up.bands) == 4
    from handlecalc.heegaard import surgery_kirby

    out = surgery_kirby(up, "alpha")
    assert validate(out) == []


def test_homology_closed_fixtures_bookends():
    import os

    fx = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    for name in sorted(os.listdir(fx)):
        if not name.endswith(".hgd"):
            continue
        h = parse_hgd(open(os.path.join(fx, name)).read())
        if h.asserted_r is None or h.asserted_k is None:
            continue
        hs = homology_5manifold(h, "closed")
        assert str(hs[0]) == "Z" and str(hs[5]) == "Z"
        ranks = [g.free_rank for g in hs]
        assert sum((-1) ** i * r for i, r in enumerate(ranks)) == 0
