import pytest

from handlecalc.codes import (
    Builder,
    DiagramError,
    band_surgery,
    disjoint_union,
    linking_matrix,
    linking_number,
    pair_connected_sum,
    push_off,
    resolve_vertices,
    surface_euler_characteristic,
    surface_groups,
    validate,
    writhe,
)
from handlecalc.ddc import canonically_equal, parse_ddc, serialize
from handlecalc.snf import IntMatrix

from test_ddc import HOPF, MAZUR


def hopf():
    return parse_ddc(HOPF)


def mazur():
    return parse_ddc(MAZUR)


# -- linking ---------------------------------------------------------------


def test_split_unknots_link_zero():
    d = parse_ddc("diagram s\ncomponent A framed:0 :\ncomponent B framed:0 :\n")
    assert linking_number(d, "A", "B") == 0


def test_hopf_linking_one():
    assert linking_number(hopf(), "K1", "K2") == 1


def test_dotted_linking_by_piercing_count():
    # mazur: framed K pierces disk of D with signs +,+,-  -> net +1
    assert linking_number(mazur(), "K", "D") == 1
    assert linking_number(mazur(), "D", "K") == 1


def test_linking_errors():
    d = mazur()
    with pytest.raises(DiagramError):
        linking_number(d, "K", "K")
    dd = parse_ddc("diagram t\ncomponent D dotted :\ncomponent E dotted :\n")
    with pytest.raises(DiagramError):
        linking_number(dd, "D", "E")


def test_linking_matrix_single_unknot():
    d = parse_ddc("diagram u\ncomponent K framed:0 :\n")
    assert linking_matrix(d) == IntMatrix([[0]])


def test_linking_matrix_hopf():
    assert linking_matrix(hopf()) == IntMatrix([[0, 1], [1, 0]])


def test_linking_matrix_split_pm1():
    d = parse_ddc("diagram s\ncomponent A framed:1 :\ncomponent B framed:-1 :\n")
    assert linking_matrix(d) == IntMatrix([[1, 0], [0, -1]])


def test_linking_matrix_symmetric_under_relabeling():
    d = hopf()
    m = linking_matrix(d)
    assert m == m.transpose()
    # swap component names; matrix is conjugated by the permutation
    text = HOPF.replace("K1", "Z9").replace("K2", "K1").replace("Z9", "K2")
    m2 = linking_matrix(parse_ddc(text))
    assert m2 == m  # hopf matrix is symmetric under the swap


# -- push-off ---------------------------------------------------------------


def test_push_off_zero_framed_unknot():
    d = parse_ddc("diagram u\ncomponent K framed:0 :\n")
    out, copy = push_off(d, "K")
    assert linking_number(out, "K", copy) == 0
    assert len(out.crossings) == 0


def test_push_off_framed_2_adds_clasps():
    d = parse_ddc("diagram u\ncomponent K framed:2 :\n")
    out, copy = push_off(d, "K")
    assert linking_number(out, "K", copy) == 2
    assert len(out.crossings) == 4  # two clasps
    assert validate(out) == []


def test_push_off_curl_correction():
    # one positive curl (w=1) on a 0-framed unknot: one negative clasp
    text = """\
diagram curl
component K framed:0 : o u
crossing c + over=K.o under=K.u
"""
    d = parse_ddc(text)
    assert writhe(d, "K") == 1
    out, copy = push_off(d, "K")
    assert linking_number(out, "K", copy) == 0
    assert validate(out) == []


def test_push_off_copies_piercings_and_crossings():
    d = mazur()
    out, copy = push_off(d, "K")
    assert linking_number(out, copy, "D") == 1
    assert linking_number(out, "K", copy) == 0  # framing 0
    assert validate(out) == []


def test_push_off_dotted():
    # the push-off of a dotted circle is its 0-framed longitude curve
    d = mazur()
    out, copy = push_off(d, "D")
    assert out.component(copy).kind == "framed"
    assert out.component(copy).framing == 0
    assert linking_number(out, "D", copy) == 0


# -- band surgery ------------------------------------------------------------


def banded(text):
    return parse_ddc(text)


TWO_CIRCLES_ONE_BAND = """\
diagram join
component U1 surface : f
component U2 surface : t
band B1 from=U1.f to=U2.t twists=0 core=( )
"""


def test_band_joins_two_circles():
    b = banded(TWO_CIRCLES_ONE_BAND)
    out = band_surgery(b, ["B1"])
    assert len(out.surface_components) == 1
    assert not out.bands
    assert validate(out) == []


def test_coherent_self_band_splits():
    text = """\
diagram split
component U surface : f t
band B1 from=U.f to=U.t twists=0 core=( )
"""
    out = band_surgery(banded(text), ["B1"])
    assert len(out.surface_components) == 2


def test_incoherent_self_band_keeps_one():
    text = """\
diagram mobius
component U surface : f t
band B1 from=U.f to=U.t twists=1 core=( )
"""
    out = band_surgery(banded(text), ["B1"])
    assert len(out.surface_components) == 1
    # the half twist leaves one self-crossing
    assert len(out.code.crossings) == 1


def test_three_chain_two_bands():
    text = """\
diagram chain
component U1 surface : a
component U2 surface : b c
component U3 surface : d
band B1 from=U1.a to=U2.b twists=0 core=( )
band B2 from=U2.c to=U3.d twists=0 core=( )
"""
    b = banded(text)
    out = band_surgery(b, ["B1", "B2"])
    assert len(out.surface_components) == 1
    # chi bookkeeping: 3 - 2 + 1 = 2
    assert surface_euler_characteristic(b) == 2


def test_band_surgery_zero_bands_identity():
    b = banded(TWO_CIRCLES_ONE_BAND)
    assert band_surgery(b, []) is b


def test_band_core_events_duplicate():
    # band core pierces a disk: both sides pierce with cancelling signs
    text = """\
diagram weav
component D dotted :
component U1 surface : f
component U2 surface : t
band B1 from=U1.f to=U2.t twists=0 core=( p:+:D )
"""
    out = band_surgery(banded(text), ["B1"])
    merged = out.surface_components[0]
    signs = sorted(p.sign for p in out.code.piercings if p.disk == "D")
    assert signs == [-1, 1]
    assert validate(out) == []
    assert out.code.component(merged).kind == "surface"


def test_band_core_crossing_duplicates():
    text = """\
diagram weav2
component K framed:0 : z
component U1 surface : f
component U2 surface : t
band B1 from=U1.f to=U2.t twists=0 core=( x:+:under:K.z )
"""
    out = band_surgery(banded(text), ["B1"])
    assert len(out.code.crossings) == 2
    signs = sorted(x.sign for x in out.code.crossings)
    assert signs == [-1, 1]
    assert validate(out) == []


# -- vertices ----------------------------------------------------------------


VERTEX_PAIR = """\
diagram vx
component U1 surface : a
component U2 surface : b
vertex v1 a=U1.a b=U2.b sign=+ marking=ac
"""


def test_resolve_no_vertices_identity():
    b = banded(TWO_CIRCLES_ONE_BAND)
    assert resolve_vertices(b, "positive") is b


def test_resolve_positive_makes_marked_crossing():
    b = banded(VERTEX_PAIR)
    out = resolve_vertices(b, "positive")
    assert not out.vertices
    (x,) = out.code.crossings
    assert x.sign == 1
    assert x.over[0] == "U1"  # marking ac + positive: a-strand in front


def test_resolve_negative_flips():
    out = resolve_vertices(banded(VERTEX_PAIR), "negative")
    (x,) = out.code.crossings
    assert x.sign == -1
    assert x.over[0] == "U2"


def test_bad_direction():
    with pytest.raises(DiagramError):
        resolve_vertices(banded(VERTEX_PAIR), "sideways")


# -- euler characteristic ------------------------------------------------------


def test_euler_sphere():
    text = "diagram sph\ncomponent U surface :\n"
    assert surface_euler_characteristic(banded(text)) == 2


def test_euler_torus_pattern():
    # 1 circle, 2 bands arranged so the final resolution is 1 component
    text = """\
diagram torus
component U surface : a b c d
band B1 from=U.a to=U.c twists=0 core=( )
band B2 from=U.b to=U.d twists=0 core=( )
"""
    b = banded(text)
    assert surface_euler_characteristic(b) == 0


def test_euler_rp2_pattern():
    text = """\
diagram rp2
component U surface : a b
band B1 from=U.a to=U.b twists=1 core=( )
"""
    assert surface_euler_characteristic(banded(text)) == 1


# -- unions -------------------------------------------------------------------


def test_union_with_empty_identity():
    d = hopf()
    out = disjoint_union(d, parse_ddc("diagram empty\n"))
    assert canonically_equal(out, d)


def test_union_renames_clashes():
    d = hopf()
    out = disjoint_union(d, d)
    assert len(out.components) == 4
    assert validate(out) == []


def test_pair_connected_sum():
    b1 = banded("diagram a\ncomponent U surface :\n")
    b2 = banded("diagram b\ncomponent V surface :\n")
    out = pair_connected_sum(b1, "U", b2, "V")
    assert len(out.bands) == 1
    assert len(out.surface_components) == 2
    assert surface_groups(out) == [frozenset({"U", "V"})]
    assert surface_euler_characteristic(out) == 2  # sphere # sphere


def test_pair_connected_sum_rejects_nonsurface():
    b1 = banded("diagram a\ncomponent U surface :\n")
    k = parse_ddc("diagram k\ncomponent K framed:0 :\n")
    from handlecalc.codes import as_banded

    with pytest.raises(DiagramError):
        pair_connected_sum(b1, "U", as_banded(k), "K")
