import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handlecalc.ddc import parse_ddc
from handlecalc.invariants import (
    AbelianGroup,
    Presentation,
    abelianization,
    alternating_group,
    close_group,
    cyclic_reduce,
    hom_count,
    homology_4manifold,
    pi1_presentation,
    piercing_matrix,
    symmetric_group,
    tietze_simplify,
)
from handlecalc.snf import IntMatrix

from test_ddc import MAZUR


def groups(hs):
    return [str(h) for h in hs]


def word(s):
    """tiny helper: 'x y X' -> ((x,1),(y,1),(x,-1)) using case for inverse."""
    out = []
    for tok in s.split():
        if tok[0].isupper():
            out.append((tok.lower(), -1))
        else:
            out.append((tok, 1))
    return tuple(out)


# -- homology ----------------------------------------------------------------


def test_empty_closed_is_s4():
    d = parse_ddc("diagram s4\nr3 0\n")
    assert groups(homology_4manifold(d, closed=True)) == ["Z", "0", "0", "0", "Z"]


def test_dotted_unknot_open():
    d = parse_ddc("diagram u\ncomponent D dotted :\n")
    assert groups(homology_4manifold(d, closed=False)) == ["Z", "Z", "0", "0", "0"]


def test_dotted_unknot_closed_is_s1xs3():
    d = parse_ddc("diagram u\nr3 1\ncomponent D dotted :\n")
    assert groups(homology_4manifold(d, closed=True)) == ["Z", "Z", "0", "Z", "Z"]


def test_hopf_closed_is_s2xs2():
    from test_ddc import HOPF

    d = parse_ddc(HOPF.replace("diagram hopf", "diagram hopf\nr3 0"))
    assert groups(homology_4manifold(d, closed=True)) == ["Z", "0", "Z^2", "0", "Z"]


def test_mazur_double_closed_is_s4():
    # double of the Mazur manifold: add the 0-framed meridian, r3 = 1
    text = MAZUR + (
        "r3 1\n"
        "component J framed:0 : m1 m2\n"
        "crossing jx1 + over=J.m1 under=K.k1 \n"
        "crossing jx2 + over=K.k2 under=J.m2\n"
    )
    text = text.replace(
        "component K framed:0 : p1 ao p2 bo p3 au bu",
        "component K framed:0 : p1 ao p2 bo p3 au bu k1 k2",
    )
    d = parse_ddc(text)
    assert groups(homology_4manifold(d, closed=True)) == ["Z", "0", "0", "0", "Z"]


def test_mazur_open_contractible():
    d = parse_ddc(MAZUR)
    assert groups(homology_4manifold(d, closed=False)) == ["Z", "0", "0", "0", "0"]


def test_piercing_matrix_mazur():
    assert piercing_matrix(parse_ddc(MAZUR)) == IntMatrix([[1]])


# -- presentations -------------------------------------------------------------


def test_pi1_dotted_unknot():
    d = parse_ddc("diagram u\ncomponent D dotted :\n")
    p = pi1_presentation(d)
    assert p.generators == ("D",)
    assert p.relators == ()
    assert str(abelianization(p)) == "Z"


def test_pi1_mazur():
    p = pi1_presentation(parse_ddc(MAZUR))
    assert p.generators == ("D",)
    (rel,) = p.relators
    assert sum(e for _, e in rel) == 1
    assert abelianization(p).is_trivial


def test_abelianization_examples():
    assert str(abelianization(Presentation(("x",), (word("x x"),)))) == "Z/2"
    assert str(abelianization(Presentation(("x", "y"), ()))) == "Z^2"


def test_tietze_kills_free_generator():
    p = Presentation(("x", "y"), (word("y"),))
    q = tietze_simplify(p, 50)
    assert q.generators == ("x",)
    assert q.relators == ()


def test_tietze_free_reduction():
    p = Presentation(("x",), (word("x X"),))
    q = tietze_simplify(p, 50)
    assert q.relators == ()


def test_tietze_mazur_trivializes():
    p = pi1_presentation(parse_ddc(MAZUR))
    q = tietze_simplify(p, 50)
    assert q.generators == ()
    assert q.relators == ()


def test_cyclic_reduce():
    assert cyclic_reduce(word("X y x")) == word("y")


# -- permutation groups ---------------------------------------------------------


def test_alternating_group_orders():
    assert len(close_group(alternating_group(4))) == 12
    assert len(close_group(alternating_group(5))) == 60
    assert len(close_group(symmetric_group(3))) == 6


def test_hom_count_trivial_presentation():
    p = Presentation((), ())
    assert hom_count(p, alternating_group(5)) == (1, 0)


def test_hom_count_z2_into_a5():
    # identity plus 15 involutions
    p = Presentation(("x",), (word("x x"),))
    assert hom_count(p, alternating_group(5)) == (16, 0)


def test_hom_count_free_group_surjections():
    p = Presentation(("x", "y"), ())
    total, surj = hom_count(p, symmetric_group(3), order_bound=6)
    assert total == 36
    assert surj > 0


def test_hom_count_invariant_under_tietze():
    p = Presentation(("x", "y"), (word("x y x Y X y"), word("x x x")))
    q = tietze_simplify(p, 100)
    assert hom_count(p, alternating_group(4), order_bound=12) == hom_count(
        q, alternating_group(4), order_bound=12
    )


# -- property: abelianized pi1 matches H1 ---------------------------------------


@given(st.integers(0, 3), st.integers(0, 3), st.data())
@settings(max_examples=50, deadline=None)
def test_h1_matches_pi1_abelianized(nd, nf, data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    from handlecalc.randgen import random_kirby_diagram

    d = random_kirby_diagram(rng, nd, nf, max_crossings=4, max_piercings=4)
    h1 = homology_4manifold(d, closed=False)[1]
    ab = abelianization(pi1_presentation(d))
    assert str(h1) == str(ab)
