import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handlecalc.snf import (
    IntMatrix,
    determinant_divisors,
    is_unimodular,
    smith_normal_form,
)


def check_form(a):
    f = smith_normal_form(a)
    assert is_unimodular(f.left)
    assert is_unimodular(f.right)
    assert f.left * a * f.right == f.diagonal_matrix(a.rows, a.cols)
    for x, y in zip(f.d, f.d[1:]):
        assert x > 0
        assert y % x == 0
    return f


def test_single_entry():
    f = check_form(IntMatrix([[2]]))
    assert f.d == (2,)


def test_diag_2_3_becomes_1_6():
    f = check_form(IntMatrix([[2, 0], [0, 3]]))
    assert f.d == (1, 6)


def test_zero_matrix():
    f = check_form(IntMatrix.zero(2, 3))
    assert f.d == ()


def test_empty_matrix():
    f = check_form(IntMatrix([]))
    assert f.d == ()


def test_known_homology_example():
    # boundary map of RP^2-like complex
    f = check_form(IntMatrix([[2]]))
    assert f.d == (2,)
    f = check_form(IntMatrix([[1, 1], [1, -1]]))
    assert f.d == (1, 2)


def test_determinant_bareiss():
    assert IntMatrix([[2, 1], [1, 1]]).det() == 1
    assert IntMatrix([[1, 2], [2, 4]]).det() == 0
    assert IntMatrix([[0, 1], [1, 0]]).det() == -1
    with pytest.raises(ValueError):
        IntMatrix([[1, 2]]).det()


@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
@settings(max_examples=200, deadline=None)
def test_matches_determinant_divisor_oracle(rows, cols, data):
    a = IntMatrix(
        [
            [data.draw(st.integers(-5, 5)) for _ in range(cols)]
            for _ in range(rows)
        ]
    )
    f = check_form(a)
    gs = determinant_divisors(a)
    prev = 1
    expected = []
    for g in gs:
        if g == 0:
            break
        expected.append(g // prev)
        prev = g
    assert list(f.d) == expected


def test_bulk_random_agreement():
    rng = random.Random(7)
    for _ in range(500):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = IntMatrix(
            [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
        )
        check_form(a)
