from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasstensor.errors import DimensionError, ParseError
from grasstensor.exact_linalg import (
    RationalMatrix,
    compound,
    det,
    intersect_column_spaces,
    nullspace,
    random_invertible,
    rank,
    solve,
    to_rational,
)
from grasstensor.multiindex import binom


@pytest.mark.parametrize(
    "raw, want",
    [(3, Fraction(3)), ("-2/6", Fraction(-1, 3)), ("0.25", Fraction(1, 4)), (0.5, Fraction(1, 2)), (np.int64(7), Fraction(7))],
)
def test_to_rational(raw, want):
    assert to_rational(raw) == want


@pytest.mark.parametrize("raw", ["1/0", "abc", True, None])
def test_to_rational_rejects(raw):
    with pytest.raises(ParseError):
        to_rational(raw)


def test_small_and_large_determinants_agree(backend):
    a = RationalMatrix([["1/2", 3, 0, 1], [2, "-1/3", 4, 0], [0, 1, 1, "5/7"], [1, 0, 2, 3]])
    # cofactor expansion along the first row as an independent oracle
    def cof(m):
        rows = m.tolist()
        if len(rows) == 1:
            return rows[0][0]
        return sum(
            (-1) ** c * rows[0][c] * cof(RationalMatrix([r[:c] + r[c + 1 :] for r in rows[1:]]))
            for c in range(len(rows))
        )
    assert det(a) == cof(a)


def test_inverse_and_solve(rng):
    a = random_invertible(5, rng)
    assert a @ a.inv() == RationalMatrix.identity(5)
    b = RationalMatrix(rng.integers(-3, 4, size=(5, 2)).tolist())
    assert a @ solve(a, b) == b


def test_solve_requires_full_column_rank():
    a = RationalMatrix([[1, 2], [2, 4]])
    with pytest.raises(DimensionError):
        solve(a, RationalMatrix([[1], [2]]))


def test_nullspace_dimension(backend):
    a = RationalMatrix([[1, 2, 3], [2, 4, 6]])
    ker = nullspace(a)
    assert ker.shape == (3, 2)
    assert (a @ ker).is_zero()
    assert nullspace(RationalMatrix.identity(3)).shape == (3, 0)


def test_intersection_of_planes():
    a = RationalMatrix([[1, 0], [0, 1], [0, 0]])
    b = RationalMatrix([[0, 0], [1, 0], [0, 1]])
    meet = intersect_column_spaces(a, b)
    assert meet.cols == 1 and rank(meet) == 1
    assert meet[0, 0] == 0 and meet[2, 0] == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_compound_is_multiplicative(seed, p):
    rng = np.random.default_rng(seed)
    a = RationalMatrix(rng.integers(-3, 4, size=(4, 4)).tolist())
    b = RationalMatrix(rng.integers(-3, 4, size=(4, 4)).tolist())
    assert compound(a @ b, p) == compound(a, p) @ compound(b, p)


def test_compound_shape_and_inverse(rng):
    h = random_invertible(4, rng)
    c = compound(h, 2)
    assert c.shape == (binom(4, 2), binom(4, 2))
    assert compound(h.inv(), 2) == c.inv()
    assert compound(h, 4)[0, 0] == det(h)


def test_compound_of_rectangular_matrix():
    m = RationalMatrix([[1, 0], [0, 1], [2, 3]])
    # the 2x2 minors of a 3x2 matrix give its Plucker vector
    assert [v for v in compound(m, 2).array[:, 0]] == [1, 3, -2]


def test_matrix_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        RationalMatrix([1, 2, 3])
    with pytest.raises(DimensionError):
        RationalMatrix.identity(2) @ RationalMatrix.identity(3)
