from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from grasstensor.errors import DimensionError, ParseError
from grasstensor.tensor3 import (
    Tensor3,
    delete_zero_slices,
    equal_up_to_scale,
    flatten,
    from_json,
    mode_multiply,
    multilinear_multiply,
    nonzero_slices,
    to_json,
    unflatten,
)

arrays = st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: hnp.arrays(np.int64, s, elements=st.integers(-5, 5))
)


def test_flattening_layout():
    t = Tensor3(np.arange(2 * 3 * 4).reshape(2, 3, 4))
    # mode 1: row i, column (k-1)*n2 + j
    assert flatten(t, 1)[1, 2 * 3 + 1] == t.entry(2, 2, 3)
    # mode 2: row j, column (i-1)*n3 + k
    assert flatten(t, 2)[2, 1 * 4 + 3] == t.entry(2, 3, 4)
    # mode 3: row k, column (j-1)*n1 + i
    assert flatten(t, 3)[3, 2 * 2 + 0] == t.entry(1, 3, 4)


@settings(max_examples=40, deadline=None)
@given(arrays, st.sampled_from([1, 2, 3]))
def test_unflatten_inverts_flatten(a, mode):
    t = Tensor3(a)
    assert unflatten(flatten(t, mode), mode, t.dims) == t


@settings(max_examples=40, deadline=None)
@given(arrays, st.sampled_from([1, 2, 3]), st.integers(0, 1000))
def test_mode_product_acts_on_flattening(a, mode, seed):
    t = Tensor3(a)
    m = np.random.default_rng(seed).integers(-3, 4, size=(2, t.dims[mode - 1]))
    assert np.array_equal(flatten(mode_multiply(t, m, mode), mode), m @ flatten(t, mode))


def test_multilinear_multiply_composes(rng):
    t = Tensor3(rng.integers(-3, 4, size=(2, 3, 2)))
    a, b = rng.integers(-2, 3, size=(3, 2)), rng.integers(-2, 3, size=(2, 3))
    lhs = multilinear_multiply(b, None, None, multilinear_multiply(a, None, None, t))
    assert lhs == multilinear_multiply(b @ a, None, None, t)


def test_mode_multiply_rejects_mismatch():
    with pytest.raises(DimensionError):
        mode_multiply(Tensor3(np.zeros((2, 2, 2))), np.eye(3), 1)
    with pytest.raises(DimensionError):
        flatten(Tensor3(np.zeros((2, 2, 2))), 4)


def test_zero_slices():
    a = np.zeros((3, 2, 2), dtype=np.int64)
    a[0, 1, 1] = 4
    a[2, 0, 1] = -1
    t = Tensor3(a)
    assert nonzero_slices(t, 1) == [1, 3]
    assert delete_zero_slices(t).dims == (2, 2, 1)
    f = Tensor3(a.astype(float) + 1e-14 * (a == 0))
    assert nonzero_slices(f, 1) == [1, 3]


def test_equal_up_to_scale_exact_and_float():
    a = Tensor3(np.array([[[1, 2], [0, 3]]], dtype=object))
    b = Tensor3(np.array([[[Fraction(-2), -4], [0, -6]]], dtype=object))
    ok, lam = equal_up_to_scale(b, a)
    assert ok and lam == -2
    assert not equal_up_to_scale(Tensor3(np.array([[[1, 2], [0, 4]]])), a)[0]
    ok, lam = equal_up_to_scale(Tensor3(a.to_float() * 3.0), a)
    assert ok and abs(lam - 3.0) < 1e-12


def test_json_round_trips():
    exact = Tensor3(np.array([[[Fraction(1, 3), 2], [0, Fraction(-5, 2)]]], dtype=object))
    assert from_json(to_json(exact)) == exact
    ints = Tensor3(np.arange(8).reshape(2, 2, 2))
    obj = to_json(ints)
    assert obj["entries"][1] == "1" and from_json(obj) == ints
    floats = Tensor3(np.linspace(0, 1, 8).reshape(2, 2, 2))
    assert from_json(to_json(floats)) == floats
    cplx = Tensor3(np.array([[[1 + 2j, 0], [3, -1j]]]))
    assert np.allclose(from_json(to_json(cplx)).data, cplx.data)


@pytest.mark.parametrize(
    "obj", [{"dims": [1, 1]}, {"dims": [1, 1, 2], "entries": ["1"]}, {"dims": [1, 1, 2], "entries": ["1", 2.0]}]
)
def test_json_rejects_malformed(obj):
    with pytest.raises(ParseError):
        from_json(obj)


def _reference_product(ms, t):
    # entrywise Fraction sum, independent of the integer path
    out = t.to_exact()
    for ax, m in enumerate(ms):
        m = np.array([[Fraction(v) for v in row] for row in m], dtype=object)
        out = np.moveaxis(np.tensordot(m, out, axes=([1], [ax])), 0, ax)
    return out


def test_exact_multiply_with_fractions(rng):
    t = Tensor3(rng.integers(-4, 5, size=(3, 2, 4)))
    ms = [
        [[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(n)] for _ in range(m)]
        for m, n in ((2, 3), (3, 2), (1, 4))
    ]
    got = multilinear_multiply(*(np.array(m, dtype=object) for m in ms), t)
    assert got.is_exact
    assert np.array_equal(got.to_exact(), _reference_product(ms, t))


def test_exact_multiply_promotes_past_int64():
    big = 1 << 40
    t = Tensor3(np.full((2, 2, 2), big, dtype=np.int64))
    m = np.full((2, 2), big, dtype=np.int64)
    got = multilinear_multiply(m, m, None, t)
    assert got.data.dtype == object
    assert got.data[0, 0, 0] == 4 * big**3


def test_exact_multiply_stays_int64_when_integral():
    t = Tensor3(np.arange(8, dtype=np.int64).reshape(2, 2, 2))
    got = multilinear_multiply(np.array([[Fraction(1, 2), Fraction(1, 2)]], dtype=object), None, None, Tensor3(2 * t.data))
    assert got.data.dtype == np.int64
    assert np.array_equal(got.data[0], t.data[0] + t.data[1])


def test_mixed_float_factor_gives_float():
    t = Tensor3(np.ones((2, 2, 2), dtype=np.int64))
    got = multilinear_multiply(np.eye(2) * 0.5, None, None, t)
    assert not got.is_exact and got.data[0, 0, 0] == 0.5
