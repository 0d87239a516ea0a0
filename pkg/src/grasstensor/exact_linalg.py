"""Exact dense linear algebra over the rationals.

Entries are :class:`fractions.Fraction`.  Determinants and ranks clear
denominators row by row and hand the integer matrix to the kernels in
:mod:`grasstensor.kernels`; everything else (nullspaces, solves) is plain
Gauss-Jordan on fractions, which is fine at the sizes used here.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational as _RationalABC
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DimensionError, ParseError
from .multiindex import binom, subsets

Rational = Fraction


def to_rational(x) -> Fraction:
    """Exact conversion of ints, fractions, ``"p/q"`` and decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise ParseError(f"boolean {x!r} is not a rational number")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, _RationalABC):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {x!r}") from exc
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise ParseError(f"cannot interpret {x!r} as a rational number")


def format_rational(x: Fraction) -> str:
    return str(x)


class RationalMatrix:
    """Immutable dense matrix of :class:`~fractions.Fraction` entries."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        if isinstance(entries, RationalMatrix):
            self._a = entries._a
            return
        a = np.array(entries, dtype=object)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise DimensionError(f"matrix entries must be 2-dimensional, got shape {a.shape}")
        out = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            out[idx] = to_rational(v)
        out.flags.writeable = False
        self._a = out

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "RationalMatrix":
        m = cls.__new__(cls)
        arr = np.array(arr, dtype=object)
        arr.flags.writeable = False
        m._a = arr
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        a = np.full((n, n), Fraction(0), dtype=object)
        for i in range(n):
            a[i, i] = Fraction(1)
        return cls._wrap(a)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls._wrap(np.full((rows, cols), Fraction(0), dtype=object))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only object array of fractions."""
        return self._a

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._wrap(self._a.T)

    def __getitem__(self, key):
        res = self._a[key]
        if isinstance(res, np.ndarray):
            if res.ndim == 2:
                return RationalMatrix._wrap(res)
            return res.copy()
        return res

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return RationalMatrix.zeros(self.rows, other.cols)
        return RationalMatrix._wrap(self._a.dot(other._a))

    def __mul__(self, scalar) -> "RationalMatrix":
        s = to_rational(scalar)
        return RationalMatrix._wrap(self._a * s)

    __rmul__ = __mul__

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RationalMatrix._wrap(self._a + other._a)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return RationalMatrix._wrap(self._a - other._a)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._wrap(-self._a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.shape, tuple(self._a.ravel().tolist())))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in row) for row in self._a.tolist())
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return self._a.tolist()

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(v) for v in row] for row in self._a.tolist()]

    def to_float(self, dtype=float) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self._a.tolist()], dtype=dtype).reshape(self.shape)

    def is_zero(self) -> bool:
        return not any(v != 0 for v in self._a.ravel())

    def inv(self) -> "RationalMatrix":
        n = self.rows
        if n != self.cols:
            raise DimensionError(f"only square matrices are invertible, got {self.shape}")
        return solve(self, RationalMatrix.identity(n))


def hstack(mats: Sequence[RationalMatrix]) -> RationalMatrix:
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise DimensionError(f"row counts differ: {sorted(rows)}")
    return RationalMatrix._wrap(np.hstack([m.array for m in mats]))


def vstack(mats: Sequence[RationalMatrix]) -> RationalMatrix:
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise DimensionError(f"column counts differ: {sorted(cols)}")
    return RationalMatrix._wrap(np.vstack([m.array for m in mats]))


def as_matrix(m) -> RationalMatrix:
    return m if isinstance(m, RationalMatrix) else RationalMatrix(m)


def integer_rows(m) -> tuple[np.ndarray, int]:
    """Scale each row to integers; return (integer object array, product of scales)."""
    a = as_matrix(m).array
    out = np.empty(a.shape, dtype=object)
    scale = 1
    for i, row in enumerate(a.tolist()):
        d = lcm(*(v.denominator for v in row)) if row else 1
        out[i, :] = [v.numerator * (d // v.denominator) for v in row]
        scale *= d
    return out, scale


def det(m) -> Fraction:
    """Exact determinant.  Sizes up to 3 expand directly; larger ones use Bareiss."""
    m = as_matrix(m)
    if m.rows != m.cols:
        raise DimensionError(f"determinant needs a square matrix, got {m.shape}")
    a = m.array
    n = m.rows
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0, 0]
    if n == 2:
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if n == 3:
        return (
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
    ints, scale = integer_rows(m)
    return Fraction(kernels.det_int(ints), scale)


def rank(m) -> int:
    """Exact rank over Q."""
    m = as_matrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    ints, _ = integer_rows(m)
    return kernels.rank_int(ints)


def rref(m) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form and pivot columns (0-based)."""
    a = [list(row) for row in as_matrix(m).tolist()]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if rows == 0:
        return RationalMatrix.zeros(0, cols), pivots
    return RationalMatrix(a), pivots


def nullspace(m) -> RationalMatrix:
    """Basis of the right kernel as columns (``cols - rank`` of them)."""
    m = as_matrix(m)
    n = m.cols
    red, pivots = rref(m)
    free = [c for c in range(n) if c not in pivots]
    basis = np.full((n, len(free)), Fraction(0), dtype=object)
    for k, f in enumerate(free):
        basis[f, k] = Fraction(1)
        for r, p in enumerate(pivots):
            basis[p, k] = -red.array[r, f]
    return RationalMatrix._wrap(basis)


def solve(a, b) -> RationalMatrix:
    """The unique X with ``a @ X == b``; ``a`` must have full column rank."""
    a, b = as_matrix(a), as_matrix(b)
    if a.rows != b.rows:
        raise DimensionError(f"row counts differ: {a.shape} vs {b.shape}")
    red, pivots = rref(hstack([a, b]))
    n = a.cols
    if pivots[:n] != list(range(n)):
        raise DimensionError("coefficient matrix does not have full column rank")
    if any(p >= n for p in pivots):
        raise DimensionError("system is inconsistent")
    return red[:n, n:]


def column_basis(m) -> RationalMatrix:
    """Independent columns of ``m`` (the pivot columns) spanning its column space."""
    m = as_matrix(m)
    if m.cols == 0:
        return m
    _, pivots = rref(m)
    return RationalMatrix._wrap(m.array[:, pivots])


def intersect_column_spaces(a, b) -> RationalMatrix:
    """Basis (as columns) of ``col(a) ∩ col(b)``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.rows != b.rows:
        raise DimensionError(f"row counts differ: {a.shape} vs {b.shape}")
    ker = nullspace(hstack([a, -b]))
    if ker.cols == 0:
        return RationalMatrix.zeros(a.rows, 0)
    vecs = a @ ker[: a.cols, :]
    return column_basis(vecs)


def compound(m, p: int) -> RationalMatrix:
    """Matrix of all p x p minors, rows and columns in lex order of the index sets."""
    m = as_matrix(m)
    rows, cols = m.shape
    if not 1 <= p <= min(rows, cols):
        raise DimensionError(f"compound order {p} outside 1..{min(rows, cols)}")
    row_sets = subsets(rows, p)
    col_sets = np.array(subsets(cols, p), dtype=np.intp) - 1
    denom = lcm(*(v.denominator for v in m.array.ravel())) if m.array.size else 1
    scaled = np.array([[int(v * denom) for v in row] for row in m.tolist()], dtype=object)
    out = np.empty((len(row_sets), len(col_sets)), dtype=object)
    factor = Fraction(1, denom**p)
    for r, rs in enumerate(row_sets):
        sub = scaled[[i - 1 for i in rs], :]
        vals = kernels.minors_int(sub, col_sets)
        out[r, :] = [Fraction(int(v)) * factor for v in vals]
    assert out.shape == (binom(rows, p), binom(cols, p))
    return RationalMatrix._wrap(out)


def random_invertible(n: int, rng: np.random.Generator, lo: int = -5, hi: int = 5) -> RationalMatrix:
    """Random integer matrix with nonzero determinant (rejection sampling)."""
    while True:
        m = RationalMatrix(rng.integers(lo, hi + 1, size=(n, n)).tolist())
        if det(m) != 0:
            return m
