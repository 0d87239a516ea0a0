"""Dense order-3 tensors, their flattenings and multilinear multiplication.

A :class:`Tensor3` wraps a numpy array of shape ``(n1, n2, n3)``.  Exact
tensors hold Python ints / ``Fraction`` (object dtype) or int64; numerical
tensors hold float64 or complex128.  Array storage is 0-based, while every
index handed back to callers (slice lists, zero rows) is 1-based.

Flattening layout (cyclic in ``(i, j, k)``)::

    mode 1: row i, column (k-1)*n2 + j
    mode 2: row j, column (i-1)*n3 + k
    mode 3: row k, column (j-1)*n1 + i
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import DimensionError, ParseError
from .exact_linalg import RationalMatrix, to_rational

# axis order fed to reshape for each flattening
_FLAT_AXES = {1: (0, 2, 1), 2: (1, 0, 2), 3: (2, 1, 0)}

ZERO_TOL = 1e-12


class Tensor3:
    __slots__ = ("data",)

    def __init__(self, data):
        a = np.asarray(data)
        if a.ndim != 3:
            raise DimensionError(f"order-3 tensor needs a 3-dimensional array, got shape {a.shape}")
        self.data = a

    @classmethod
    def zeros(cls, dims, exact: bool = True) -> "Tensor3":
        if exact:
            return cls(np.zeros(dims, dtype=np.int64))
        return cls(np.zeros(dims))

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(d) for d in self.data.shape)

    @property
    def is_exact(self) -> bool:
        return self.data.dtype.kind in "iuO"

    def entry(self, i: int, j: int, k: int):
        """Entry at 1-based position ``(i, j, k)``."""
        return self.data[i - 1, j - 1, k - 1]

    def to_float(self) -> np.ndarray:
        if self.data.dtype.kind == "O":
            return np.vectorize(float, otypes=[float])(self.data) if self.data.size else np.zeros(self.dims)
        if self.data.dtype.kind == "c":
            return self.data
        return self.data.astype(float)

    def to_exact(self) -> np.ndarray:
        """Object array of Fractions (exact tensors only)."""
        if not self.is_exact:
            raise TypeError("tensor holds floating-point data")
        out = np.empty(self.dims, dtype=object)
        for idx, v in np.ndenumerate(self.data):
            out[idx] = to_rational(v)
        return out

    def is_zero(self, tol: float = ZERO_TOL) -> bool:
        if self.data.size == 0:
            return True
        if self.is_exact:
            return not bool(np.any(self.data != 0))
        return float(np.abs(self.data).max()) == 0.0

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_float().ravel()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and bool(np.all(self.data == other.data))

    def __repr__(self) -> str:
        kind = "exact" if self.is_exact else str(self.data.dtype)
        return f"Tensor3({self.dims}, {kind})"


def _check_mode(mode: int) -> int:
    if mode not in (1, 2, 3):
        raise DimensionError(f"mode must be 1, 2 or 3, got {mode!r}")
    return mode


def flatten(t: Tensor3, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding as a 2-D array (see module docstring for layout)."""
    _check_mode(mode)
    a = t.data
    n = a.shape[mode - 1]
    return a.transpose(_FLAT_AXES[mode]).reshape(n, -1)


def unflatten(mat, mode: int, dims: Sequence[int]) -> Tensor3:
    _check_mode(mode)
    axes = _FLAT_AXES[mode]
    shape = tuple(dims[ax] for ax in axes)
    mat = np.asarray(mat)
    if mat.size != int(np.prod(dims)):
        raise DimensionError(f"{mat.shape} cannot unfold into {tuple(dims)}")
    return Tensor3(mat.reshape(shape).transpose(np.argsort(axes)))


def _as_array(m):
    if isinstance(m, RationalMatrix):
        return m.array
    return np.asarray(m)


def mode_multiply(t: Tensor3, m, mode: int) -> Tensor3:
    """Multiply along one mode: ``flatten(result, mode) == m @ flatten(t, mode)``."""
    _check_mode(mode)
    m = _as_array(m)
    if m.ndim != 2 or m.shape[1] != t.dims[mode - 1]:
        raise DimensionError(
            f"mode-{mode} factor of shape {m.shape} does not match tensor dims {t.dims}"
        )
    ax = mode - 1
    if m.shape[0] == 0 or 0 in t.dims:
        dims = list(t.dims)
        dims[ax] = m.shape[0]
        dtype = object if (m.dtype == object or t.data.dtype == object) else np.result_type(m, t.data)
        return Tensor3(np.zeros(dims, dtype=dtype))
    res = np.tensordot(m, t.data, axes=([1], [ax]))
    return Tensor3(np.moveaxis(res, 0, ax))


_INT64_SAFE = 1 << 62


def _is_rational_array(a: np.ndarray) -> bool:
    if a.dtype.kind in "iu":
        return True
    if a.dtype.kind != "O":
        return False
    return all(isinstance(v, (int, Fraction, np.integer)) for v in a.flat)


def _integerize(a: np.ndarray):
    """``(ints, d)`` with ``a == ints / d``; ``ints`` holds Python ints."""
    if a.dtype.kind in "iu":
        return a.astype(object), 1
    d = lcm(*(Fraction(v).denominator for v in a.flat)) if a.size else 1
    ints = np.empty(a.shape, dtype=object)
    ints.flat[:] = [int(Fraction(v) * d) for v in a.flat]
    return ints, d


def _max_abs(a: np.ndarray) -> int:
    return max((abs(int(v)) for v in a.flat), default=0)


def _int_tensordot(m: np.ndarray, t: np.ndarray, ax: int) -> np.ndarray:
    # int64 path when no partial sum can overflow, else Python ints
    bound = _max_abs(m) * _max_abs(t) * max(m.shape[1], 1)
    if bound < _INT64_SAFE:
        res = np.tensordot(m.astype(np.int64), t.astype(np.int64), axes=([1], [ax]))
    else:
        res = np.tensordot(m.astype(object), t.astype(object), axes=([1], [ax]))
    return np.moveaxis(res, 0, ax)


def _exact_multilinear(ms, t: Tensor3) -> Tensor3:
    data, d = _integerize(t.data)
    for ax, m in enumerate(ms):
        if m is None:
            continue
        mi, dm = _integerize(m)
        if mi.shape[0] == 0 or 0 in data.shape:
            shape = list(data.shape)
            shape[ax] = mi.shape[0]
            data = np.zeros(shape, dtype=object)
        else:
            data = _int_tensordot(mi, data, ax)
        d *= dm
    if d != 1 and all(int(v) % d == 0 for v in data.flat):
        data = np.floor_divide(data.astype(object), d)
        d = 1
    if d == 1:
        fits = data.size == 0 or _max_abs(data) < _INT64_SAFE
        return Tensor3(data.astype(np.int64) if fits else data.astype(object))
    out = np.empty(data.shape, dtype=object)
    out.flat[:] = [Fraction(int(v), d) for v in data.flat]
    return Tensor3(out)


def multilinear_multiply(m1, m2, m3, t: Tensor3) -> Tensor3:
    """``result[p,q,r] = sum m1[p,i] m2[q,j] m3[r,k] t[i,j,k]``.

    Any factor may be ``None`` for the identity.  Works for exact (object /
    integer) and floating-point operands alike; exact operands are multiplied
    on integers with one common denominator.
    """
    ms = [None if m is None else _as_array(m) for m in (m1, m2, m3)]
    for mode, m in enumerate(ms, start=1):
        if m is not None and (m.ndim != 2 or m.shape[1] != t.dims[mode - 1]):
            raise DimensionError(f"mode-{mode} factor of shape {m.shape} does not match tensor dims {t.dims}")
    if _is_rational_array(t.data) and all(m is None or _is_rational_array(m) for m in ms):
        return _exact_multilinear(ms, t)
    out = t
    for mode, m in enumerate(ms, start=1):
        if m is not None:
            out = mode_multiply(out, m, mode)
    return out


def _entry_zero_mask(t: Tensor3, tol: float) -> np.ndarray:
    if t.is_exact:
        return t.data == 0
    mag = np.abs(t.data)
    top = float(mag.max()) if mag.size else 0.0
    return mag <= tol * top


def nonzero_slices(t: Tensor3, mode: int, tol: float = ZERO_TOL) -> list[int]:
    """1-based indices of the slices along ``mode`` with some nonzero entry.

    Float entries count as zero when ``|x| <= tol * max|t|``.
    """
    _check_mode(mode)
    nz = ~_entry_zero_mask(t, tol)
    axes = tuple(ax for ax in range(3) if ax != mode - 1)
    keep = nz.any(axis=axes) if nz.size else np.zeros(t.dims[mode - 1], dtype=bool)
    return [int(i) + 1 for i in np.flatnonzero(keep)]


def delete_zero_slices(t: Tensor3, tol: float = ZERO_TOL) -> Tensor3:
    """Drop every all-zero slice in each of the three directions."""
    keep = [np.array(nonzero_slices(t, m, tol), dtype=np.intp) - 1 for m in (1, 2, 3)]
    return Tensor3(t.data[np.ix_(*keep)])


def equal_up_to_scale(a: Tensor3, b: Tensor3, tol: float = 1e-9):
    """Is ``a == lam * b`` for some nonzero ``lam``?  Returns ``(ok, lam)``.

    Exact tensors compare exactly; otherwise each entry must agree within
    ``tol * max|b|``.  ``lam`` is ``None`` when no scale works.  Two zero
    tensors are considered equal with ``lam = 1``.
    """
    if a.dims != b.dims:
        raise DimensionError(f"dims differ: {a.dims} vs {b.dims}")
    if a.is_exact and b.is_exact:
        fa = a.to_exact().ravel()
        fb = b.to_exact().ravel()
        nz = [i for i, v in enumerate(fb) if v != 0]
        if not nz:
            ok = all(v == 0 for v in fa)
            return ok, (Fraction(1) if ok else None)
        lam = fa[nz[0]] / fb[nz[0]]
        if lam == 0:
            return False, None
        ok = all(x == lam * y for x, y in zip(fa, fb))
        return ok, (lam if ok else None)
    fa = a.to_float().ravel() if a.is_exact else a.data.ravel()
    fb = b.to_float().ravel() if b.is_exact else b.data.ravel()
    top = float(np.abs(fb).max()) if fb.size else 0.0
    if top == 0.0:
        ok = float(np.abs(fa).max(initial=0.0)) <= tol
        return ok, (1.0 if ok else None)
    lam = np.vdot(fb, fa) / np.vdot(fb, fb)
    if abs(lam) <= tol:
        return False, None
    ok = bool(np.all(np.abs(fa - lam * fb) <= tol * abs(lam) * top))
    if np.isrealobj(fa) and np.isrealobj(fb):
        lam = float(np.real(lam))
    return ok, (lam if ok else None)


def relative_error(a, b: Tensor3) -> float:
    """``||a - b||_F / ||b||_F`` (absolute error when b is zero)."""
    fa = a.to_float() if isinstance(a, Tensor3) else np.asarray(a)
    fb = b.to_float()
    num = float(np.linalg.norm((fa - fb).ravel()))
    den = float(np.linalg.norm(fb.ravel()))
    return num / den if den > 0 else num


# -- JSON -------------------------------------------------------------------


def _encode(v):
    if isinstance(v, (Fraction, int, np.integer)):
        return str(to_rational(v))
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    return float(v)


def to_json(t: Tensor3) -> dict:
    """``{"dims": [...], "entries": [...]}`` in (i, j, k) row-major order, k fastest.

    Rationals are written as ``"p/q"`` strings, floats as JSON numbers and
    complex values as ``[re, im]`` pairs.
    """
    data = t.data
    if data.dtype.kind == "c" and not np.any(data.imag):
        data = data.real
    if data.dtype.kind in "iu":
        entries = [str(int(v)) for v in data.ravel().tolist()]
    elif data.dtype.kind == "f":
        entries = [float(v) for v in data.ravel().tolist()]
    else:
        entries = [_encode(v) for v in data.ravel().tolist()]
    return {"dims": list(t.dims), "entries": entries}


def from_json(obj: dict) -> Tensor3:
    try:
        dims = [int(d) for d in obj["dims"]]
        entries = list(obj["entries"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed tensor object: {exc}") from exc
    if len(dims) != 3 or len(entries) != int(np.prod(dims)):
        raise ParseError(f"tensor has dims {dims} but {len(entries)} entries")
    if all(isinstance(v, str) for v in entries):
        vals = [to_rational(v) for v in entries]
        if all(v.denominator == 1 for v in vals):
            ints = [v.numerator for v in vals]
            if all(abs(v) < (1 << 62) for v in ints):
                return Tensor3(np.array(ints, dtype=np.int64).reshape(dims))
            arr = np.empty(len(ints), dtype=object)
            arr[:] = ints
            return Tensor3(arr.reshape(dims))
        arr = np.empty(len(vals), dtype=object)
        arr[:] = vals
        return Tensor3(arr.reshape(dims))
    if any(isinstance(v, list) for v in entries):
        vals = [complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in entries]
        return Tensor3(np.array(vals, dtype=complex).reshape(dims))
    if any(isinstance(v, str) for v in entries):
        raise ParseError("tensor mixes rational strings and floats")
    return Tensor3(np.array(entries, dtype=float).reshape(dims))
