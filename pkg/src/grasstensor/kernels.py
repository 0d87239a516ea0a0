"""Backend selection for the exact integer kernels.

The compiled ``_speedups`` extension is used when it imports; otherwise (or
when ``GRASSTENSOR_PURE_PYTHON=1``) the pure-Python twins in ``_pykernels``
serve every call.  Compiled calls that overflow int64 are transparently
redone with Python integers, so results never depend on the backend.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

from . import _pykernels

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None

# inputs beyond this magnitude skip the int64 path entirely
_SAFE = 1 << 62

_force_python = os.environ.get("GRASSTENSOR_PURE_PYTHON", "") not in ("", "0")


def backend() -> str:
    return "python" if (_speedups is None or _force_python) else "compiled"


def compiled_available() -> bool:
    return _speedups is not None


@contextmanager
def use_backend(name: str):
    """Temporarily force ``"python"`` or ``"compiled"`` kernels."""
    global _force_python
    if name not in ("python", "compiled"):
        raise ValueError(name)
    if name == "compiled" and _speedups is None:
        raise RuntimeError("compiled kernels are not built")
    old = _force_python
    _force_python = name == "python"
    try:
        yield
    finally:
        _force_python = old


def _as_int64(a):
    """int64 copy of an integer array if every entry is safely small, else None."""
    a = np.asarray(a)
    if a.dtype.kind in "iub":
        if a.size and int(np.abs(a.astype(np.int64)).max()) >= _SAFE:
            return None
        return np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros(a.shape, dtype=np.int64)
    flat = a.ravel().tolist()
    if all(-_SAFE < int(v) < _SAFE for v in flat):
        return np.array(flat, dtype=np.int64).reshape(a.shape)
    return None


def det_int(m) -> int:
    """Exact determinant of a square integer matrix."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got shape {a.shape}")
    if backend() == "compiled":
        small = _as_int64(a)
        if small is not None:
            val = _speedups.det(small)
            if val is not None:
                return int(val)
    return _pykernels.det_int(a.tolist())


def minors_int(m, cols) -> np.ndarray:
    """Determinants of ``m[:, cols[r]]`` for every row of ``cols`` (0-based columns).

    Returns int64 when all values fit, otherwise an object array of Python ints.
    """
    cols = np.ascontiguousarray(cols, dtype=np.intp)
    count = cols.shape[0]
    out = np.zeros(count, dtype=np.int64)
    overflow = np.zeros(count, dtype=np.uint8)
    small = _as_int64(m) if backend() == "compiled" else None
    if small is None:
        mat = np.asarray(m).tolist()
        vals = [_pykernels.det_int([[row[c] for c in sel] for row in mat]) for sel in cols.tolist()]
        return _pack(vals)
    _speedups.minors(small, cols, out, overflow)
    if not overflow.any():
        return out
    res = out.astype(object)
    mat = np.asarray(m).tolist()
    for r in np.flatnonzero(overflow):
        sel = cols[r].tolist()
        res[r] = _pykernels.det_int([[row[c] for c in sel] for row in mat])
    return res


def _pack(vals) -> np.ndarray:
    if all(-_SAFE < v < _SAFE for v in vals):
        return np.array(vals, dtype=np.int64)
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def rank_int(m) -> int:
    """Exact rank over Q of an integer matrix."""
    a = np.asarray(m)
    if a.ndim != 2 or a.size == 0:
        return 0
    if backend() == "compiled":
        small = _as_int64(a)
        if small is not None:
            if small.shape[0] > small.shape[1]:
                small = np.ascontiguousarray(small.T)
            val = _speedups.rank(small)
            if val is not None:
                return int(val)
    return _pykernels.rank(a)
