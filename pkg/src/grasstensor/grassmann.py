"""Trifocal Grassmann tensors from three projection matrices.

The entry at ``(I, J, K)`` is the maximal minor of ``[P_1^T | P_2^T | P_3^T]``
on the columns *not* listed in I (block 1), J (block 2), K (block 3), taken
block by block in ascending order, times the sign

    prod_j (-1) ** (sum(chosen_j) - alpha_j * (alpha_j + 1) / 2)

with chosen positions counted 1-based inside each block.  This is the sign of
the shuffle moving each block's chosen columns in front of the rest, and it
makes a change of basis ``H_j`` in view j act on mode j through
``compound(H_j^{-1}, s_j + 1)^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import kernels
from .errors import DimensionError
from .exact_linalg import RationalMatrix, compound, rank
from .geometry import DimensionInvariants, ProjectionSetup, invariants
from .multiindex import complement, subsets
from .tensor3 import Tensor3

SIGN_CONVENTION = "block-ascending-v1"

_SAFE = 1 << 62


@dataclass(frozen=True)
class GrassmannTensor:
    tensor: Tensor3
    setup: ProjectionSetup
    invariants: DimensionInvariants

    def sidecar(self) -> dict:
        return {
            "setup_hash": self.setup.digest(),
            "profile": list(self.setup.alphas),
            "dims": list(self.tensor.dims),
            "sign_convention": SIGN_CONVENTION,
        }


def _view_selections(h: int, alpha: int):
    """Chosen column sets (0-based, ascending) and shuffle signs, in lex order of the complements."""
    rows = subsets(h + 1, h + 1 - alpha)
    chosen = [tuple(c - 1 for c in complement(I, h + 1)) for I in rows]
    signs = [(-1) ** ((sum(c) + len(c)) - alpha * (alpha + 1) // 2) for c in chosen]
    return chosen, np.array(signs, dtype=np.int64)


def _block_scales(setup: ProjectionSetup):
    """Integer version of each ``P_j^T`` and its common denominator."""
    out = []
    for p in setup.projections:
        a = p.T.array
        d = lcm(*(v.denominator for v in a.ravel()))
        out.append((np.array([[int(v * d) for v in row] for row in a.tolist()], dtype=object), d))
    return out


def _is_monomial(blocks) -> bool:
    return all(int(np.count_nonzero(b != 0, axis=0).max(initial=0)) <= 1 for b, _ in blocks)


def build(setup: ProjectionSetup, method: str = "auto") -> GrassmannTensor:
    """Exact Grassmann tensor of ``setup``.

    ``method`` is ``"minors"`` (one exact determinant per entry),
    ``"monomial"`` (closed-form determinants, valid only when every column of
    the stacked matrix has at most one nonzero entry, as for canonical
    setups) or ``"auto"`` (monomial when applicable).
    """
    blocks = _block_scales(setup)
    if method == "auto":
        method = "monomial" if _is_monomial(blocks) and setup.k < 62 else "minors"
    if method == "monomial":
        if not _is_monomial(blocks):
            raise DimensionError("monomial construction needs at most one nonzero per column")
        data = _build_monomial(setup, blocks)
    elif method == "minors":
        data = _build_minors(setup, blocks)
    else:
        raise ValueError(f"unknown build method {method!r}")
    scale = 1
    for (_, d), a in zip(blocks, setup.alphas):
        scale *= d**a
    if scale != 1:
        obj = np.empty(data.shape, dtype=object)
        for idx, v in np.ndenumerate(data):
            obj[idx] = Fraction(int(v), scale)
        data = obj
    return GrassmannTensor(Tensor3(data), setup, invariants(setup))


def _build_minors(setup: ProjectionSetup, blocks) -> np.ndarray:
    stacked = np.hstack([b for b, _ in blocks])
    offsets = np.cumsum([0] + [b.shape[1] for b, _ in blocks])
    sels, signs = [], []
    for j, (hj, a) in enumerate(zip(setup.h, setup.alphas)):
        chosen, sg = _view_selections(hj, a)
        sels.append(np.array(chosen, dtype=np.intp).reshape(len(chosen), a) + offsets[j])
        signs.append(sg)
    n = tuple(len(s) for s in sels)
    cols = np.concatenate(
        [
            np.broadcast_to(sels[0][:, None, None, :], n + (sels[0].shape[1],)),
            np.broadcast_to(sels[1][None, :, None, :], n + (sels[1].shape[1],)),
            np.broadcast_to(sels[2][None, None, :, :], n + (sels[2].shape[1],)),
        ],
        axis=3,
    ).reshape(-1, setup.k + 1)
    vals = kernels.minors_int(stacked, cols).reshape(n)
    sign = signs[0][:, None, None] * signs[1][None, :, None] * signs[2][None, None, :]
    if vals.dtype == object:
        return vals * sign.astype(object)
    return vals * sign


def _popcount(x: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(x).astype(np.int64)
    x = x.astype(np.int64)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


def _cross_inversions(a: np.ndarray, b: np.ndarray, k1: int) -> np.ndarray:
    """#{(x in A, y in B): x > y} for row bitmasks, broadcast over a[:, None], b[None, :]."""
    out = np.zeros((a.size, b.size), dtype=np.int64)
    for y in range(k1):
        above = _popcount(a >> (y + 1))
        out += ((b >> y) & 1)[None, :] * above[:, None]
    return out


def _build_monomial(setup: ProjectionSetup, blocks) -> np.ndarray:
    k1 = setup.k + 1
    masks, values = [], []
    for (b, _), hj, a in zip(blocks, setup.h, setup.alphas):
        chosen, sg = _view_selections(hj, a)
        row_of = [int(np.flatnonzero(b[:, c] != 0)[0]) if np.any(b[:, c] != 0) else -1 for c in range(b.shape[1])]
        m = np.zeros(len(chosen), dtype=np.int64)
        v = np.zeros(len(chosen), dtype=object)
        for p, cols in enumerate(chosen):
            rows = [row_of[c] for c in cols]
            if -1 in rows or len(set(rows)) != len(rows):
                continue
            inv = sum(1 for x in range(len(rows)) for y in range(x + 1, len(rows)) if rows[x] > rows[y])
            val = int(sg[p]) * (-1) ** inv
            for c, r in zip(cols, rows):
                val *= int(b[r, c])
            m[p] = sum(1 << r for r in rows)
            v[p] = val
        masks.append(m)
        values.append(v)
    full = (1 << k1) - 1
    ok = (masks[0][:, None, None] | masks[1][None, :, None] | masks[2][None, None, :]) == full
    parity = (
        _cross_inversions(masks[0], masks[1], k1)[:, :, None]
        + _cross_inversions(masks[0], masks[2], k1)[:, None, :]
        + _cross_inversions(masks[1], masks[2], k1)[None, :, :]
    ) & 1
    small = all(all(abs(int(x)) < (1 << 20) for x in v) for v in values)
    if small:
        vs = [v.astype(np.int64) for v in values]
    else:
        vs = values
    prod = vs[0][:, None, None] * vs[1][None, :, None] * vs[2][None, None, :]
    sign = 1 - 2 * parity
    out = np.where(ok, prod * (sign if small else sign.astype(object)), 0)
    if not small:
        out = out.astype(object)
    return out


# -- correspondences ------------------------------------------------------------


def plucker_of_subspace(basis) -> np.ndarray:
    """Plücker vector (all maximal minors, lex order of row sets) of a column basis."""
    basis = basis if isinstance(basis, RationalMatrix) else RationalMatrix(basis)
    p = basis.cols
    if rank(basis) != p:
        raise DimensionError("subspace basis is rank deficient")
    return compound(basis, p).array[:, 0].copy()


def contract(t: Tensor3, p1, p2, p3):
    """``sum T[I,J,K] p1[I] p2[J] p3[K]``, exact for exact inputs."""
    data = t.to_exact() if t.is_exact else t.data
    res = np.tensordot(np.asarray(p3, dtype=object), data, axes=([0], [2]))
    res = np.tensordot(np.asarray(p2, dtype=object), res, axes=([0], [1]))
    return np.tensordot(np.asarray(p1, dtype=object), res, axes=([0], [0])).item()


@dataclass
class CorrespondenceCheck:
    residual: Fraction
    point: list
    resamples: int
    bases: tuple


def _sample_point(k: int, rng) -> RationalMatrix:
    while True:
        x = rng.integers(-5, 6, size=(k + 1, 1))
        if np.any(x):
            return RationalMatrix(x.tolist())


def verify_correspondence(gt: GrassmannTensor, rng: np.random.Generator, point=None, corresponding: bool = True):
    """Contract the tensor with Plücker vectors of sampled subspaces.

    With ``corresponding=True`` each ``S_j`` passes through ``P_j X`` for a
    common point X, so the contraction must vanish exactly.  Points landing in
    a camera center are redrawn (counted in ``resamples``).
    """
    setup = gt.setup
    resamples = 0
    X = RationalMatrix(point) if point is not None else _sample_point(setup.k, rng)
    if X.shape == (1, setup.k + 1):
        X = X.T
    while corresponding and any((p @ X).is_zero() for p in setup.projections):
        resamples += 1
        X = _sample_point(setup.k, rng)
    bases = []
    for p, sj in zip(setup.projections, gt.invariants.s):
        h1 = p.rows
        while True:
            extra = rng.integers(-5, 6, size=(h1, sj + (0 if corresponding else 1)))
            cols = RationalMatrix(extra.tolist())
            if corresponding:
                cols = RationalMatrix(np.hstack([(p @ X).array, cols.array])) if sj else p @ X
            if rank(cols) == sj + 1:
                break
        bases.append(cols)
    pl = [plucker_of_subspace(b) for b in bases]
    res = contract(gt.tensor, *pl)
    return CorrespondenceCheck(Fraction(res), [row[0] for row in X.tolist()], resamples, tuple(bases))
