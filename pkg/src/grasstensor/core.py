"""Core tensors by compact HOSVD and by pulling back the canonical core.

A core of ``T`` is a tensor ``C`` with semi-orthogonal factors ``S_j``
(``S_j^* S_j = I``) such that ``(S_1^*, S_2^*, S_3^*) . T = C`` and
``(S_1, S_2, S_3) . C = T``.  Its dimensions are the multilinear rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact_linalg import RationalMatrix
from .geometry import CanonicalTransform
from .mlrank import oracle_frank, zero_rows
from .tensor3 import (
    Tensor3,
    delete_zero_slices,
    flatten,
    multilinear_multiply,
    nonzero_slices,
    relative_error,
    to_json,
)

SEMI_ORTH_TOL = 1e-10
SVD_REL_TOL = 1e-10


@dataclass
class CoreDecomposition:
    core: Tensor3
    factors: tuple[np.ndarray, np.ndarray, np.ndarray]
    method: str
    residual: float

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.core.dims


@dataclass
class CanonicalCoreData:
    U: tuple[np.ndarray, np.ndarray, np.ndarray]
    B: tuple[np.ndarray, np.ndarray, np.ndarray]
    S: tuple[np.ndarray, np.ndarray, np.ndarray]
    Cc: Tensor3
    Tc: Tensor3


def _float_data(t: Tensor3) -> np.ndarray:
    return t.to_float() if t.is_exact else t.data


def _conj_t(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hosvd_core(t: Tensor3, ranks=None, tol: float = SVD_REL_TOL) -> CoreDecomposition:
    """Compact HOSVD.

    Singular values ``sigma > tol * sigma_max`` are kept unless ``ranks`` gives
    the truncation explicitly (useful when the exact multilinear rank is known).
    A zero tensor yields an empty ``0 x 0 x 0`` core.
    """
    data = _float_data(t)
    ft = Tensor3(data)
    factors = []
    for mode in (1, 2, 3):
        mat = flatten(ft, mode)
        n = mat.shape[0]
        if mat.size == 0 or not np.any(mat):
            factors.append(np.zeros((n, 0), dtype=data.dtype))
            continue
        u, sv, _ = np.linalg.svd(mat, full_matrices=False)
        r = int(np.sum(sv > tol * sv[0])) if ranks is None else int(ranks[mode - 1])
        factors.append(u[:, :r])
    core = multilinear_multiply(*(_conj_t(u) for u in factors), ft)
    back = multilinear_multiply(*factors, core)
    return CoreDecomposition(core, tuple(factors), "hosvd", relative_error(back, ft))


def canonical_selection_matrices(tc: Tensor3):
    """0/1 matrices whose columns are the standard vectors at the nonzero slices of each mode."""
    out = []
    for mode in (1, 2, 3):
        keep = nonzero_slices(tc, mode)
        u = np.zeros((tc.dims[mode - 1], len(keep)))
        for c, row in enumerate(keep):
            u[row - 1, c] = 1.0
        out.append(u)
    return tuple(out)


def predicted_selection_matrices(ct: CanonicalTransform):
    """Selection matrices from the zero rows predicted for the canonical tensor."""
    inv = ct.invariants
    out = []
    for mode in (1, 2, 3):
        n = inv.n[mode - 1]
        zero = set(zero_rows(inv, mode))
        keep = [r for r in range(1, n + 1) if r not in zero]
        u = np.zeros((n, len(keep)))
        for c, row in enumerate(keep):
            u[row - 1, c] = 1.0
        out.append(u)
    return tuple(out)


def canonical_core(tc: Tensor3) -> Tensor3:
    """Drop the zero slices of the canonical tensor in all three directions (exact)."""
    return delete_zero_slices(tc)


def canonical_tensor(ct: CanonicalTransform, t: Tensor3) -> Tensor3:
    """``(V_1, V_2, V_3) . T``, computed exactly for exact tensors."""
    if not t.is_exact:
        return multilinear_multiply(*(v.to_float() for v in ct.V), t)
    return multilinear_multiply(*ct.V, Tensor3(t.to_exact()))


def _phase_fix(e: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-magnitude entry is real and positive."""
    e = e.copy()
    for c in range(e.shape[1]):
        col = e[:, c]
        p = col[np.argmax(np.abs(col))]
        e[:, c] = col * (abs(p) / p)
    return e


def _pullback_factor(v: RationalMatrix, u: np.ndarray):
    """``M = V^{-1} U``, then ``B = E D^{-1}`` and ``S = M B`` from the eigenpairs of ``M^* M``."""
    m = v.inv().to_float() @ u
    w, e = np.linalg.eigh(_conj_t(m) @ m)
    order = np.argsort(w)[::-1]
    w, e = w[order], _phase_fix(e[:, order])
    if w.size and w[-1] <= 0:
        raise ArithmeticError("V^{-1} U is rank deficient")
    d = np.sqrt(w)
    b = e / d[None, :]
    b_inv = d[:, None] * _conj_t(e)
    return m, b, b_inv, m @ b


def pullback_core(ct: CanonicalTransform, t: Tensor3, tol: float = 1e-9):
    """Core of ``T`` obtained from the canonical core.

    The selection matrices come from the zero rows the setup predicts, so the
    canonical core equals the slice-deleted canonical tensor whenever ``T``
    really is the Grassmann tensor of the setup.

    Returns ``(CoreDecomposition, CanonicalCoreData)``.  Raises
    ``ArithmeticError`` if a factor is not semi-orthogonal to
    ``SEMI_ORTH_TOL`` or the reconstruction misses ``T`` by more than ``tol``.
    """
    tc = canonical_tensor(ct, t)
    us = predicted_selection_matrices(ct)
    # keep only the rows the setup predicts to be nonzero; a tensor that does
    # not come from this setup then fails to reconstruct
    cc = Tensor3(tc.data[np.ix_(*(u.argmax(axis=0) for u in us))])
    bs, b_invs, ss = [], [], []
    for v, u in zip(ct.V, us):
        _, b, b_inv, s = _pullback_factor(v, u)
        dev = np.abs(_conj_t(s) @ s - np.eye(s.shape[1])).max(initial=0.0)
        if dev > SEMI_ORTH_TOL:
            raise ArithmeticError(f"pulled-back factor deviates from semi-orthogonality by {dev:.3g}")
        bs.append(b)
        b_invs.append(b_inv)
        ss.append(s)
    core = multilinear_multiply(*b_invs, Tensor3(cc.to_float()))
    back = multilinear_multiply(*ss, core)
    res = relative_error(back, t)
    if res > tol:
        raise ArithmeticError(f"pulled-back core reconstructs T with relative error {res:.3g}")
    decomp = CoreDecomposition(core, tuple(ss), "canonical", res)
    return decomp, CanonicalCoreData(us, tuple(bs), tuple(ss), cc, tc)


def commuting_diagram_residual(ct: CanonicalTransform, data: CanonicalCoreData, t: Tensor3) -> float:
    """Relative error of ``(S) . (B^{-1}) . (U^*) . (V) . T`` against ``T``."""
    x = multilinear_multiply(*(v.to_float() for v in ct.V), Tensor3(_float_data(t)))
    x = multilinear_multiply(*(u.T for u in data.U), x)
    x = multilinear_multiply(*(np.linalg.inv(b) for b in data.B), x)
    x = multilinear_multiply(*data.S, x)
    return relative_error(x, t)


@dataclass
class CoreAxiomReport:
    semi_orth: list[float]
    project: float
    reconstruct: float
    dims: tuple[int, int, int]
    expected_dims: tuple[int, int, int]
    tol: float
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "semi_orth": self.semi_orth,
            "project": self.project,
            "reconstruct": self.reconstruct,
            "dims": list(self.dims),
            "expected_dims": list(self.expected_dims),
            "passed": self.passed,
            "failures": self.failures,
        }


def numerical_frank(t: Tensor3, tol: float = SVD_REL_TOL) -> tuple[int, int, int]:
    data = Tensor3(_float_data(t))
    out = []
    for mode in (1, 2, 3):
        sv = np.linalg.svd(flatten(data, mode), compute_uv=False)
        out.append(int(np.sum(sv > tol * sv[0])) if sv.size and sv[0] > 0 else 0)
    return tuple(out)


def verify_core_axioms(t: Tensor3, cd: CoreDecomposition, tol: float = 1e-9, frank=None) -> CoreAxiomReport:
    """Check semi-orthogonality, projection, reconstruction and core size.

    ``frank`` defaults to the exact flattening ranks for exact tensors and to
    the numerical ranks otherwise.
    """
    if frank is None:
        frank = oracle_frank(t) if t.is_exact else numerical_frank(t)
    frank = tuple(int(x) for x in frank)
    ft = Tensor3(_float_data(t))
    semi = []
    for u in cd.factors:
        r = u.shape[1]
        semi.append(float(np.abs(_conj_t(u) @ u - np.eye(r)).max(initial=0.0)))
    proj = multilinear_multiply(*(_conj_t(u) for u in cd.factors), ft)
    project = relative_error(proj, cd.core) if proj.dims == cd.core.dims else float("inf")
    reconstruct = relative_error(multilinear_multiply(*cd.factors, cd.core), ft)
    rep = CoreAxiomReport(semi, project, reconstruct, cd.core.dims, frank, tol)
    for j, dev in enumerate(semi, start=1):
        if dev > tol:
            rep.failures.append(f"factor {j} is not semi-orthogonal ({dev:.3g})")
    if project > tol:
        rep.failures.append(f"projection residual {project:.3g}")
    if reconstruct > tol:
        rep.failures.append(f"reconstruction residual {reconstruct:.3g}")
    if cd.core.dims != frank:
        rep.failures.append(f"core dims {cd.core.dims} differ from F-rank {frank}")
    return rep


def decomposition_to_json(cd: CoreDecomposition, report: CoreAxiomReport | None = None) -> dict:
    def mat(m):
        if np.iscomplexobj(m) and np.any(m.imag):
            return [[[float(x.real), float(x.imag)] for x in row] for row in m]
        return np.real(m).tolist()

    out = {
        "method": cd.method,
        "dims": list(cd.dims),
        "factors": [mat(u) for u in cd.factors],
        "core": to_json(cd.core),
    }
    if report is not None:
        out["residuals"] = {
            "semi_orth": report.semi_orth,
            "project": report.project,
            "reconstruct": report.reconstruct,
        }
    return out
