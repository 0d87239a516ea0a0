"""Projection setups, dimension invariants and the canonical form.

Three cameras ``P_j`` map ``P^k`` to ``P^{h_j}``; ``L_j`` is the column space
of ``P_j^T`` inside ``C^{k+1}``.  Under genericity there are changes of basis
``H_j`` (views) and ``K`` (ambient space) bringing ``[P_1^T | P_2^T | P_3^T]``
to the block pattern built by :func:`canonical_matrix`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .errors import DimensionError, GenericityError, ParseError, ProfileError
from .exact_linalg import (
    RationalMatrix,
    column_basis,
    compound,
    hstack,
    intersect_column_spaces,
    rank,
    solve,
)
from .multiindex import binom

# unordered view pairs and the third view, in the fixed order (12, 13, 23)
PAIRS = ((1, 2), (1, 3), (2, 3))


def _pair_index(r: int, s: int) -> int:
    return PAIRS.index(tuple(sorted((r, s))))


@dataclass(frozen=True)
class Profile:
    alphas: tuple[int, int, int]

    def __post_init__(self):
        if len(self.alphas) != 3:
            raise ProfileError(f"a trifocal profile has three parts, got {self.alphas}")
        if any(a < 1 for a in self.alphas):
            raise ProfileError(f"profile parts must be positive: {self.alphas}")

    def validate(self, k: int, h) -> None:
        if sum(self.alphas) != k + 1:
            raise ProfileError(f"profile {self.alphas} does not sum to k+1 = {k + 1}")
        for a, hj in zip(self.alphas, h):
            if a > hj:
                raise ProfileError(f"profile part {a} exceeds view dimension {hj}")


@dataclass(frozen=True)
class DimensionInvariants:
    """Numbers fixed by ``(k, h, alpha)``; pair-indexed fields use order (12, 13, 23)."""

    k: int
    h: tuple[int, int, int]
    alphas: tuple[int, int, int]
    i: int
    i_rs: tuple[int, int, int]
    j_rs: tuple[int, int, int]
    n: tuple[int, int, int]
    s: tuple[int, int, int]

    @classmethod
    def from_dims(cls, k: int, h, alphas) -> "DimensionInvariants":
        h = tuple(int(x) for x in h)
        alphas = tuple(int(x) for x in alphas)
        if len(h) != 3:
            raise DimensionError(f"need three view dimensions, got {h}")
        for hj in h:
            if not 2 <= hj < k:
                raise DimensionError(f"view dimension {hj} outside 2..{k - 1}")
        Profile(alphas).validate(k, h)
        i = sum(h) + 1 - 2 * k
        i_rs = tuple(h[r - 1] + h[s - 1] + 1 - k for r, s in PAIRS)
        j_rs = tuple(x - i for x in i_rs)
        s = tuple(hj - a for hj, a in zip(h, alphas))
        n = tuple(binom(hj + 1, sj + 1) for hj, sj in zip(h, s))
        return cls(k, h, alphas, i, i_rs, j_rs, n, s)

    def j(self, r: int, s: int) -> int:
        """``j_{r,s} = k - h_t`` (symmetric in r, s)."""
        return self.j_rs[_pair_index(r, s)]

    def alpha(self, r: int) -> int:
        return self.alphas[r - 1]

    def band_widths(self, r: int) -> tuple[int, int, int]:
        """Widths of the identity bands in view r's column block, left to right."""
        j12, j13, j23 = self.j_rs
        return {1: (self.i, j12, j13), 2: (self.i, j12, j23), 3: (self.i, j13, j23)}[r]

    def band_partners(self, r: int) -> tuple[int, int]:
        """The view sharing each of view r's second and third bands."""
        return {1: (2, 3), 2: (1, 3), 3: (1, 2)}[r]

    @property
    def generic_dims(self) -> bool:
        return self.i >= 0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "h": list(self.h),
            "profile": list(self.alphas),
            "i": self.i,
            "i_rs": list(self.i_rs),
            "j_rs": list(self.j_rs),
            "n": list(self.n),
            "s": list(self.s),
        }


@dataclass(frozen=True)
class ProjectionSetup:
    k: int
    projections: tuple[RationalMatrix, RationalMatrix, RationalMatrix]
    profile: Profile

    def __post_init__(self):
        if len(self.projections) != 3:
            raise DimensionError("a trifocal setup has exactly three projections")
        for j, p in enumerate(self.projections, start=1):
            if p.cols != self.k + 1:
                raise DimensionError(f"P_{j} has {p.cols} columns, expected k+1 = {self.k + 1}")
            if not 3 <= p.rows <= self.k:
                raise DimensionError(f"P_{j} has {p.rows} rows; need 3 <= h+1 <= k")
        self.profile.validate(self.k, self.h)

    @classmethod
    def from_transposes(cls, k: int, transposes, alphas) -> "ProjectionSetup":
        """Build from the blocks ``P_j^T`` (each (k+1) x (h_j+1))."""
        return cls(k, tuple(RationalMatrix(t).T for t in transposes), Profile(tuple(alphas)))

    @property
    def h(self) -> tuple[int, int, int]:
        return tuple(p.rows - 1 for p in self.projections)

    @property
    def alphas(self) -> tuple[int, int, int]:
        return self.profile.alphas

    def stacked(self) -> RationalMatrix:
        """``[P_1^T | P_2^T | P_3^T]``."""
        return hstack([p.T for p in self.projections])

    def full_rank(self) -> bool:
        return all(rank(p) == p.rows for p in self.projections)

    def transformed(self, H=None, K=None) -> "ProjectionSetup":
        """Setup with ``P_j -> H_j P_j K``; entries of H may be ``None``."""
        H = H or (None, None, None)
        ps = []
        for p, hj in zip(self.projections, H):
            q = p if hj is None else hj @ p
            ps.append(q if K is None else q @ K)
        return ProjectionSetup(self.k, tuple(ps), self.profile)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "views": [{"h": p.rows - 1, "P": p.to_strings()} for p in self.projections],
            "profile": list(self.alphas),
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_json(cls, obj) -> "ProjectionSetup":
        """Parse the setup file format.

        Structural problems raise :class:`ParseError`; well-formed setups with
        inconsistent dimensions or profiles raise DimensionError/ProfileError.
        """
        try:
            k = int(obj["k"])
            views = obj["views"]
            alphas = tuple(int(a) for a in obj["profile"])
            if len(views) != 3:
                raise ParseError(f"expected 3 views, got {len(views)}")
            mats = []
            for v in views:
                rows = v["P"]
                if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                    raise ParseError("each view needs a matrix 'P' given as a list of rows")
                m = RationalMatrix(rows)
                if "h" in v and int(v["h"]) != m.rows - 1:
                    raise DimensionError(f"view declares h={v['h']} but P has {m.rows} rows")
                mats.append(m)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (DimensionError, ProfileError, ParseError)):
                raise
            raise ParseError(f"malformed setup: {exc!r}") from exc
        return cls(k, tuple(mats), Profile(alphas))


def invariants(setup: ProjectionSetup) -> DimensionInvariants:
    return DimensionInvariants.from_dims(setup.k, setup.h, setup.alphas)


@dataclass
class GenericityVerdict:
    generic: bool
    violation: tuple[int, int, int] | None = None
    reason: str = ""
    intersection_dims: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.generic


def view_space(setup: ProjectionSetup, j: int) -> RationalMatrix:
    """Basis of ``L_j = col(P_j^T)``."""
    return column_basis(setup.projections[j - 1].T)


def check_genericity(setup: ProjectionSetup) -> GenericityVerdict:
    """For every ordered ``(r, s, t)``: ``L_t + (L_r ∩ L_s) = C^{k+1}``?

    The violating triple is reported on failure.  Rank-deficient cameras are
    rejected too.
    """
    dims = {}
    for j, p in enumerate(setup.projections, start=1):
        if rank(p) != p.rows:
            return GenericityVerdict(False, None, f"P_{j} is rank deficient")
    L = {j: view_space(setup, j) for j in (1, 2, 3)}
    meet = {}
    for r, s in PAIRS:
        meet[(r, s)] = intersect_column_spaces(L[r], L[s])
        dims[f"L{r}∩L{s}"] = meet[(r, s)].cols
    for r, s, t in permutations((1, 2, 3)):
        if r > s:
            continue  # the condition is symmetric in r, s
        span = hstack([L[t], meet[(r, s)]]) if meet[(r, s)].cols else L[t]
        if rank(span) != setup.k + 1:
            return GenericityVerdict(
                False, (r, s, t), f"L{t} and L{r}∩L{s} do not span the ambient space", dims
            )
    triple = intersect_column_spaces(meet[(1, 2)], L[3]) if meet[(1, 2)].cols else meet[(1, 2)]
    dims["L1∩L2∩L3"] = triple.cols
    return GenericityVerdict(True, None, "", dims)


def canonical_matrix(inv: DimensionInvariants) -> RationalMatrix:
    """The normalised stacked matrix: identity bands on row bands (i, j12, j13, j23)."""
    if inv.i < 0:
        raise GenericityError(f"i = {inv.i} < 0: no canonical form exists")
    i = inv.i
    j12, j13, j23 = inv.j_rs
    offsets = {"0": 0, "12": i, "13": i + j12, "23": i + j12 + j13}
    widths = {"0": i, "12": j12, "13": j13, "23": j23}
    layout = {1: ("0", "12", "13"), 2: ("0", "12", "23"), 3: ("0", "13", "23")}
    cols = []
    for view in (1, 2, 3):
        for band in layout[view]:
            for c in range(widths[band]):
                cols.append(offsets[band] + c)
    a = np.zeros((inv.k + 1, len(cols)), dtype=np.int64)
    for c, row in enumerate(cols):
        a[row, c] = 1
    return RationalMatrix(a.tolist())


def canonical_blocks(inv: DimensionInvariants) -> tuple[RationalMatrix, RationalMatrix, RationalMatrix]:
    """The three column blocks of :func:`canonical_matrix` (the canonical ``P_j^T``)."""
    phi = canonical_matrix(inv)
    widths = [hj + 1 for hj in inv.h]
    starts = np.cumsum([0] + widths)
    return tuple(phi[:, int(starts[j]) : int(starts[j + 1])] for j in range(3))


def canonical_setup(inv: DimensionInvariants) -> ProjectionSetup:
    """Setup whose cameras are already in canonical position."""
    return ProjectionSetup.from_transposes(inv.k, canonical_blocks(inv), inv.alphas)


@dataclass(frozen=True)
class CanonicalTransform:
    H: tuple[RationalMatrix, RationalMatrix, RationalMatrix]
    K: RationalMatrix
    V: tuple[RationalMatrix, RationalMatrix, RationalMatrix]
    invariants: DimensionInvariants

    def to_json(self) -> dict:
        return {
            "H": [h.to_strings() for h in self.H],
            "K": self.K.to_strings(),
            "V": [v.to_strings() for v in self.V],
            "invariants": self.invariants.to_dict(),
        }


def _extend(basis: RationalMatrix, space: RationalMatrix) -> RationalMatrix:
    """Columns of ``space`` that extend ``basis`` to a basis of ``col(space)``."""
    chosen = []
    cur = basis
    r = rank(cur) if cur.cols else 0
    for c in range(space.cols):
        cand = hstack([cur, space[:, c : c + 1]]) if cur.cols else space[:, c : c + 1]
        rc = rank(cand)
        if rc > r:
            chosen.append(c)
            cur, r = cand, rc
    if not chosen:
        return RationalMatrix.zeros(space.rows, 0)
    return RationalMatrix(space.array[:, chosen])


def canonicalize(setup: ProjectionSetup) -> CanonicalTransform:
    """Exact ``H_j``, ``K`` with ``[(H_j P_j K)^T]_j == canonical_matrix`` and the induced ``V_j``.

    Builds an adapted ambient basis W (triple intersection, then complements
    inside each pairwise intersection, ordered like the canonical row bands),
    sets ``K = W^{-T}`` and solves ``P_j^T X_j = W Φ_j`` for ``H_j = X_j^T``.
    """
    verdict = check_genericity(setup)
    if not verdict:
        raise GenericityError(f"setup is not generic: {verdict.reason}")
    inv = invariants(setup)
    if inv.i < 0:
        raise GenericityError(f"i = {inv.i} < 0")
    L = {j: view_space(setup, j) for j in (1, 2, 3)}
    m12 = intersect_column_spaces(L[1], L[2])
    m13 = intersect_column_spaces(L[1], L[3])
    m23 = intersect_column_spaces(L[2], L[3])
    triple = intersect_column_spaces(m12, L[3]) if m12.cols else m12
    empty = RationalMatrix.zeros(setup.k + 1, 0)
    band0 = triple if triple.cols else empty
    bands = [band0]
    for meet in (m12, m13, m23):
        bands.append(_extend(band0, meet))
    expected = (inv.i,) + inv.j_rs
    got = tuple(b.cols for b in bands)
    if got != expected:
        raise GenericityError(f"intersection dimensions {got} differ from the predicted {expected}")
    W = hstack([b for b in bands if b.cols])
    if rank(W) != setup.k + 1:
        raise GenericityError("adapted ambient basis is singular")
    phi_blocks = canonical_blocks(inv)
    H = tuple(solve(p.T, W @ blk).T for p, blk in zip(setup.projections, phi_blocks))
    K = W.inv().T
    V = tuple(compound(hj.inv(), sj + 1).T for hj, sj in zip(H, inv.s))
    ct = CanonicalTransform(H, K, V, inv)
    # postcondition: exact reproduction of the canonical matrix
    got_phi = hstack([(hj @ p @ K).T for hj, p in zip(H, setup.projections)])
    if got_phi != canonical_matrix(inv):
        raise AssertionError("canonical change of basis failed to reproduce the canonical matrix")
    return ct


def nongeneric_example(a=2, b=3, c=5, d=7, e=11, f=13, g=17, h=19, k=23) -> ProjectionSetup:
    """Three projections P^4 -> P^2 with profile (2,2,1), where ``i = -1``.

    The first flattening has rank 3 generically and at most 2 when ``e*k == f*h``.
    """
    p1t = [[1, 0, 0], [0, 1, 0], [0, 0, a], [0, 0, b], [0, 0, c]]
    p2t = [[1, 0, 0], [0, 0, d], [0, 1, 0], [0, 0, e], [0, 0, f]]
    p3t = [[0, 0, g], [1, 0, 0], [0, 1, 0], [0, 0, h], [0, 0, k]]
    return ProjectionSetup.from_transposes(4, (p1t, p2t, p3t), (2, 2, 1))


def random_setup(k: int, h, alphas, rng: np.random.Generator, lo: int = -9, hi: int = 9) -> ProjectionSetup:
    """Integer cameras with entries in ``[lo, hi]`` (not checked for genericity)."""
    mats = tuple(RationalMatrix(rng.integers(lo, hi + 1, size=(hj + 1, k + 1)).tolist()) for hj in h)
    return ProjectionSetup(k, mats, Profile(tuple(alphas)))


def generate_generic_setup(k: int, h, alphas, rng: np.random.Generator, max_attempts: int = 1000):
    """Sample integer cameras until the setup is generic.  Returns ``(setup, attempts)``.

    Raises GenericityError after ``max_attempts`` failures.
    """
    inv = DimensionInvariants.from_dims(k, h, alphas)
    if inv.i < 0:
        raise GenericityError(f"dimensions give i = {inv.i} < 0; no generic setup exists")
    for attempt in range(1, max_attempts + 1):
        setup = random_setup(k, h, alphas, rng)
        if check_genericity(setup):
            return setup, attempt
    raise GenericityError(f"no generic setup found in {max_attempts} attempts")
