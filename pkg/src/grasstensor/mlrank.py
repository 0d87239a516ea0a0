"""Closed-form multilinear rank of trifocal Grassmann tensors.

For mode r the rows of the canonical flattening are indexed by how many
columns are taken from each identity band of view r's block: ``(x0, x1, x2)``
from the bands of widths ``(i, j_{r,s}, j_{r,t})`` where s, t are the views
sharing the second and third band (mode 1: bands i, j12, j13; mode 2: i, j12,
j23; mode 3: i, j13, j23).  A row vanishes exactly when the count taken from
the band shared with view s leaves more than ``alpha_s`` columns there for
view s to fill, i.e. ``x_s <= j_{r,s} - alpha_s - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GenericityError
from .exact_linalg import rank as exact_rank
from .geometry import DimensionInvariants
from .grassmann import GrassmannTensor
from .multiindex import band_choices, binom, complement, enumerate_compositions, rank_lex
from .tensor3 import Tensor3, flatten
from . import kernels


@dataclass
class RankReport:
    mode: int
    n: int
    deficiency_triples: list[tuple[int, int, int]]
    deficiency: int
    formula_rank: int
    oracle_rank: int | None = None
    zero_rows: list[int] = field(default_factory=list)
    conditions: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "condition_views": self.conditions,
            "deficiency_triples": [list(t) for t in self.deficiency_triples],
            "deficiency": self.deficiency,
            "formula_rank": self.formula_rank,
            "oracle_rank": self.oracle_rank,
            "zero_rows": self.zero_rows,
        }


def _require_generic(inv: DimensionInvariants) -> None:
    if inv.i < 0:
        raise GenericityError(f"i = {inv.i} < 0: the closed formulas need a generic setup")


def _condition(inv: DimensionInvariants, r: int, s: int, t: int, bump: int = -1) -> bool:
    """``j_{r,s} - alpha_s + bump >= max(0, alpha_r - i - j_{r,t})``."""
    return inv.j(r, s) - inv.alpha(s) + bump >= max(0, inv.alpha(r) - inv.i - inv.j(r, t))


def _other(r: int, s: int) -> int:
    return ({1, 2, 3} - {r, s}).pop()


def zero_row_conditions(inv: DimensionInvariants, r: int, literal: bool = False) -> list[int]:
    """Every view s (in cyclic order after r) whose zero-row inequality holds for mode r.

    Both inequalities are read as ``j_{r,s} - alpha_s - 1 >= max(...)``.  With
    ``literal=True`` the second one uses ``+ 1`` in place of ``- 1``; that
    reading is kept only for comparison and disagrees with exact ranks.

    The two inequalities can hold together (for instance k=6, h=(3,3,5),
    alpha=(2,2,3), mode 3), in which case both families of rows vanish.
    """
    _require_generic(inv)
    s, t = (r % 3) + 1, ((r + 1) % 3) + 1
    out = []
    if _condition(inv, r, s, t):
        out.append(s)
    if _condition(inv, r, t, s, bump=+1 if literal else -1):
        out.append(t)
    return out


def zero_row_condition(inv: DimensionInvariants, r: int, literal: bool = False) -> int | None:
    """The first view s from :func:`zero_row_conditions`, or None when mode r has full rank."""
    found = zero_row_conditions(inv, r, literal)
    return found[0] if found else None


def _band_slot(inv: DimensionInvariants, r: int, view: int) -> int:
    """Position (1 or 2) of the band view r shares with ``view``."""
    return inv.band_partners(r).index(view) + 1


def deficiency_set(inv: DimensionInvariants, r: int, s: int | None = None) -> list[tuple[int, int, int]]:
    """Band-count triples of mode r whose rows of the canonical flattening vanish.

    Direct enumeration of compositions of ``alpha_r`` under the band caps.  A
    triple is kept when, for some satisfied view s, the count in the band
    shared with s is at most ``j_{r,s} - alpha_s - 1``.  Passing ``s`` restricts
    to that view's family.
    """
    _require_generic(inv)
    views = zero_row_conditions(inv, r) if s is None else [s]
    if not views:
        return []
    widths = inv.band_widths(r)
    bounds = []
    for v in views:
        lo = max(0, inv.alpha(r) - inv.i - inv.j(r, _other(r, v)))
        bounds.append((_band_slot(inv, r, v), lo, inv.j(r, v) - inv.alpha(v) - 1))
    return [
        comp
        for comp in enumerate_compositions(inv.alpha(r), widths)
        if any(lo <= comp[slot] <= hi for slot, lo, hi in bounds)
    ]


def deficiency_count_formula(inv: DimensionInvariants, r: int, s: int | None = None, literal: bool = False) -> int:
    """Size of view s's deficiency family from the case split on
    ``m1 = min(i, alpha_r - a_s)``, ``m2 = min(j_{r,t}, alpha_r - a_s)``.

    The third case counts ``j_{r,t} + 1`` choices; ``literal=True`` uses the
    printed ``j_{r,s} + 1`` instead (kept to document the discrepancy).
    """
    _require_generic(inv)
    if s is None:
        s = zero_row_condition(inv, r)
    if s is None or s not in zero_row_conditions(inv, r):
        raise GenericityError(f"mode {r} has no zero rows for view {s}; the count formula does not apply")
    t = _other(r, s)
    i, ar = inv.i, inv.alpha(r)
    jrs, jrt = inv.j(r, s), inv.j(r, t)
    lo = max(0, ar - i - jrt)
    hi = min(jrs - inv.alpha(s) - 1, ar)
    total = 0
    for a_s in range(lo, hi + 1):
        rest = ar - a_s
        m1, m2 = min(i, rest), min(jrt, rest)
        if m1 == rest and m2 == rest:
            total += rest + 1
        elif m1 == i and m2 == rest:
            total += i + 1
        elif m1 == rest and m2 == jrt:
            total += (jrs if literal else jrt) + 1
        else:
            total += abs(i - ar + a_s + jrt) + 1
    return total


def _weight(triple, widths) -> int:
    w = 1
    for x, wd in zip(triple, widths):
        w *= binom(wd, x)
    return w


def zero_rows(inv: DimensionInvariants, r: int) -> list[int]:
    """1-based rows of the mode-r canonical flattening that vanish.

    Every deficiency triple expands into all column choices inside the bands;
    the row is the lex rank of the complementary (not chosen) column set.
    """
    _require_generic(inv)
    widths = inv.band_widths(r)
    h1 = inv.h[r - 1] + 1
    rows = set()
    for triple in deficiency_set(inv, r):
        for chosen in band_choices(triple, widths):
            rows.add(rank_lex(complement(chosen, h1), h1))
    return sorted(rows)


def mode_report(inv: DimensionInvariants, r: int) -> RankReport:
    triples = deficiency_set(inv, r)
    widths = inv.band_widths(r)
    deficiency = sum(_weight(t, widths) for t in triples)
    n = inv.n[r - 1]
    return RankReport(
        mode=r,
        n=n,
        deficiency_triples=triples,
        deficiency=deficiency,
        formula_rank=n - deficiency,
        zero_rows=zero_rows(inv, r),
        conditions=zero_row_conditions(inv, r),
    )


def multilinear_rank(inv: DimensionInvariants):
    """Formula F-rank and one :class:`RankReport` per mode."""
    _require_generic(inv)
    reports = [mode_report(inv, r) for r in (1, 2, 3)]
    return tuple(rep.formula_rank for rep in reports), reports


def flattening_rank(t: Tensor3, mode: int) -> int:
    """Exact rank of one flattening of an exact tensor."""
    mat = flatten(t, mode)
    if mat.size == 0:
        return 0
    if mat.dtype.kind in "iu":
        return kernels.rank_int(mat)
    return exact_rank(mat)


def oracle_frank(gt) -> tuple[int, int, int]:
    """Exact ranks of the three flattenings (works for any setup)."""
    t = gt.tensor if isinstance(gt, GrassmannTensor) else gt
    if not t.is_exact:
        raise TypeError("the rank oracle needs an exact tensor")
    return tuple(flattening_rank(t, m) for m in (1, 2, 3))
