"""Pure-Python twins of the compiled kernels in ``_speedups``.

Same signatures and semantics, but on Python integers, so they never
overflow and report ``None`` only where the compiled version would.
"""

from __future__ import annotations

from math import gcd

import numpy as np


def det_int(m) -> int:
    """Bareiss determinant of a square matrix of Python ints (list of lists)."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(m):
    return det_int(np.asarray(m).tolist())


def minors(m, cols, out, overflow):
    mat = np.asarray(m).tolist()
    for r, sel in enumerate(np.asarray(cols).tolist()):
        sub = [[row[c] for c in sel] for row in mat]
        out[r] = det_int(sub)
        overflow[r] = 0


def rank_rows(rows) -> int:
    """Exact rank of a matrix given as an iterable of integer rows.

    Rows are kept sparse (column -> value) and reduced against earlier pivots
    with fraction-free updates normalised by their content.
    """
    pivots: dict[int, dict[int, int]] = {}
    rk = 0
    for row in rows:
        vec = {j: int(v) for j, v in enumerate(row) if v}
        while vec:
            lead = min(vec)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = vec
                rk += 1
                break
            pv = prow[lead]
            f = vec[lead]
            g = gcd(pv, f)
            pp, ff = pv // g, f // g
            new = {}
            for j in vec.keys() | prow.keys():
                v = vec.get(j, 0) * pp - prow.get(j, 0) * ff
                if v:
                    new[j] = v
            if new:
                content = 0
                for v in new.values():
                    content = gcd(content, v)
                    if content == 1:
                        break
                if content > 1:
                    new = {j: v // content for j, v in new.items()}
            vec = new
    return rk


def rank(m):
    a = np.asarray(m)
    if a.ndim != 2 or a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return rank_rows(a.tolist())
