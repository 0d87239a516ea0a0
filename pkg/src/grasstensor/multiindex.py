"""Strictly increasing multi-indices in lexicographic order.

Every tensor axis and every compound-matrix axis in the package is ordered
by :func:`rank_lex`.  Positions are 1-based throughout.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

from .errors import DimensionError


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def _check(idx: Sequence[int], n: int) -> tuple[int, ...]:
    idx = tuple(int(e) for e in idx)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise DimensionError(f"multi-index {idx} is not strictly increasing")
    if idx and (idx[0] < 1 or idx[-1] > n):
        raise DimensionError(f"multi-index {idx} outside universe 1..{n}")
    return idx


def subsets(n: int, p: int) -> list[tuple[int, ...]]:
    """All p-subsets of ``{1..n}`` in lex order (``subsets(n, p)[r-1]`` has rank r)."""
    return list(combinations(range(1, n + 1), p))


def rank_lex(idx: Sequence[int], n: int) -> int:
    """1-based position of ``idx`` among the ``len(idx)``-subsets of ``{1..n}``."""
    idx = _check(idx, n)
    p = len(idx)
    r = 0
    prev = 0
    for pos, e in enumerate(idx):
        # subsets agreeing so far but with a smaller element at this position
        for x in range(prev + 1, e):
            r += binom(n - x, p - pos - 1)
        prev = e
    return r + 1


def unrank_lex(r: int, p: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`rank_lex`."""
    total = binom(n, p)
    if not 1 <= r <= total:
        raise DimensionError(f"rank {r} outside 1..{total} for C({n},{p})")
    r -= 1
    out = []
    x = 1
    for pos in range(p):
        while True:
            block = binom(n - x, p - pos - 1)
            if r < block:
                break
            r -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def complement(idx: Sequence[int], n: int) -> tuple[int, ...]:
    idx = set(_check(idx, n))
    return tuple(e for e in range(1, n + 1) if e not in idx)


def enumerate_compositions(total: int, caps: Sequence[int]) -> list[tuple[int, ...]]:
    """Tuples of non-negative integers summing to ``total`` with ``t[u] <= caps[u]``.

    Returned in lexicographic order.
    """
    if any(c < 0 for c in caps):
        raise DimensionError(f"negative cap in {tuple(caps)}")
    return list(_compositions(total, tuple(caps)))


def _compositions(total: int, caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if total == 0:
            yield ()
        return
    rest = sum(caps[1:])
    for first in range(max(0, total - rest), min(caps[0], total) + 1):
        for tail in _compositions(total - first, caps[1:]):
            yield (first,) + tail


def band_choices(counts: Sequence[int], widths: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Column sets picking ``counts[u]`` columns out of consecutive bands of ``widths[u]``.

    Bands are laid out left to right starting at column 1; each yielded set is
    sorted ascending.
    """
    offsets = []
    start = 1
    for w in widths:
        offsets.append(start)
        start += w
    pools = [
        [tuple(off + c for c in sub) for sub in combinations(range(w), a)]
        for a, w, off in zip(counts, widths, offsets)
    ]
    for parts in product(*pools):
        yield tuple(e for part in parts for e in part)
