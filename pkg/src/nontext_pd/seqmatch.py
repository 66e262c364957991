"""Shared sequence-matching engine: LCS and greedy tiling.

Used by the citation detectors and the identifier detectors alike; both
operate on plain token sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np


@dataclass(frozen=True)
class Tile:
    """Maximal block of consecutive shared elements in identical order.

    s1/s2 are the block's start indices in the two sequences, l its length.
    """

    s1: int
    s2: int
    l: int


def _filter_to_shared(a: Sequence, b: Sequence):
    """Drop elements appearing in only one sequence; LCS is unaffected.

    Returns filtered sequences plus maps back to original indices.
    """
    shared = set(a) & set(b)
    ia = [i for i, x in enumerate(a) if x in shared]
    ib = [j for j, x in enumerate(b) if x in shared]
    return [a[i] for i in ia], [b[j] for j in ib], ia, ib


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Length of the longest common subsequence."""
    fa, fb, _, _ = _filter_to_shared(a, b)
    n, m = len(fa), len(fb)
    if n == 0 or m == 0:
        return 0
    if m > n:
        fa, fb = fb, fa
        n, m = m, n
    symbols: dict = {}
    for x in fb:
        symbols.setdefault(x, len(symbols))
    cb = np.array([symbols[x] for x in fb], dtype=np.int64)
    row = np.zeros(m + 1, dtype=np.int64)
    for x in fa:
        code = symbols.get(x, -1)
        prev = row.copy()
        match = np.where(cb == code, prev[:-1] + 1, 0)
        # dp row is non-decreasing in j, so a running max realizes the
        # max(prev[j], row[j-1], diagonal+1) recurrence in two vector ops
        np.maximum(prev[1:], match, out=row[1:])
        np.maximum.accumulate(row, out=row)
    return int(row[-1])


def lcs_pairs(a: Sequence[Hashable], b: Sequence[Hashable]) -> list[tuple[int, int]]:
    """One canonical LCS as (index_in_a, index_in_b) pairs.

    The backtrack prefers the earliest match in ``a``; with equal DP values it
    advances the ``a`` cursor first, making the output deterministic.
    """
    fa, fb, ia, ib = _filter_to_shared(a, b)
    n, m = len(fa), len(fb)
    if n == 0 or m == 0:
        return []
    symbols: dict = {}
    for x in fb:
        symbols.setdefault(x, len(symbols))
    cb = np.array([symbols[x] for x in fb], dtype=np.int64)
    dp = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(n - 1, -1, -1):
        match = cb == symbols.get(fa[i], -1)
        take = np.where(match, dp[i + 1, 1:] + 1, 0)
        np.maximum(take, dp[i + 1, :m], out=dp[i, :m])
        dp[i, :] = np.maximum.accumulate(dp[i, ::-1])[::-1]
    pairs: list[tuple[int, int]] = []
    i = j = 0
    while i < n and j < m:
        if fa[i] == fb[j] and dp[i, j] == dp[i + 1, j + 1] + 1:
            pairs.append((ia[i], ib[j]))
            i += 1
            j += 1
        elif dp[i + 1, j] >= dp[i, j + 1]:
            i += 1
        else:
            j += 1
    return pairs


def greedy_tiles(
    a: Sequence[Hashable], b: Sequence[Hashable], min_tile_len: int = 1
) -> list[Tile]:
    """Greedy longest-first tiling.

    Repeatedly finds the longest contiguous block of unmarked shared elements
    in identical order, records it, and marks its positions in both sequences;
    stops when the longest remaining block is shorter than ``min_tile_len``.
    Ties break on the smaller s1, then the smaller s2.
    """
    n, m = len(a), len(b)
    min_tile_len = max(1, min_tile_len)
    if n == 0 or m == 0:
        return []
    symbols: dict = {}
    for x in a:
        symbols.setdefault(x, len(symbols))
    ca = np.array([symbols[x] for x in a], dtype=np.int64)
    cb = np.array([symbols.get(x, -1) for x in b], dtype=np.int64)
    una = np.ones(n, dtype=bool)
    unb = np.ones(m, dtype=bool)
    tiles: list[Tile] = []
    length = np.zeros((n + 1, m + 1), dtype=np.int32)
    while True:
        for i in range(n - 1, -1, -1):
            if una[i]:
                eq = (cb == ca[i]) & unb
                length[i, :m] = np.where(eq, length[i + 1, 1:] + 1, 0)
            else:
                length[i, :m] = 0
        best = int(length[:n, :m].max())
        if best < min_tile_len:
            break
        s1, s2 = np.unravel_index(np.argmax(length[:n, :m]), (n, m))
        s1, s2 = int(s1), int(s2)
        tiles.append(Tile(s1=s1, s2=s2, l=best))
        una[s1 : s1 + best] = False
        unb[s2 : s2 + best] = False
    return tiles
