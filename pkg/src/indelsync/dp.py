"""Minimal insert/delete edit scripts via dynamic programming.

Two entry points with identical outputs: `edit_distance_full` fills the whole
table (quadratic; the verification oracle) and `edit_distance_banded`
restricts the table to diagonals |j - i| near the length difference, doubling
the band until the distance fits inside it, for O((|x|+|y|) * k) work.

Both trace the script forward over suffix distances with the fixed tie-break
no-op > delete > insert, so equal inputs give byte-identical scripts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import EditPattern, Sequence, apply_edit_pattern
from .errors import AlphabetMismatch

_INF = np.int32(1 << 30)


@njit(cache=True)
def _suffix_table(x, y, lo, hi):
    """Suffix distances D[i, k] for offsets c = j - i in [lo, hi], k = c - lo."""
    n = x.shape[0]
    m = y.shape[0]
    width = hi - lo + 1
    D = np.full((n + 1, width), _INF, dtype=np.int32)
    for i in range(n, -1, -1):
        for k in range(width - 1, -1, -1):
            j = i + lo + k
            if j < 0 or j > m:
                continue
            if i == n and j == m:
                D[i, k] = 0
                continue
            best = _INF
            if j < m and k + 1 < width:
                v = D[i, k + 1] + 1  # insert y[j]
                if v < best:
                    best = v
            if i < n and k - 1 >= 0:
                v = D[i + 1, k - 1] + 1  # delete x[i]
                if v < best:
                    best = v
            if i < n and j < m and x[i] == y[j]:
                v = D[i + 1, k]  # keep
                if v < best:
                    best = v
            D[i, k] = best
    return D


@njit(cache=True)
def _walk(x, y, D, lo):
    """Greedy forward walk over suffix distances; no-op > delete > insert."""
    n = x.shape[0]
    m = y.shape[0]
    width = D.shape[1]
    ops = np.empty(n + m, dtype=np.uint8)
    contents = np.empty(m, dtype=np.uint16)
    oi = 0
    ci = 0
    i = 0
    j = 0
    while i < n or j < m:
        k = j - i - lo
        cur = D[i, k]
        if i < n and j < m and x[i] == y[j] and D[i + 1, k] == cur:
            ops[oi] = 0  # NOOP
            i += 1
            j += 1
        elif i < n and k - 1 >= 0 and D[i + 1, k - 1] == cur - 1:
            ops[oi] = 1  # DELETE
            i += 1
        else:
            ops[oi] = 2  # INSERT
            contents[ci] = y[j]
            ci += 1
            j += 1
        oi += 1
    return ops[:oi], contents[:ci]


@njit(cache=True)
def _banded_distance_and_script(x, y, k0):
    """Band-doubling driver; returns (distance, ops, contents, band_used)."""
    n = x.shape[0]
    m = y.shape[0]
    cap = n if n > m else m
    if cap == 0:
        return 0, np.empty(0, dtype=np.uint8), np.empty(0, dtype=np.uint16), k0
    w = k0
    while True:
        lo = min(0, m - n) - w
        hi = max(0, m - n) + w
        D = _suffix_table(x, y, lo, hi)
        d = D[0, -lo]
        if d <= w or w >= cap:
            ops, contents = _walk(x, y, D, lo)
            return d, ops, contents, w
        w *= 2


@dataclass(frozen=True)
class DpResult:
    distance: int
    script: EditPattern
    band_used: int | None = None

    @property
    def k_ins(self) -> int:
        return self.script.k_ins

    @property
    def k_del(self) -> int:
        return self.script.k_del


def _check_pair(x: Sequence, y: Sequence) -> None:
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch(
            f"alphabet sizes differ: {x.alphabet.size} vs {y.alphabet.size}"
        )


def edit_distance_full(x: Sequence, y: Sequence) -> DpResult:
    """Quadratic reference DP; k = k_ins + k_del minimal over all scripts."""
    _check_pair(x, y)
    n, m = len(x), len(y)
    w = max(n, m, 1)
    lo = min(0, m - n) - w
    D = _suffix_table(x.symbols, y.symbols, lo, max(0, m - n) + w)
    ops, contents = _walk(x.symbols, y.symbols, D, lo)
    return DpResult(int(D[0, -lo]), EditPattern(ops, contents), None)


def edit_distance_banded(x: Sequence, y: Sequence) -> DpResult:
    """Band-doubling DP; same distance and script as the full table.

    The result is exact: a script of cost d <= w never leaves the band of
    half-width w, so the first band that closes with d <= w is certified.
    """
    _check_pair(x, y)
    k0 = max(1, abs(len(x) - len(y)))
    d, ops, contents, w = _banded_distance_and_script(x.symbols, y.symbols, k0)
    return DpResult(int(d), EditPattern(ops, contents), int(w))


def verify_script(x: Sequence, y: Sequence, result: DpResult) -> bool:
    """Replay check used by tests: the script really maps x to y."""
    return apply_edit_pattern(x, result.script) == y


@njit(cache=True)
def batch_full_vs_banded(xs, x_off, ys, y_off):
    """Exhaustive-test helper: for each packed (x, y) pair return the full-DP
    distance and whether the banded run reproduced distance and script."""
    pairs = x_off.shape[0] - 1
    dist = np.empty(pairs, dtype=np.int32)
    agree = np.ones(pairs, dtype=np.uint8)
    for p in range(pairs):
        x = xs[x_off[p] : x_off[p + 1]]
        y = ys[y_off[p] : y_off[p + 1]]
        n = x.shape[0]
        m = y.shape[0]
        w = n if n > m else m
        if w == 0:
            dist[p] = 0
            continue
        lo = min(0, m - n) - w
        D = _suffix_table(x, y, lo, max(0, m - n) + w)
        dist[p] = D[0, -lo]
        ops_f, cont_f = _walk(x, y, D, lo)
        d_b, ops_b, cont_b, _ = _banded_distance_and_script(x, y, max(1, abs(n - m)))
        if d_b != dist[p] or ops_b.shape[0] != ops_f.shape[0]:
            agree[p] = 0
            continue
        for t in range(ops_f.shape[0]):
            if ops_f[t] != ops_b[t]:
                agree[p] = 0
                break
        if agree[p] and cont_f.shape[0] == cont_b.shape[0]:
            for t in range(cont_f.shape[0]):
                if cont_f[t] != cont_b[t]:
                    agree[p] = 0
                    break
        elif cont_f.shape[0] != cont_b.shape[0]:
            agree[p] = 0
    return dist, agree
