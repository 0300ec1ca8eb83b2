from functools import lru_cache

import pytest

from indelsync import (
    Alphabet,
    Sequence,
    apply_edit_pattern,
    edit_distance_banded,
    edit_distance_full,
    seq,
)
from indelsync.core import NOOP
from indelsync.dp import verify_script
from indelsync.errors import AlphabetMismatch
from indelsync.lab import enumerate_edit_patterns
from indelsync.sim import _Draws, gen_ltrrid, gen_pre_ess, RpesParams


def brute_distance(x: tuple, y: tuple) -> int:
    """Independent reference: plain recursive insert/delete distance."""

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(x):
            return len(y) - j
        if j == len(y):
            return len(x) - i
        best = 1 + min(go(i + 1, j), go(i, j + 1))
        if x[i] == y[j]:
            best = min(best, go(i + 1, j + 1))
        return best

    return go(0, 0)


def random_pair(trial: int, max_n: int, a: int):
    draws = _Draws(trial, 0xD1CE)
    n = draws.below(max_n + 1)
    m = draws.below(max_n + 1)
    x = Sequence(Alphabet(a), [draws.below(a) for _ in range(n)])
    y = Sequence(Alphabet(a), [draws.below(a) for _ in range(m)])
    return x, y


class TestFullDp:
    def test_identical(self):
        r = edit_distance_full(seq("0101"), seq("0101"))
        assert r.distance == 0
        assert all(op.kind == NOOP for op in r.script.iter_ops())

    def test_two_deletions(self):
        r = edit_distance_full(seq("00000"), seq("000"))
        assert r.distance == 2 and r.k_del == 2 and r.k_ins == 0

    def test_substitution_costs_two(self):
        # InDel-only model: changing a symbol takes one delete plus one insert
        x, y = seq("0101", 3), seq("0121", 3)
        r = edit_distance_full(x, y)
        assert r.distance == 2 and r.k_del == 1 and r.k_ins == 1
        assert verify_script(x, y, r)
        # no script with fewer than 2 edits exists
        found = [
            p
            for budget in [(0, 0), (1, 0), (0, 1)]
            for p in enumerate_edit_patterns(x, *budget)
            if apply_edit_pattern(x, p) == y
        ]
        assert found == []

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            edit_distance_full(seq("01", 2), seq("01", 3))

    def test_empty_cases(self):
        assert edit_distance_full(seq([], 2), seq([], 2)).distance == 0
        r = edit_distance_full(seq([], 2), seq("111"))
        assert r.distance == 3 and r.k_ins == 3

    def test_matches_brute_force(self):
        for trial in range(300):
            x, y = random_pair(trial, 9, 2 + trial % 3)
            r = edit_distance_full(x, y)
            assert r.distance == brute_distance(
                tuple(x.symbols), tuple(y.symbols)
            ), (list(x.symbols), list(y.symbols))
            assert verify_script(x, y, r)
            assert r.k_del - r.k_ins == len(x) - len(y)


class TestBandedDp:
    def test_band_used_identical(self):
        r = edit_distance_banded(seq("010101"), seq("010101"))
        assert r.distance == 0
        assert r.band_used == 1

    def test_equals_full_random(self):
        for trial in range(200):
            x, y = random_pair(trial, 60, (2, 4, 256)[trial % 3])
            rf = edit_distance_full(x, y)
            rb = edit_distance_banded(x, y)
            assert rb.distance == rf.distance
            assert rb.script == rf.script

    def test_three_deletions_from_alternating(self):
        draws = _Draws(5, 0xF00)
        x = seq("01" * 50)
        symbols = list(x.symbols)
        for p in sorted({draws.below(len(symbols)) for _ in range(3)}, reverse=True):
            del symbols[p]
        y = Sequence(x.alphabet, symbols)
        r = edit_distance_banded(x, y)
        assert r.distance == len(x) - len(y)
        assert verify_script(x, y, r)

    def test_symmetry(self):
        for trial in range(60):
            x, y = random_pair(trial, 30, 3)
            fwd = edit_distance_banded(x, y)
            rev = edit_distance_banded(y, x)
            assert fwd.distance == rev.distance
            assert fwd.k_ins == rev.k_del and fwd.k_del == rev.k_ins

    def test_triangle_inequality(self):
        for trial in range(40):
            draws = _Draws(trial, 0x7A1)
            xs = [
                Sequence(Alphabet(3), [draws.below(3) for _ in range(draws.below(12))])
                for _ in range(3)
            ]
            d = lambda u, v: edit_distance_banded(u, v).distance
            assert d(xs[0], xs[2]) <= d(xs[0], xs[1]) + d(xs[1], xs[2])


class TestFact2:
    """DP edit counts never exceed the counts of any true pattern."""

    def test_sampled_true_patterns(self):
        for trial in range(150):
            draws = _Draws(trial, 0xFAC2)
            n = 4 + draws.below(5)
            a = 2 + draws.below(2)
            x = Sequence(Alphabet(a), [draws.below(a) for _ in range(n)])
            params = RpesParams(n, a, 0.2, 0.2, trial)
            pattern, y = gen_ltrrid(x, params)
            r = edit_distance_banded(x, y)
            assert r.k_ins <= pattern.k_ins
            assert r.k_del <= pattern.k_del

    def test_exhaustive_tiny(self):
        x = seq("0101", 2)
        for pattern in enumerate_edit_patterns(x, 2, 2):
            y = apply_edit_pattern(x, pattern)
            r = edit_distance_full(x, y)
            assert r.k_ins <= pattern.k_ins and r.k_del <= pattern.k_del


class TestLargeScale:
    def test_rpes_pair_1e5(self):
        n = 100_000
        x = gen_pre_ess(n, 256, 11)
        pattern, y = gen_ltrrid(x, RpesParams(n, 256, 0.005, 0.005, 12))
        from indelsync.codec import minimal_edit_script

        script = minimal_edit_script(x, y)
        assert apply_edit_pattern(x, script) == y
        assert script.k_ins <= pattern.k_ins
        assert script.k_del <= pattern.k_del
