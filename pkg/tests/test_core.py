import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indelsync import (
    Alphabet,
    ArbitraryEdit,
    EditPattern,
    Sequence,
    apply_edit_pattern,
    canonicalize_arbitrary,
    replay_arbitrary,
    run_decompose,
    seq,
)
from indelsync.core import DELETE, INSERT, NOOP, apply_canonical
from indelsync.errors import (
    CursorOutOfRange,
    PatternLengthMismatch,
    SymbolOutOfRange,
)
from indelsync.sim import _Draws

from conftest import make_pattern


class TestRunDecompose:
    def test_single_run(self):
        assert run_decompose(seq("000")).runs == ((0, 3),)

    def test_alternating(self):
        assert run_decompose(seq("0101")).runs == ((0, 1), (1, 1), (0, 1), (1, 1))

    def test_six_run_example(self):
        rd = run_decompose(seq("0001111223233"))
        assert rd.runs == ((0, 3), (1, 4), (2, 2), (3, 1), (2, 1), (3, 2))
        assert rd.count == 6

    def test_empty(self):
        assert run_decompose(seq([], a=2)).runs == ()

    def test_concat_inverse(self):
        x = seq("010022113332")
        rd = run_decompose(x)
        assert rd.concat(x.alphabet) == x
        assert sum(rd.lengths()) == len(x)
        syms = rd.symbols()
        assert all(syms[i] != syms[i + 1] for i in range(len(syms) - 1))


class TestApplyEditPattern:
    def test_two_deletions(self):
        out = apply_edit_pattern(seq("00000"), make_pattern("d d n n n"))
        assert out == seq("000")

    def test_identity(self):
        x = seq("0121021")
        assert apply_edit_pattern(x, EditPattern.identity(len(x))) == x

    def test_remark_deletions(self):
        # 0(1)11(2)23 with the marked symbols removed
        out = apply_edit_pattern(seq("0111223"), make_pattern("n d n n d n n"))
        assert out == seq("01123")

    def test_insert_content(self):
        out = apply_edit_pattern(seq("00"), make_pattern("n i1 n"))
        assert out == seq("010")

    def test_length_mismatch(self):
        with pytest.raises(PatternLengthMismatch):
            apply_edit_pattern(seq("00"), make_pattern("n n n"))

    def test_content_out_of_range(self):
        with pytest.raises(SymbolOutOfRange):
            apply_edit_pattern(seq("00"), make_pattern("n i7 n"))

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_length_law(self, data):
        n = data.draw(st.integers(0, 12))
        a = data.draw(st.sampled_from([2, 3, 5]))
        x = seq(data.draw(st.lists(st.integers(0, a - 1), min_size=n, max_size=n)), a)
        ops, contents = [], []
        for _ in range(n):
            kind = data.draw(st.sampled_from([NOOP, DELETE, INSERT]))
            if kind == INSERT:
                contents.append(data.draw(st.integers(0, a - 1)))
                ops.append(INSERT)
                ops.append(NOOP)  # keep source consumption intact
            else:
                ops.append(kind)
        pattern = EditPattern(np.array(ops, dtype=np.uint8), contents)
        out = apply_edit_pattern(x, pattern)
        assert len(out) == len(x) - pattern.k_del + pattern.k_ins

    def test_determinism(self):
        x = seq("0011223")
        p = make_pattern("n d i2 n n n d n")
        assert apply_edit_pattern(x, p) == apply_edit_pattern(x, p)


def _random_edit_process(draws, x, count, a):
    edits = []
    cur_len = len(x)
    for _ in range(count):
        can_delete = cur_len > 0
        do_insert = not can_delete or draws.below(2) == 0
        if do_insert:
            edits.append(
                ArbitraryEdit(draws.below(cur_len + 1), INSERT, draws.below(a))
            )
            cur_len += 1
        else:
            edits.append(ArbitraryEdit(1 + draws.below(cur_len), DELETE))
            cur_len -= 1
    return edits


class TestCanonicalizeArbitrary:
    def test_self_cancelling_pair(self):
        x = seq("000")
        edits = [ArbitraryEdit(1, INSERT, 1), ArbitraryEdit(2, DELETE)]
        assert canonicalize_arbitrary(x, edits) == ((), ())

    def test_empty_process(self):
        assert canonicalize_arbitrary(seq("01"), []) == ((), ())

    def test_cursor_out_of_range(self):
        with pytest.raises(CursorOutOfRange):
            canonicalize_arbitrary(seq("01"), [ArbitraryEdit(5, DELETE)])

    def test_replay_equivalence_randomized(self):
        # ten thousand seeded 6-edit processes on |x| = 8 over a = 3
        for trial in range(10_000):
            draws = _Draws(trial, 0xABCDE)
            x = Sequence(Alphabet(3), [draws.below(3) for _ in range(8)])
            edits = _random_edit_process(draws, x, 6, 3)
            direct = replay_arbitrary(x, edits)
            deletions, insertions = canonicalize_arbitrary(x, edits)
            assert len(deletions) + len(insertions) <= 6
            assert apply_canonical(x, deletions, insertions) == direct

    def test_replay_equivalence_exhaustive_small(self):
        # all <=2-edit processes on every |x| <= 3 over a = 3, plus a
        # 3-edit sweep on fixed sources
        a = 3
        sources = []
        for n in range(0, 4):
            for idx in range(a**n):
                digits = [(idx // a**k) % a for k in range(n)]
                sources.append(Sequence(Alphabet(a), digits))

        def all_edits(cur_len):
            yield from (
                ArbitraryEdit(c, INSERT, s)
                for c in range(cur_len + 1)
                for s in range(a)
            )
            yield from (ArbitraryEdit(c, DELETE) for c in range(1, cur_len + 1))

        def check(x, edits, cur_len, depth):
            direct = replay_arbitrary(x, edits)
            deletions, insertions = canonicalize_arbitrary(x, edits)
            assert apply_canonical(x, deletions, insertions) == direct
            if depth == 0:
                return
            for e in all_edits(cur_len):
                nxt = cur_len + (1 if e.op == INSERT else -1)
                check(x, edits + [e], nxt, depth - 1)

        for x in sources:
            check(x, [], len(x), 2)

        fixed = [seq("01201"), seq("00000", 3), seq("21012")]
        for x in fixed:
            check(x, [], len(x), 3)


class TestSequence:
    def test_bytes_roundtrip(self):
        x = Sequence.from_bytes(bytes(range(20)))
        assert x.alphabet.size == 256
        assert x.to_bytes() == bytes(range(20))

    def test_wide_alphabet_bytes(self):
        x = Sequence(Alphabet(65536), [0, 1, 65535])
        assert Sequence(Alphabet(65536), np.frombuffer(x.to_bytes(), dtype="<u2")) == x

    def test_alphabet_bounds(self):
        with pytest.raises(SymbolOutOfRange):
            Alphabet(1)
        with pytest.raises(SymbolOutOfRange):
            Alphabet(70000)
        with pytest.raises(SymbolOutOfRange):
            Sequence(Alphabet(2), [0, 2])

    def test_immutable(self):
        x = seq("0101")
        with pytest.raises(ValueError):
            x.symbols[0] = 1
