import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indelsync import (
    EditPattern,
    extended_run_edit_counts,
    recombine,
    run_edit_counts,
    seq,
    typicalize,
    typicalized_posess,
)
from indelsync.errors import ComplementMisaligned
from indelsync.lab import CBLANK, CDEL, enumerate_edit_patterns
from indelsync.sim import RpesParams, gen_ltrrid, gen_pre_ess

from conftest import make_pattern

# Six-run worked instance: x has runs 000, 1111, 22, 3, 2, 33 and the edit
# pattern puts one edit in run 1 (insert 0), three in run 2 (insert 4,
# delete a 1, insert 1), one in run 3 (delete its first 2), one in run 6
# (delete its first 3).
SIX_RUN_X = "0001111223233"
SIX_RUN_PATTERN = "n i0 n n n n i4 d i1 n d n n n d n"


class TestEditCounts:
    def test_six_run_instance(self):
        x = seq(SIX_RUN_X)
        e = make_pattern(SIX_RUN_PATTERN)
        assert e.k_ins == 3 and e.k_del == 3
        assert run_edit_counts(x, e) == (1, 3, 1, 0, 0, 1)
        assert extended_run_edit_counts(x, e) == (1, 4, 1, 0, 1, 1)

    def test_remark_deletions_counts(self):
        x = seq("0111223")
        e = make_pattern("n d n n d n n")
        ext = extended_run_edit_counts(x, e)
        assert ext[1] == 2  # run 111
        assert ext[2] == 1  # run 22
        assert ext == (1, 2, 1, 0)

    def test_no_edits(self):
        x = seq("0011")
        e = EditPattern.identity(4)
        assert extended_run_edit_counts(x, e) == (0, 0)
        assert run_edit_counts(x, e) == (0, 0)

    def test_boundary_insertion_counts_both(self):
        x = seq("0011")
        e = make_pattern("n n i1 n n")  # insert at the 00|11 boundary
        assert extended_run_edit_counts(x, e) == (1, 1)
        assert run_edit_counts(x, e) == (1, 1)


class TestTypicalize:
    def test_remark_example_one(self):
        # deletions at both marked symbols; the run-111 deletion is dropped
        x = seq("0111223")
        tp = typicalize(x, make_pattern("n d n n d n n"))
        assert tp.e_hat == make_pattern("n n n n d n n")
        assert typicalized_posess(x, tp) == seq("011123")
        assert list(tp.complement_ops) == [CBLANK, CDEL] + [CBLANK] * 5

    def test_remark_example_two(self):
        # the boundary insertion of 4 sits in an over-edited extended run
        x = seq("0111223")
        tp = typicalize(x, make_pattern("n n n n i4 n n d"))
        assert tp.e_hat == make_pattern("n n n n n n d")
        assert typicalized_posess(x, tp) == seq("011122", 4)
        assert list(tp.complement_contents) == [4]

    def test_six_run_instance(self):
        x = seq(SIX_RUN_X)
        e = make_pattern(SIX_RUN_PATTERN)
        tp = typicalize(x, e)
        # only the three run-2 edits are eliminated
        assert tp.eliminated == 3
        assert tp.e_hat == make_pattern("n i0 n n n n n n d n n n d n")
        y_hat = typicalized_posess(x, tp)
        assert y_hat == seq("000011112323")
        # the second source run survives untouched in the typicalized output
        assert list(y_hat.symbols[4:8]) == [1, 1, 1, 1]

    def test_all_noop_unchanged(self):
        x = seq("010203", 4)
        e = EditPattern.identity(6)
        tp = typicalize(x, e)
        assert tp.e_hat == e and tp.eliminated == 0

    def test_multi_parent_counts_can_stay_two(self):
        # both neighbours of the middle run lose their boundary symbol; the
        # pattern is a typicalization fixed point although the middle run's
        # extended count is 2 (its own runs own nothing)
        x = seq("01020")
        e = make_pattern("n d n d n")
        tp = typicalize(x, e)
        assert tp.e_hat == e
        assert extended_run_edit_counts(x, tp.e_hat) == (1, 1, 2, 1, 1)
        assert max(run_edit_counts(x, tp.e_hat)) <= 1

    def test_length_law(self):
        x = seq(SIX_RUN_X)
        tp = typicalize(x, make_pattern(SIX_RUN_PATTERN))
        y_hat = typicalized_posess(x, tp)
        assert len(y_hat) == len(x) - tp.k_del + tp.k_ins


def _typicality_property(x, e_hat):
    """Every run owns at most one edit; owned edits sit alone in their zones."""
    own = run_edit_counts(x, e_hat)
    ext = extended_run_edit_counts(x, e_hat)
    assert max(own, default=0) <= 1
    for o, c in zip(own, ext):
        if o:
            assert c == 1


class TestRoundTrip:
    def test_exhaustive_small_binary(self):
        # acceptance criterion 5 runs the full n <= 6 sweep; this keeps a
        # faster everyday version
        for bits in range(1, 32):
            n = bits.bit_length()
            digits = [(bits >> k) & 1 for k in range(n)]
            x = seq(digits, 2)
            for e in enumerate_edit_patterns(x, 2, 2):
                tp = typicalize(x, e)
                assert recombine(tp) == e
                _typicality_property(x, tp.e_hat)
                assert typicalize(x, tp.e_hat).e_hat == tp.e_hat  # idempotent

    def test_exhaustive_ternary_short(self):
        for idx in range(3**4):
            digits = [(idx // 3**k) % 3 for k in range(4)]
            x = seq(digits, 3)
            for e in enumerate_edit_patterns(x, 1, 1):
                tp = typicalize(x, e)
                assert recombine(tp) == e
                _typicality_property(x, tp.e_hat)

    def test_randomized_n50(self):
        for trial in range(1500):
            x = gen_pre_ess(50, 3, trial)
            e, _ = gen_ltrrid(x, RpesParams(50, 3, 0.12, 0.12, trial + 1))
            tp = typicalize(x, e)
            assert recombine(tp) == e
            _typicality_property(x, tp.e_hat)

    @given(st.integers(0, 2**31), st.sampled_from([2, 3, 5]))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_property(self, trial, a):
        x = gen_pre_ess(30, a, trial)
        e, _ = gen_ltrrid(x, RpesParams(30, a, 0.2, 0.2, trial))
        tp = typicalize(x, e)
        assert recombine(tp) == e

    def test_empty_complement_is_identity(self):
        x = seq("0123", 4)
        e = make_pattern("n n d n")
        tp = typicalize(x, e)
        assert tp.eliminated == 0
        assert recombine(tp) == e

    def test_complement_misaligned(self):
        x = seq("0011")
        tp = typicalize(x, make_pattern("n d n n"))
        bad = type(tp)(tp.e_hat, tp.complement_ops[:-1], tp.complement_contents)
        with pytest.raises(ComplementMisaligned):
            recombine(bad)
