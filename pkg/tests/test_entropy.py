import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indelsync import (
    Alphabet,
    BitStream,
    OpStats,
    decode_contents,
    decode_ops,
    empirical_op_entropy,
    encode_contents,
    encode_ops,
)
from indelsync.bounds import LOG2E, binary_entropy
from indelsync.errors import ModelDesync, SymbolOutOfRange, TruncatedStream
from indelsync.sim import _Draws


def ternary_stream(seed: int, n: int, p_ins: float, p_del: float) -> np.ndarray:
    draws = _Draws(seed, 0x0935)
    u = draws.take(n).astype(np.float64) / 2.0**64
    ops = np.zeros(n, dtype=np.uint8)
    ops[u < p_del] = 1
    ops[(u >= p_del) & (u < p_del + p_ins)] = 2
    return ops


class TestOpStats:
    def test_probabilities_sum_to_one(self):
        stats = OpStats(n_ops=120, n_ins=20, n_del=30)
        assert stats.p_noop + stats.p_ins + stats.p_del == pytest.approx(1.0)

    def test_appendix_form(self):
        # p_noop = (1 - delta~) / (1 + eps~) etc. against raw counts
        stats = OpStats(n_ops=110, n_ins=10, n_del=7)
        e, d = stats.eps_tilde, stats.delta_tilde
        assert stats.p_noop == pytest.approx((1 - d) / (1 + e))
        assert stats.p_ins == pytest.approx(e / (1 + e))
        assert stats.p_del == pytest.approx(d / (1 + e))

    def test_entropy_trivial(self):
        assert empirical_op_entropy(OpStats(100, 0, 0)) == 0.0

    def test_entropy_uniform_ternary(self):
        stats = OpStats(n_ops=300, n_ins=100, n_del=100)
        assert empirical_op_entropy(stats) == pytest.approx(math.log2(3.0))

    def test_deletion_only_half(self):
        # eps~ = 0, delta~ = 1/2: one bit per op and per source symbol
        stats = OpStats(n_ops=100, n_ins=0, n_del=50)
        per_op = empirical_op_entropy(stats)
        assert per_op == pytest.approx(1.0)
        assert (1 + stats.eps_tilde) * per_op == pytest.approx(binary_entropy(0.5))

    def test_per_source_symbol_expansion(self):
        # (1+e)H_op = H(delta~) + H(eps~) + log2(e) eps~^2 + O(eps~^4)
        stats = OpStats(n_ops=101_000, n_ins=1_000, n_del=1_000)
        e, d = stats.eps_tilde, stats.delta_tilde
        lhs = (1 + e) * empirical_op_entropy(stats)
        rhs = binary_entropy(d) + binary_entropy(e) + LOG2E * e * e
        assert lhs == pytest.approx(rhs, abs=1e-7)


class TestOpsRoundTrip:
    def test_exact_roundtrip_many(self):
        for seed in range(300):
            n = 1 + (seed * 37) % 400
            ops = ternary_stream(seed, n, 0.25, 0.25)
            bits = encode_ops(ops)
            assert np.array_equal(decode_ops(bits, n), ops)

    def test_long_streams(self):
        for seed, (pi, pd) in enumerate([(0.01, 0.01), (0.3, 0.1), (0.0, 0.0)]):
            ops = ternary_stream(seed, 10_000, pi, pd)
            bits = encode_ops(ops)
            assert np.array_equal(decode_ops(bits, 10_000), ops)

    def test_empty(self):
        bits = encode_ops(np.empty(0, dtype=np.uint8))
        assert bits.bit_length == 0
        assert decode_ops(bits, 0).size == 0

    @given(st.lists(st.integers(0, 2), min_size=0, max_size=300))
    @settings(max_examples=80, deadline=None)
    def test_roundtrip_property(self, ops):
        arr = np.array(ops, dtype=np.uint8)
        bits = encode_ops(arr)
        assert np.array_equal(decode_ops(bits, arr.size), arr)

    def test_determinism(self):
        ops = ternary_stream(1, 5000, 0.1, 0.05)
        assert encode_ops(ops).data == encode_ops(ops).data


class TestOpsRate:
    def test_all_noop_overhead(self):
        bits = encode_ops(np.zeros(1000, dtype=np.uint8))
        assert bits.bit_length <= 64 + 0.02 * 1000

    def test_near_entropy_small_rates(self):
        n = 100_000
        ops = ternary_stream(3, n, 0.0099, 0.0099)
        stats = OpStats.from_ops(ops)
        bits = encode_ops(ops)
        budget = n * empirical_op_entropy(stats) + 64 + 0.02 * n
        assert bits.bit_length <= budget

    def test_near_entropy_assorted(self):
        for seed, (pi, pd) in enumerate([(0.3, 0.3), (0.05, 0.2), (0.5, 0.0)]):
            n = 10_000
            ops = ternary_stream(seed + 9, n, pi, pd)
            stats = OpStats.from_ops(ops)
            bits = encode_ops(ops)
            assert bits.bit_length <= n * empirical_op_entropy(stats) + 64 + 0.02 * n


class TestContents:
    def test_empty_contents(self):
        bits = encode_contents([], Alphabet(256))
        assert bits.bit_length == 0 and bits.data == b""

    def test_uniform_bytes_rate(self):
        draws = _Draws(4, 0xC0)
        symbols = np.array([draws.below(256) for _ in range(1000)], dtype=np.uint16)
        bits = encode_contents(symbols, Alphabet(256))
        assert abs(bits.bit_length - 8000) <= 64 + 0.02 * 8000
        assert np.array_equal(decode_contents(bits, 1000, Alphabet(256)), symbols)

    def test_constant_symbols_compress(self):
        symbols = np.full(1000, 7, dtype=np.uint16)
        bits = encode_contents(symbols, Alphabet(256))
        assert bits.bit_length < 1500
        assert np.array_equal(decode_contents(bits, 1000, Alphabet(256)), symbols)

    def test_wide_alphabet(self):
        draws = _Draws(5, 0xC1)
        symbols = np.array([draws.below(65536) for _ in range(500)], dtype=np.uint16)
        bits = encode_contents(symbols, Alphabet(65536))
        assert np.array_equal(decode_contents(bits, 500, Alphabet(65536)), symbols)

    def test_symbol_out_of_range(self):
        with pytest.raises(SymbolOutOfRange):
            encode_contents([4], Alphabet(4))

    @given(st.integers(2, 9), st.lists(st.integers(0, 8), max_size=120))
    @settings(max_examples=80, deadline=None)
    def test_roundtrip_property(self, a, values):
        symbols = np.array([v % a for v in values], dtype=np.uint16)
        bits = encode_contents(symbols, Alphabet(a))
        assert np.array_equal(decode_contents(bits, symbols.size, Alphabet(a)), symbols)


class TestStreamErrors:
    def test_truncated(self):
        ops = ternary_stream(7, 2000, 0.2, 0.2)
        bits = encode_ops(ops)
        keep = len(bits.data) // 4
        clipped = BitStream(bits.data[:keep], 8 * keep)
        with pytest.raises((TruncatedStream, ModelDesync)):
            decode_ops(clipped, 2000)

    def test_model_desync_checksum(self):
        ops = ternary_stream(8, 2000, 0.2, 0.2)
        bits = encode_ops(ops)
        corrupted = bytearray(bits.data)
        corrupted[len(corrupted) // 2] ^= 0x40
        with pytest.raises((ModelDesync, TruncatedStream)):
            decode_ops(BitStream(bytes(corrupted), bits.bit_length), 2000)

    def test_too_short_for_checksum(self):
        with pytest.raises(TruncatedStream):
            decode_ops(BitStream(b"\x01", 8), 5)
