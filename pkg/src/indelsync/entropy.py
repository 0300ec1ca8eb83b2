"""Entropy coding of the op stream and the insertion-content stream.

Each stream is coded independently by the adaptive range coder and carries a
CRC-32 of the decoded payload as a 4-byte little-endian trailer, so a
desynchronized model is detected instead of returning wrong data.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from . import rangecoder
from .core import Alphabet, EditPattern
from .errors import ModelDesync, SymbolOutOfRange, TruncatedStream

_OP_ALPHABET = 3


@dataclass(frozen=True)
class BitStream:
    """Octet container; bit_length <= 8*len(data), pad bits zero."""

    data: bytes
    bit_length: int

    def __post_init__(self):
        if not 0 <= self.bit_length <= 8 * len(self.data):
            raise TruncatedStream("bit_length inconsistent with payload size")

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitStream":
        return cls(data, 8 * len(data))


@dataclass(frozen=True)
class OpStats:
    """Edit-op counts and the empirical distribution they induce.

    With eps~ = n_ins / n_src and delta~ = n_del / n_src over the n_src
    consuming ops, the op frequencies are p_noop = (1-delta~)/(1+eps~),
    p_ins = eps~/(1+eps~) and p_del = delta~/(1+eps~).
    """

    n_ops: int
    n_ins: int
    n_del: int

    @property
    def n_src(self) -> int:
        return self.n_ops - self.n_ins

    @property
    def eps_tilde(self) -> float:
        return self.n_ins / self.n_src if self.n_src else 0.0

    @property
    def delta_tilde(self) -> float:
        return self.n_del / self.n_src if self.n_src else 0.0

    @property
    def p_noop(self) -> float:
        return (self.n_src - self.n_del) / self.n_ops if self.n_ops else 0.0

    @property
    def p_ins(self) -> float:
        return self.n_ins / self.n_ops if self.n_ops else 0.0

    @property
    def p_del(self) -> float:
        return self.n_del / self.n_ops if self.n_ops else 0.0

    @classmethod
    def from_pattern(cls, pattern: EditPattern) -> "OpStats":
        return cls(len(pattern), pattern.k_ins, pattern.k_del)

    @classmethod
    def from_ops(cls, ops: np.ndarray) -> "OpStats":
        ops = np.asarray(ops)
        return cls(
            int(ops.size),
            int(np.count_nonzero(ops == 2)),
            int(np.count_nonzero(ops == 1)),
        )


def empirical_op_entropy(stats: OpStats) -> float:
    """Entropy in bits per op of the ternary empirical distribution."""
    h = 0.0
    for p in (stats.p_noop, stats.p_ins, stats.p_del):
        if p > 0.0:
            h -= p * math.log2(p)
    return h


def _crc(payload: bytes) -> bytes:
    return (zlib.crc32(payload) & 0xFFFFFFFF).to_bytes(4, "little")


def _wrap(coded: bytes, decoded_payload: bytes) -> BitStream:
    data = coded + _crc(decoded_payload)
    return BitStream(data, 8 * len(data))


def _unwrap(bits: BitStream) -> bytes:
    if len(bits.data) < 4:
        raise TruncatedStream("stream shorter than its checksum trailer")
    return bits.data[:-4]


def _check(bits: BitStream, decoded_payload: bytes) -> None:
    if bits.data[-4:] != _crc(decoded_payload):
        raise ModelDesync("decoded stream fails its checksum")


def encode_ops(ops) -> BitStream:
    """Compress an op-kind stream (codes 0/1/2); empty stream is empty bytes."""
    arr = np.ascontiguousarray(ops, dtype=np.uint8)
    if arr.size and int(arr.max()) >= _OP_ALPHABET:
        raise SymbolOutOfRange("op codes must be 0, 1 or 2")
    if arr.size == 0:
        return BitStream(b"", 0)
    coded = rangecoder.encode_symbols(arr, _OP_ALPHABET)
    return _wrap(coded, arr.tobytes())


def decode_ops(bits: BitStream, n_ops: int) -> np.ndarray:
    if n_ops == 0:
        return np.empty(0, dtype=np.uint8)
    coded = _unwrap(bits)
    symbols, truncated = rangecoder.decode_symbols(coded, n_ops, _OP_ALPHABET)
    if truncated:
        raise TruncatedStream("op stream ended mid-decode")
    out = symbols.astype(np.uint8)
    _check(bits, out.tobytes())
    return out


_MODE_RAW = 0
_MODE_ADAPTIVE = 1


def _raw_width(a: int) -> int:
    return max(1, (a - 1).bit_length())


def _pack_raw(arr: np.ndarray, a: int) -> bytes:
    w = _raw_width(a)
    shifts = np.arange(w - 1, -1, -1, dtype=np.uint16)
    bits = ((arr[:, None] >> shifts) & 1).astype(np.uint8).ravel()
    return np.packbits(bits).tobytes()


def _unpack_raw(data: bytes, count: int, a: int) -> np.ndarray:
    w = _raw_width(a)
    need = count * w
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if bits.size < need:
        raise TruncatedStream("raw content stream shorter than promised")
    bits = bits[:need].reshape(count, w).astype(np.uint16)
    weights = (1 << np.arange(w - 1, -1, -1)).astype(np.uint16)
    return (bits * weights).sum(axis=1).astype(np.uint16)


def encode_contents(symbols, alphabet: Alphabet) -> BitStream:
    """Insertion contents: raw fixed-width or adaptively coded, whichever is
    smaller (first byte says which).  Near-uniform contents stay within a
    fixed overhead of count * log2(a); skewed contents compress."""
    arr = np.ascontiguousarray(symbols, dtype=np.uint16)
    alphabet.check_symbols(arr)
    if arr.size == 0:
        return BitStream(b"", 0)
    raw = _pack_raw(arr, alphabet.size)
    adaptive = rangecoder.encode_symbols(arr, alphabet.size)
    if len(raw) <= len(adaptive):
        payload = bytes([_MODE_RAW]) + raw
    else:
        payload = bytes([_MODE_ADAPTIVE]) + adaptive
    return _wrap(payload, arr.astype("<u2").tobytes())


def decode_contents(bits: BitStream, count: int, alphabet: Alphabet) -> np.ndarray:
    if count == 0:
        return np.empty(0, dtype=np.uint16)
    payload = _unwrap(bits)
    if not payload:
        raise TruncatedStream("content stream missing its mode byte")
    mode, body = payload[0], payload[1:]
    if mode == _MODE_RAW:
        out = _unpack_raw(body, count, alphabet.size)
    elif mode == _MODE_ADAPTIVE:
        symbols, truncated = rangecoder.decode_symbols(body, count, alphabet.size)
        if truncated:
            raise TruncatedStream("content stream ended mid-decode")
        out = symbols.astype(np.uint16)
    else:
        raise ModelDesync(f"unknown content stream mode {mode}")
    alphabet.check_symbols(out)
    _check(bits, out.astype("<u2").tobytes())
    return out
