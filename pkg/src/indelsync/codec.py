"""End-to-end update codec: encode (X, Y) into a self-delimiting container,
decode it against X to reproduce Y exactly.

Container layout (version 1, little-endian):

    magic "IDU1" | version u8 | coder u8 | varint a | varint n | varint m
    | varint k_ins | varint k_del | y_digest u64
    | varint op_bit_length    | op stream bytes
    | varint cont_bit_length  | content stream bytes

The digest is FNV-1a 64 over Y's canonical bytes; it turns a wrong or
corrupted reconstruction into a DigestMismatch instead of silent bad output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from . import entropy
from .core import EditPattern, Sequence, apply_edit_pattern
from .dp import edit_distance_banded, edit_distance_full
from .errors import (
    AlphabetMismatch,
    BadMagic,
    DigestMismatch,
    TruncatedStream,
    VersionUnsupported,
)

MAGIC = b"IDU1"
VERSION = 1
CODER_ID = 1

# Above this length the encoder pre-splits at unique matching windows before
# running the banded DP on the pieces; keeps n*k work bounded on big files.
_ANCHOR_THRESHOLD = 4096
_ANCHOR_WINDOW = 64
_ANCHOR_STRIDE = 128


@njit(cache=True)
def _fnv_kernel(arr):
    h = np.uint64(0xCBF29CE484222325)
    prime = np.uint64(0x100000001B3)
    for i in range(arr.shape[0]):
        h = (h ^ np.uint64(arr[i])) * prime
    return h


def fnv1a64(data: bytes) -> int:
    """FNV-1a with 64-bit wraparound, the container's published digest."""
    return int(_fnv_kernel(np.frombuffer(data, dtype=np.uint8)))


def digest_sequence(x: Sequence) -> int:
    """Digest over the canonical byte form (equals the raw file digest for
    byte alphabets)."""
    return fnv1a64(x.to_bytes())


def _write_varint(out: bytearray, value: int) -> None:
    while True:
        b = value & 0x7F
        value >>= 7
        if value:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    shift = value = 0
    while True:
        if pos >= len(data):
            raise TruncatedStream("container ended inside a varint")
        b = data[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        if not b & 0x80:
            return value, pos
        shift += 7


@dataclass(frozen=True)
class Transmission:
    alphabet_size: int
    n: int
    m: int
    k_ins: int
    k_del: int
    y_digest: int
    op_bits: entropy.BitStream
    content_bits: entropy.BitStream
    coder_id: int = CODER_ID

    def __post_init__(self):
        if self.k_del - self.k_ins != self.n - self.m:
            raise TruncatedStream("edit counts inconsistent with lengths")

    def to_bytes(self) -> bytes:
        out = bytearray(MAGIC)
        out.append(VERSION)
        out.append(self.coder_id)
        for v in (self.alphabet_size, self.n, self.m, self.k_ins, self.k_del):
            _write_varint(out, v)
        out += self.y_digest.to_bytes(8, "little")
        for bits in (self.op_bits, self.content_bits):
            _write_varint(out, bits.bit_length)
            out += bits.data
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Transmission":
        if data[:4] != MAGIC:
            raise BadMagic("not an update container")
        if len(data) < 6:
            raise TruncatedStream("container shorter than its fixed header")
        if data[4] != VERSION:
            raise VersionUnsupported(f"container version {data[4]}")
        coder = data[5]
        if coder != CODER_ID:
            raise VersionUnsupported(f"unknown coder id {coder}")
        pos = 6
        fields = []
        for _ in range(5):
            v, pos = _read_varint(data, pos)
            fields.append(v)
        if pos + 8 > len(data):
            raise TruncatedStream("container ended inside the digest")
        digest = int.from_bytes(data[pos : pos + 8], "little")
        pos += 8
        streams = []
        for _ in range(2):
            bit_length, pos = _read_varint(data, pos)
            nbytes = (bit_length + 7) // 8
            if pos + nbytes > len(data):
                raise TruncatedStream("container ended inside a bit stream")
            streams.append(entropy.BitStream(data[pos : pos + nbytes], bit_length))
            pos += nbytes
        a, n, m, k_ins, k_del = fields
        return cls(a, n, m, k_ins, k_del, digest, streams[0], streams[1], coder)


@dataclass(frozen=True)
class RateReport:
    total_bits: int
    bits_per_source_symbol: float
    terms: dict


# --- minimal script selection -------------------------------------------------


def _rolling_window_hashes(arr: np.ndarray, w: int) -> np.ndarray:
    """Position-independent 64-bit hashes of every length-w window."""
    base = np.uint64(0x100000001B3)
    inv = np.uint64(pow(0x100000001B3, -1, 1 << 64))
    n = arr.size - w + 1
    powers = np.empty(arr.size + 1, dtype=np.uint64)
    powers[0] = 1
    np.cumprod(np.full(arr.size, inv, dtype=np.uint64), out=powers[1:])
    weighted = (arr.astype(np.uint64) + np.uint64(0x9E37)) * powers[:-1]
    prefix = np.zeros(arr.size + 1, dtype=np.uint64)
    np.cumsum(weighted, out=prefix[1:])
    span = prefix[w : w + n] - prefix[:n]
    scale = np.empty(n, dtype=np.uint64)
    np.cumprod(np.full(n, base, dtype=np.uint64), out=scale)
    return span * scale


def _unique_positions(hashes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values, first, counts = np.unique(hashes, return_index=True, return_counts=True)
    keep = counts == 1
    return values[keep], first[keep]


def _anchor_chain(x: np.ndarray, y: np.ndarray, w: int) -> list[tuple[int, int]]:
    if x.size < w or y.size < w:
        return []
    hx = _rolling_window_hashes(x, w)
    hy = _rolling_window_hashes(y, w)
    vx, px = _unique_positions(hx)
    vy, py = _unique_positions(hy)
    common, ix, iy = np.intersect1d(vx, vy, return_indices=True)
    if common.size == 0:
        return []
    xi = px[ix]
    yj = py[iy]
    order = np.argsort(xi, kind="stable")
    xi, yj = xi[order], yj[order]
    # thin to one candidate per stride bucket before the python chain loop
    _, bucket_first = np.unique(xi // _ANCHOR_STRIDE, return_index=True)
    xi, yj = xi[bucket_first], yj[bucket_first]
    chain: list[tuple[int, int]] = []
    prev_i = prev_j = -(10**9)
    for i, j in zip(xi.tolist(), yj.tolist()):
        if i < prev_i + w or j < prev_j + w:
            continue
        if not np.array_equal(x[i : i + w], y[j : j + w]):
            continue  # 64-bit hash collision; just skip the candidate
        chain.append((i, j))
        prev_i, prev_j = i, j
    return chain


def _script_banded(x: Sequence, y: Sequence) -> EditPattern:
    return edit_distance_banded(x, y).script


def _script_anchored(x: Sequence, y: Sequence) -> EditPattern:
    """Split at unique matching windows, solve the pieces exactly, stitch."""
    chain = _anchor_chain(x.symbols, y.symbols, _ANCHOR_WINDOW)
    if not chain:
        return _script_banded(x, y)
    ops_parts: list[np.ndarray] = []
    content_parts: list[np.ndarray] = []
    anchor_ops = np.zeros(_ANCHOR_WINDOW, dtype=np.uint8)  # NOOP run
    px = py = 0
    for i, j in chain + [(len(x), len(y))]:
        piece = edit_distance_banded(
            Sequence(x.alphabet, x.symbols[px:i]),
            Sequence(y.alphabet, y.symbols[py:j]),
        ).script
        ops_parts.append(piece.ops)
        content_parts.append(piece.contents)
        if i < len(x) or j < len(y):
            ops_parts.append(anchor_ops)
        px, py = i + _ANCHOR_WINDOW, j + _ANCHOR_WINDOW
    ops = np.concatenate(ops_parts) if ops_parts else np.empty(0, np.uint8)
    contents = (
        np.concatenate(content_parts) if content_parts else np.empty(0, np.uint16)
    )
    return EditPattern(ops, contents)


def minimal_edit_script(x: Sequence, y: Sequence, oracle_dp: bool = False) -> EditPattern:
    """Edit script with the fewest insertions + deletions converting x to y.

    oracle_dp forces the quadratic reference DP.  Large inputs go through the
    anchored splitter; its pieces are solved by the exact banded DP.
    """
    if oracle_dp:
        return edit_distance_full(x, y).script
    if max(len(x), len(y)) > _ANCHOR_THRESHOLD:
        return _script_anchored(x, y)
    return _script_banded(x, y)


# --- encoder / decoder --------------------------------------------------------


def encode(x: Sequence, y: Sequence, oracle_dp: bool = False) -> Transmission:
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch(
            f"alphabet sizes differ: {x.alphabet.size} vs {y.alphabet.size}"
        )
    script = minimal_edit_script(x, y, oracle_dp=oracle_dp)
    op_bits = entropy.encode_ops(script.ops)
    content_bits = entropy.encode_contents(script.contents, x.alphabet)
    return Transmission(
        alphabet_size=x.alphabet.size,
        n=len(x),
        m=len(y),
        k_ins=script.k_ins,
        k_del=script.k_del,
        y_digest=digest_sequence(y),
        op_bits=op_bits,
        content_bits=content_bits,
    )


def decode(x: Sequence, t: Transmission) -> Sequence:
    if x.alphabet.size != t.alphabet_size:
        raise AlphabetMismatch(
            f"container expects alphabet {t.alphabet_size}, got {x.alphabet.size}"
        )
    if len(x) != t.n:
        raise DigestMismatch(f"container expects |X| = {t.n}, got {len(x)}")
    n_ops = t.n + t.k_ins
    ops = entropy.decode_ops(t.op_bits, n_ops)
    contents = entropy.decode_contents(t.content_bits, t.k_ins, x.alphabet)
    pattern = EditPattern(ops, contents)
    if pattern.k_ins != t.k_ins or pattern.k_del != t.k_del:
        raise DigestMismatch("decoded op stream contradicts the header counts")
    y = apply_edit_pattern(x, pattern)
    if digest_sequence(y) != t.y_digest:
        raise DigestMismatch("reconstructed sequence fails the digest check")
    return y


def measure_rate(t: Transmission) -> RateReport:
    blob = t.to_bytes()
    total_bits = 8 * len(blob)
    op_bits = t.op_bits.bit_length
    content_bits = t.content_bits.bit_length
    terms = {
        "header_bits": total_bits - op_bits - content_bits,
        "op_bits": op_bits,
        "content_bits": content_bits,
    }
    per_symbol = total_bits / t.n if t.n else float(total_bits)
    return RateReport(total_bits, per_symbol, terms)
