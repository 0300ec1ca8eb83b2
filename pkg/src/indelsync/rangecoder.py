"""Adaptive order-0 range coder, bit-exact across builds.

Stream layout promise (any change bumps the container coder id):

* 32-bit range coder, 64-bit low with carry propagation into emitted bytes
  (cache byte + pending-0xFF run).  Renormalization emits a byte whenever
  range < 2^24; the first emitted byte is always 0x00 and the decoder skips
  it; flush emits five more bytes.
* Interval split: r = range // total; symbol s with cumulative count cum and
  count f gets [low + r*cum, low + r*cum + r*f), except the top symbol
  (cum + f == total) which absorbs the remainder: width range - r*cum.
* Adaptive model: per-symbol counts start at 1, total = alphabet size;
  after each symbol its count grows by 32; when total reaches
  max(2^16, 2 * alphabet) every count is halved rounding up.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_TOP_VALUE = np.uint64(0xFFFFFFFF)
_RENORM = np.uint64(1 << 24)
_INC = 32


@njit(cache=True)
def _rescale_limit(nsym):
    lim = 1 << 16
    if 2 * nsym > lim:
        lim = 2 * nsym
    return lim


@njit(cache=True)
def rc_encode(symbols, nsym, out):
    """Encode `symbols` (values < nsym) into `out`; returns bytes written."""
    freq = np.ones(nsym, dtype=np.uint32)
    total = np.uint64(nsym)
    limit = _rescale_limit(nsym)
    low = np.uint64(0)
    rng = _TOP_VALUE
    cache = np.uint64(0)
    pending = 0
    started = False
    pos = 0
    for idx in range(symbols.shape[0]):
        s = symbols[idx]
        cum = np.uint64(0)
        for t in range(s):
            cum += np.uint64(freq[t])
        f = np.uint64(freq[s])
        r = rng // total
        low += r * cum
        if cum + f == total:
            rng = rng - r * cum
        else:
            rng = r * f
        while rng < _RENORM:
            # shift_low with carry propagation
            if low < np.uint64(0xFF000000) or low > _TOP_VALUE:
                carry = low >> np.uint64(32)
                if started:
                    out[pos] = np.uint8((cache + carry) & np.uint64(0xFF))
                    pos += 1
                else:
                    started = True  # first byte is the zero cache; dropped
                while pending > 0:
                    out[pos] = np.uint8((np.uint64(0xFF) + carry) & np.uint64(0xFF))
                    pos += 1
                    pending -= 1
                cache = (low >> np.uint64(24)) & np.uint64(0xFF)
            else:
                pending += 1
            low = (low << np.uint64(8)) & _TOP_VALUE
            rng <<= np.uint64(8)
        freq[s] += _INC
        total += np.uint64(_INC)
        if total >= np.uint64(limit):
            total = np.uint64(0)
            for t in range(nsym):
                freq[t] = (freq[t] + 1) >> 1
                total += np.uint64(freq[t])
    for _ in range(5):
        if low < np.uint64(0xFF000000) or low > _TOP_VALUE:
            carry = low >> np.uint64(32)
            if started:
                out[pos] = np.uint8((cache + carry) & np.uint64(0xFF))
                pos += 1
            else:
                started = True
            while pending > 0:
                out[pos] = np.uint8((np.uint64(0xFF) + carry) & np.uint64(0xFF))
                pos += 1
                pending -= 1
            cache = (low >> np.uint64(24)) & np.uint64(0xFF)
        else:
            pending += 1
        low = (low << np.uint64(8)) & _TOP_VALUE
    return pos


@njit(cache=True)
def rc_decode(data, count, nsym, out):
    """Decode `count` symbols into `out`; returns 1 if input ran short."""
    freq = np.ones(nsym, dtype=np.uint32)
    total = np.uint64(nsym)
    limit = _rescale_limit(nsym)
    rng = _TOP_VALUE
    code = np.uint64(0)
    pos = 0
    truncated = 0
    for _ in range(4):  # leading zero byte is implicit; read 4 payload bytes
        b = np.uint64(0)
        if pos < data.shape[0]:
            b = np.uint64(data[pos])
        elif count > 0:
            truncated = 1
        pos += 1
        code = (code << np.uint64(8)) | b
    for idx in range(count):
        r = rng // total
        v = code // r
        if v >= total:
            v = total - np.uint64(1)
        cum = np.uint64(0)
        s = 0
        while cum + np.uint64(freq[s]) <= v:
            cum += np.uint64(freq[s])
            s += 1
        f = np.uint64(freq[s])
        code -= r * cum
        if cum + f == total:
            rng = rng - r * cum
        else:
            rng = r * f
        while rng < _RENORM:
            b = np.uint64(0)
            if pos < data.shape[0]:
                b = np.uint64(data[pos])
            else:
                truncated = 1
            pos += 1
            code = (code << np.uint64(8)) | b
            rng <<= np.uint64(8)
        out[idx] = s
        freq[s] += _INC
        total += np.uint64(_INC)
        if total >= np.uint64(limit):
            total = np.uint64(0)
            for t in range(nsym):
                freq[t] = (freq[t] + 1) >> 1
                total += np.uint64(freq[t])
    return truncated


def encode_symbols(symbols: np.ndarray, nsym: int) -> bytes:
    """Python-facing wrapper; symbols as any integer array with values < nsym."""
    arr = np.ascontiguousarray(symbols, dtype=np.uint32)
    out = np.empty(3 * arr.size + 16, dtype=np.uint8)
    used = rc_encode(arr, nsym, out)
    return out[:used].tobytes()


def decode_symbols(data: bytes, count: int, nsym: int) -> tuple[np.ndarray, bool]:
    buf = np.frombuffer(data, dtype=np.uint8)
    out = np.empty(count, dtype=np.uint32)
    truncated = rc_decode(buf, count, nsym, out)
    return out, bool(truncated)
