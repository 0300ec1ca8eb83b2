"""Seeded generators for both edit models, plus corpus file I/O.

Randomness comes from a counter-based splitmix64 stream so that a
(params, seed) pair reproduces the same corpus on every platform: the
value at index i of substream `tag` is mix64(subkey(seed, tag) + (i+1)*GOLDEN).
Uniform decisions compare raw 64-bit draws against floor(p * 2^64).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (
    Alphabet,
    ArbitraryEdit,
    DELETE,
    EditPattern,
    INSERT,
    NOOP,
    Sequence,
    apply_edit_pattern,
    canonicalize_arbitrary,
    replay_arbitrary,
)
from .errors import PolicyPreconditionViolated, SymbolOutOfRange

GOLDEN = np.uint64(0x9E3779B97F4A7C15)

_TAG_PRE = 0x101
_TAG_BURST = 0x202
_TAG_DEL = 0x303
_TAG_CONTENT = 0x404
_TAG_APES = 0x505


_MASK = 0xFFFFFFFFFFFFFFFF


def mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, vectorized over uint64 arrays."""
    z = np.atleast_1d(np.asarray(z, dtype=np.uint64))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def mix64_int(value: int) -> int:
    """splitmix64 finalizer on a plain integer."""
    z = value & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _subkey(seed: int, tag: int) -> np.uint64:
    return np.uint64(mix64_int((seed & _MASK) ^ mix64_int(tag)))


def _stream(key: np.uint64, start: int, count: int) -> np.ndarray:
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return mix64(key + idx * GOLDEN)


def _threshold(p: float) -> np.uint64:
    if p <= 0.0:
        return np.uint64(0)
    if p >= 1.0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64(int(p * 2.0**64))


class _Draws:
    """Sequential view over a splitmix64 substream."""

    def __init__(self, seed: int, tag: int):
        self.key = _subkey(seed, tag)
        self.pos = 0

    def take(self, count: int) -> np.ndarray:
        out = _stream(self.key, self.pos, count)
        self.pos += count
        return out

    def one(self) -> int:
        return int(self.take(1)[0])

    def below(self, n: int) -> int:
        """Uniform integer in [0, n); n may be a Python bigint.

        One spare 64-bit word keeps the modulo bias below 2^-64.
        """
        if n <= 1:
            return 0
        v = 0
        for _ in range(((n - 1).bit_length() + 63) // 64 + 1):
            v = (v << 64) | self.one()
        return v % n


@dataclass(frozen=True)
class RpesParams:
    n: int
    a: int
    eps: float
    delta: float
    seed: int

    def __post_init__(self):
        # eps + delta = 1 (all-delete / all-insert-then-delete) is still a
        # well-defined chain, so only the strictly impossible region is barred
        if not (0.0 <= self.eps < 1.0 and 0.0 <= self.delta <= 1.0):
            raise PolicyPreconditionViolated("need 0 <= eps < 1 and 0 <= delta <= 1")
        if self.eps + self.delta > 1.0:
            raise PolicyPreconditionViolated("need eps + delta <= 1")


@dataclass(frozen=True)
class ApesParams:
    n: int
    a: int
    max_ins: int
    max_del: int
    policy: str = "uniform"  # "uniform" | "worst_case_lb"
    seed: int = 0

    def __post_init__(self):
        if self.max_ins < 0 or self.max_del < 0:
            raise PolicyPreconditionViolated("edit budgets must be >= 0")
        if self.policy not in ("uniform", "worst_case_lb"):
            raise PolicyPreconditionViolated(f"unknown policy {self.policy!r}")

    @classmethod
    def from_rates(cls, n, a, eps, delta, policy="uniform", seed=0) -> "ApesParams":
        return cls(n, a, int(eps * n), int(delta * n), policy, seed)


def gen_pre_ess(n: int, a: int, seed: int) -> Sequence:
    """Length-n sequence of i.i.d. uniform symbols, reproducible per seed."""
    key = _subkey(seed, _TAG_PRE)
    symbols = _stream(key, 0, n) % np.uint64(a)
    return Sequence(Alphabet(a), symbols.astype(np.uint16))


def gen_ltrrid(x: Sequence, params: RpesParams) -> tuple[EditPattern, Sequence]:
    """One left-to-right pass: insert w.p. eps, else consume (delete w.p.
    delta/(1-eps), keep otherwise); stops after the n-th consume.

    Insertions form geometric bursts in the n+1 gaps (incl. before the first
    and after the last symbol), so the insertion count is NB(n+1, eps) and
    the deletion count is Binomial(n, delta/(1-eps)).
    """
    n = params.n
    if len(x) != n:
        raise PolicyPreconditionViolated(f"|x| = {len(x)} but params.n = {n}")
    eps_thr = _threshold(params.eps)
    del_thr = _threshold(params.delta / (1.0 - params.eps))

    burst_key = _subkey(params.seed, _TAG_BURST)
    # Burst length per gap: count of consecutive sub-draws below eps.
    bursts = np.zeros(n + 1, dtype=np.int64)
    if params.eps > 0.0:
        gap_keys = mix64(burst_key + np.arange(1, n + 2, dtype=np.uint64) * GOLDEN)
        active = np.arange(n + 1)
        t = 0
        while active.size:
            step = np.uint64(((t + 1) * 0x9E3779B97F4A7C15) & _MASK)
            draw = mix64(gap_keys[active] + step)
            hit = draw < eps_thr
            bursts[active[hit]] += 1
            active = active[hit]
            t += 1

    del_mask = _stream(_subkey(params.seed, _TAG_DEL), 0, n) < del_thr
    k_ins = int(bursts.sum())
    contents = _stream(_subkey(params.seed, _TAG_CONTENT), 0, k_ins) % np.uint64(
        params.a
    )

    ops = np.full(n + k_ins, INSERT, dtype=np.uint8)
    if n:
        slot_len = bursts + 1
        slot_len[-1] = bursts[-1]  # the final gap has no consume after it
        consume_at = np.cumsum(slot_len[:-1]) - 1
        ops[consume_at] = np.where(del_mask, DELETE, NOOP)
    pattern = EditPattern(ops, contents.astype(np.uint16))
    return pattern, apply_edit_pattern(x, pattern)


def _fisher_yates(order: list, draws: _Draws) -> list:
    for i in range(len(order) - 1, 0, -1):
        j = draws.below(i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def _unrank_combination(index: int, n: int, k: int) -> list[int]:
    """index-th k-subset of range(n) in colex-free ascending order."""
    out = []
    x = 0
    for slot in range(k, 0, -1):
        # choose the smallest c >= x with C(n-1-c, slot-1) covering index
        c = x
        while True:
            rest = math.comb(n - 1 - c, slot - 1)
            if index < rest:
                out.append(c)
                x = c + 1
                break
            index -= rest
            c += 1
    return out


def gen_apes(x: Sequence, params: ApesParams) -> tuple[list[ArbitraryEdit], Sequence]:
    """Sample an arbitrary edit process within the (max_ins, max_del) budget.

    uniform: counts uniform in [0, budget], positions/contents uniform,
    edit order shuffled, then separated into deletions-before-insertions.
    worst_case_lb: on the alternating source, non-pairwise-contiguous
    deletions followed by insertions drawn from symbols {2, .., a-1}; every
    sampled pattern yields a distinct output.
    """
    if len(x) != params.n:
        raise PolicyPreconditionViolated(f"|x| = {len(x)} but params.n = {params.n}")
    draws = _Draws(params.seed, _TAG_APES)
    if params.policy == "uniform":
        k_i = draws.below(params.max_ins + 1)
        k_d = draws.below(params.max_del + 1)
        kinds = _fisher_yates([INSERT] * k_i + [DELETE] * k_d, draws)
        raw: list[ArbitraryEdit] = []
        cur_len = len(x)
        for kind in kinds:
            if kind == INSERT:
                cursor = draws.below(cur_len + 1)
                raw.append(ArbitraryEdit(cursor, INSERT, draws.below(params.a)))
                cur_len += 1
            else:
                if cur_len == 0:
                    continue  # nothing left to delete; budget simply unused
                raw.append(ArbitraryEdit(1 + draws.below(cur_len), DELETE))
                cur_len -= 1
        deletions, insertions = canonicalize_arbitrary(x, raw)
        edits = [ArbitraryEdit(p + 1 - i, DELETE) for i, p in enumerate(deletions)]
        edits += [
            ArbitraryEdit(gap + i, INSERT, content)
            for i, (gap, content) in enumerate(insertions)
        ]
        return edits, replay_arbitrary(x, edits)

    # worst_case_lb
    n, a = params.n, params.a
    if a < 3:
        raise PolicyPreconditionViolated("worst-case policy needs alphabet size >= 3")
    expect = make_construction("alternating", n, a)
    if x != expect:
        raise PolicyPreconditionViolated("worst-case policy requires the alternating source")
    k_d, k_i = params.max_del, params.max_ins
    if k_d and math.comb(n - k_d + 1, k_d) == 0:
        raise PolicyPreconditionViolated("too many non-adjacent deletions requested")
    n_sets = math.comb(n - k_d + 1, k_d)
    picks = _unrank_combination(draws.below(n_sets), n - k_d + 1, k_d)
    del_positions = [c + t for t, c in enumerate(picks)]  # pairwise non-adjacent
    short_len = n - k_d
    n_gapsets = math.comb(short_len + k_i, k_i)
    gap_picks = _unrank_combination(draws.below(n_gapsets), short_len + k_i, k_i)
    gaps = sorted(c - t for t, c in enumerate(sorted(gap_picks)))
    edits = [ArbitraryEdit(p + 1 - i, DELETE) for i, p in enumerate(del_positions)]
    edits += [
        ArbitraryEdit(g + i, INSERT, 2 + draws.below(a - 2))
        for i, g in enumerate(gaps)
    ]
    return edits, replay_arbitrary(x, edits)


def make_construction(kind: str, n: int, a: int, alpha: int = 0) -> Sequence:
    """Named worst-case sources: all_same, all_distinct (cyclic), alternating."""
    ab = Alphabet(a)
    if kind == "all_same":
        if alpha >= a:
            raise SymbolOutOfRange(f"symbol {alpha} >= alphabet size {a}")
        return Sequence(ab, [alpha] * n)
    if kind == "all_distinct":
        return Sequence(ab, [i % a for i in range(n)])
    if kind == "alternating":
        return Sequence(ab, [i % 2 for i in range(n)])
    raise PolicyPreconditionViolated(f"unknown construction {kind!r}")


# --- corpus files: length-prefixed binary pair + JSON sidecar ----------------

_PAIR_MAGIC = b"IDP1"


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
            raise ValueError("truncated varint")
        b = data[pos]
        pos += 1
        value |= (b & 0x7F) << shift
        if not b & 0x80:
            return value, pos
        shift += 7


def write_pair(stem: Path | str, x: Sequence, y: Sequence, meta: dict) -> Path:
    """Write <stem>.pair (binary x, y) and <stem>.json (params/seed sidecar)."""
    stem = Path(stem)
    out = bytearray(_PAIR_MAGIC)
    _write_varint(out, x.alphabet.size)
    for s in (x, y):
        _write_varint(out, len(s))
        out += s.to_bytes()
    pair_path = stem.with_suffix(".pair")
    pair_path.write_bytes(bytes(out))
    stem.with_suffix(".json").write_text(json.dumps(meta, indent=1, sort_keys=True))
    return pair_path


def read_pair(path: Path | str) -> tuple[Sequence, Sequence, dict]:
    path = Path(path)
    data = path.read_bytes()
    if data[:4] != _PAIR_MAGIC:
        raise ValueError(f"{path} is not a corpus pair file")
    a, pos = _read_varint(data, 4)
    width = 1 if a <= 256 else 2
    seqs = []
    for _ in range(2):
        n, pos = _read_varint(data, pos)
        raw = data[pos : pos + n * width]
        pos += n * width
        dtype = np.uint8 if width == 1 else np.dtype("<u2")
        seqs.append(Sequence(Alphabet(a), np.frombuffer(raw, dtype=dtype)))
    sidecar = path.with_suffix(".json")
    meta = json.loads(sidecar.read_text()) if sidecar.exists() else {}
    return seqs[0], seqs[1], meta
