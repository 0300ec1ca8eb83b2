"""Sequences over finite alphabets and insert/delete edit patterns.

An edit pattern is an op stream over {no-op, delete, insert(c)} that scans
the source left to right: no-op and delete each consume one source symbol,
insert emits a new symbol without consuming.  The number of consuming ops
must equal the source length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence as PySequence

import numpy as np

from .errors import (
    CursorOutOfRange,
    PatternLengthMismatch,
    SymbolOutOfRange,
)

# Op codes, also used inside the numba kernels and the wire format.
NOOP = 0
DELETE = 1
INSERT = 2

_SYMBOL_DTYPE = np.uint16


@dataclass(frozen=True)
class Alphabet:
    """Finite alphabet {0, .., size-1}; size 256 maps 1:1 onto file bytes."""

    size: int

    def __post_init__(self):
        if not 2 <= self.size <= 65536:
            raise SymbolOutOfRange(f"alphabet size {self.size} outside [2, 65536]")

    def check_symbols(self, symbols: np.ndarray) -> None:
        if symbols.size and int(symbols.max()) >= self.size:
            raise SymbolOutOfRange(
                f"symbol {int(symbols.max())} not below alphabet size {self.size}"
            )


BYTE_ALPHABET = Alphabet(256)


def _as_symbol_array(values: Iterable[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() > 65535):
        raise SymbolOutOfRange("symbol values must fit in [0, 65535]")
    out = arr.astype(_SYMBOL_DTYPE)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Sequence:
    """Immutable symbol string over an alphabet."""

    alphabet: Alphabet
    symbols: np.ndarray

    def __post_init__(self):
        arr = _as_symbol_array(self.symbols)
        self.alphabet.check_symbols(arr)
        object.__setattr__(self, "symbols", arr)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Sequence":
        return cls(BYTE_ALPHABET, np.frombuffer(data, dtype=np.uint8))

    def to_bytes(self) -> bytes:
        """Canonical byte serialization: width 1 if the alphabet fits a byte, else 2 (LE)."""
        if self.alphabet.size <= 256:
            return self.symbols.astype(np.uint8).tobytes()
        return self.symbols.astype("<u2").tobytes()

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __getitem__(self, i):
        return int(self.symbols[i])

    def __iter__(self):
        return iter(int(v) for v in self.symbols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(
            self.symbols, other.symbols
        )

    def __repr__(self) -> str:
        body = ",".join(str(s) for s in self.symbols[:16])
        tail = ",.." if len(self) > 16 else ""
        return f"Sequence(a={self.alphabet.size}, [{body}{tail}], n={len(self)})"


def seq(values: Iterable[int] | str, a: int = 0) -> Sequence:
    """Build a Sequence from digits or ints; a=0 picks the smallest alphabet >= 2."""
    if isinstance(values, str):
        values = [int(ch) for ch in values]
    values = list(values)
    if a == 0:
        a = max(2, (max(values) + 1) if values else 2)
    return Sequence(Alphabet(a), values)


@dataclass(frozen=True)
class RunDecomposition:
    """Maximal blocks of identical adjacent symbols."""

    runs: tuple[tuple[int, int], ...]  # (symbol, length >= 1)

    @property
    def count(self) -> int:
        return len(self.runs)

    def lengths(self) -> tuple[int, ...]:
        return tuple(l for _, l in self.runs)

    def symbols(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.runs)

    def starts(self) -> tuple[int, ...]:
        """0-based start index of each run."""
        out, pos = [], 0
        for _, l in self.runs:
            out.append(pos)
            pos += l
        return tuple(out)

    def concat(self, alphabet: Alphabet) -> Sequence:
        parts: list[int] = []
        for s, l in self.runs:
            parts.extend([s] * l)
        return Sequence(alphabet, parts)


def run_decompose(sequence: Sequence) -> RunDecomposition:
    """Split a sequence into maximal runs; the empty sequence has no runs."""
    arr = sequence.symbols
    if arr.size == 0:
        return RunDecomposition(())
    cuts = np.flatnonzero(arr[1:] != arr[:-1]) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [arr.size]))
    return RunDecomposition(
        tuple((int(arr[s]), int(e - s)) for s, e in zip(starts, ends))
    )


@dataclass(frozen=True)
class EditOp:
    kind: int  # NOOP | DELETE | INSERT
    content: int | None = None

    def __post_init__(self):
        if self.kind == INSERT and self.content is None:
            raise SymbolOutOfRange("insert op requires a content symbol")
        if self.kind != INSERT and self.content is not None:
            raise SymbolOutOfRange("content only allowed on insert ops")


@dataclass(frozen=True, eq=False)
class EditPattern:
    """Op stream plus the insertion contents in op order.

    `ops` holds codes from {NOOP, DELETE, INSERT}; `contents` has one symbol
    per INSERT.  k_ins / k_del are cached by the constructor.
    """

    ops: np.ndarray
    contents: np.ndarray
    k_ins: int = field(init=False)
    k_del: int = field(init=False)

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=np.uint8).reshape(-1)
        contents = _as_symbol_array(self.contents)
        if ops.size and int(ops.max()) > INSERT:
            raise PatternLengthMismatch("invalid op code in pattern")
        k_ins = int(np.count_nonzero(ops == INSERT))
        if contents.size != k_ins:
            raise PatternLengthMismatch(
                f"{k_ins} inserts but {contents.size} content symbols"
            )
        ops.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "contents", contents)
        object.__setattr__(self, "k_ins", k_ins)
        object.__setattr__(self, "k_del", int(np.count_nonzero(ops == DELETE)))

    @classmethod
    def from_ops(cls, ops: Iterable[EditOp]) -> "EditPattern":
        codes, contents = [], []
        for op in ops:
            codes.append(op.kind)
            if op.kind == INSERT:
                contents.append(op.content)
        return cls(np.array(codes, dtype=np.uint8), contents)

    @classmethod
    def identity(cls, n: int) -> "EditPattern":
        return cls(np.zeros(n, dtype=np.uint8), [])

    def iter_ops(self) -> Iterator[EditOp]:
        ci = 0
        for code in self.ops:
            if code == INSERT:
                yield EditOp(INSERT, int(self.contents[ci]))
                ci += 1
            else:
                yield EditOp(int(code))

    @property
    def source_length(self) -> int:
        """Number of consuming ops (= length of the sequence this applies to)."""
        return int(self.ops.size) - self.k_ins

    def __len__(self) -> int:
        return int(self.ops.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EditPattern):
            return NotImplemented
        return np.array_equal(self.ops, other.ops) and np.array_equal(
            self.contents, other.contents
        )


def apply_edit_pattern(x: Sequence, pattern: EditPattern) -> Sequence:
    """Replay an op stream against x; output length is |x| - k_del + k_ins."""
    ops = pattern.ops
    if pattern.source_length != len(x):
        raise PatternLengthMismatch(
            f"pattern consumes {pattern.source_length} symbols, source has {len(x)}"
        )
    if pattern.contents.size:
        x.alphabet.check_symbols(pattern.contents)
    emit = ops != DELETE
    out = np.empty(int(np.count_nonzero(emit)), dtype=_SYMBOL_DTYPE)
    out_pos = np.cumsum(emit) - 1
    is_noop = ops == NOOP
    is_ins = ops == INSERT
    consume_idx = np.cumsum(ops != INSERT) - 1
    out[out_pos[is_noop]] = x.symbols[consume_idx[is_noop]]
    out[out_pos[is_ins]] = pattern.contents
    return Sequence(x.alphabet, out)


@dataclass(frozen=True)
class ArbitraryEdit:
    """Single cursor edit: position over the current sequence, insert or delete.

    cursor counts gaps 0..len(current); delete removes the symbol in front of
    the cursor, so cursor 0 admits insertion only.
    """

    cursor: int
    op: int  # DELETE | INSERT
    content: int | None = None

    def __post_init__(self):
        if self.op == INSERT:
            if self.content is None:
                raise SymbolOutOfRange("insert edit requires content")
        elif self.op == DELETE:
            if self.content is not None:
                raise SymbolOutOfRange("delete edit carries no content")
            if self.cursor == 0:
                raise CursorOutOfRange("cursor 0 admits insertion only")
        else:
            raise CursorOutOfRange(f"unknown arbitrary edit op {self.op}")


def replay_arbitrary(x: Sequence, edits: PySequence[ArbitraryEdit]) -> Sequence:
    """Apply cursor edits one by one, validating every cursor on the way."""
    cur = list(x.symbols)
    for e in edits:
        if not 0 <= e.cursor <= len(cur):
            raise CursorOutOfRange(f"cursor {e.cursor} on length {len(cur)}")
        if e.op == INSERT:
            if e.content >= x.alphabet.size:
                raise SymbolOutOfRange(f"content {e.content} >= {x.alphabet.size}")
            cur.insert(e.cursor, e.content)
        else:
            del cur[e.cursor - 1]
    return Sequence(x.alphabet, cur)


def canonicalize_arbitrary(
    x: Sequence, edits: PySequence[ArbitraryEdit]
) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    """Separate an arbitrary edit sequence into deletions-then-insertions.

    Returns (deleted 0-based positions on x, insertions on the shortened
    sequence as (gap, content) left to right).  A symbol inserted and later
    deleted is dropped entirely.  Replaying the canonical form reproduces the
    original replay exactly.
    """
    # Items: ('x', original_index) or ('i', content); deleting an inserted
    # item cancels the pair.
    items: list[tuple[str, int]] = [("x", i) for i in range(len(x))]
    deleted: list[int] = []
    for e in edits:
        if not 0 <= e.cursor <= len(items):
            raise CursorOutOfRange(f"cursor {e.cursor} on length {len(items)}")
        if e.op == INSERT:
            if e.content >= x.alphabet.size:
                raise SymbolOutOfRange(f"content {e.content} >= {x.alphabet.size}")
            items.insert(e.cursor, ("i", e.content))
        else:
            kind, payload = items.pop(e.cursor - 1)
            if kind == "x":
                deleted.append(payload)
    deleted.sort()
    insertions: list[tuple[int, int]] = []
    survivors = 0
    for kind, payload in items:
        if kind == "x":
            survivors += 1
        else:
            insertions.append((survivors, payload))
    return tuple(deleted), tuple(insertions)


def apply_canonical(
    x: Sequence,
    deletions: PySequence[int],
    insertions: PySequence[tuple[int, int]],
) -> Sequence:
    """Replay a canonical (deletions, insertions) form produced above."""
    keep = np.ones(len(x), dtype=bool)
    for p in deletions:
        keep[p] = False
    shortened = list(x.symbols[keep])
    for offset, (gap, content) in enumerate(insertions):
        shortened.insert(gap + offset, content)
    return Sequence(x.alphabet, shortened)
