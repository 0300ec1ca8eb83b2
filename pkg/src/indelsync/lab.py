"""Executable analysis machinery: typicalized edit patterns, run alignment,
post-edit-set enumeration, and the residual edit uncertainty estimator.

Conventions used throughout:

* source symbol positions are 1-based (1..n); insertion gaps are 0-based
  counts of source symbols to the left (0..n);
* run j over positions [s_j, e_j] has the extended symbol zone
  [s_j - 1, e_j + 1] and the extended gap zone [s_j - 1, e_j]; a boundary
  insertion therefore sits in the zones of both neighbouring runs;
* a deletion belongs to the run of the deleted symbol, an insertion to every
  run whose gap zone covers it.

An edit pattern is *typical* when every run owning an edit has exactly that
one edit in its extended zone.  Typicalization enforces this by moving the
edits of every over-edited run into a complement stream, which `recombine`
merges back losslessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .core import (
    DELETE,
    EditPattern,
    INSERT,
    NOOP,
    Sequence,
    apply_edit_pattern,
    run_decompose,
)
from .errors import (
    ComplementMisaligned,
    InstanceTooLarge,
    PatternLengthMismatch,
    Unalignable,
)
from .sim import gen_ltrrid, gen_pre_ess, RpesParams

# complement stream codes
CBLANK = 0
CDEL = 1
CINS = 2


@dataclass(frozen=True, eq=False)
class TypicalizedPattern:
    """Typical part of an edit pattern plus the eliminated edits.

    The complement walks the consume timeline: one entry per source symbol
    (CDEL if that symbol's deletion was eliminated, CBLANK otherwise) with
    CINS entries spliced in at the gaps where eliminated insertions sat.
    """

    e_hat: EditPattern
    complement_ops: np.ndarray
    complement_contents: np.ndarray

    def __post_init__(self):
        ops = np.asarray(self.complement_ops, dtype=np.uint8)
        contents = np.asarray(self.complement_contents, dtype=np.uint16)
        ops.setflags(write=False)
        contents.setflags(write=False)
        object.__setattr__(self, "complement_ops", ops)
        object.__setattr__(self, "complement_contents", contents)

    @property
    def k_ins(self) -> int:
        return self.e_hat.k_ins

    @property
    def k_del(self) -> int:
        return self.e_hat.k_del

    @property
    def eliminated(self) -> int:
        return int(np.count_nonzero(self.complement_ops != CBLANK))


# --- run bookkeeping ----------------------------------------------------------


@dataclass(frozen=True)
class _Runs:
    starts: tuple[int, ...]  # 1-based
    ends: tuple[int, ...]
    symbols: tuple[int, ...]
    run_of: tuple[int, ...]  # run_of[p-1] for position p

    @property
    def count(self) -> int:
        return len(self.starts)

    def lengths(self) -> tuple[int, ...]:
        return tuple(e - s + 1 for s, e in zip(self.starts, self.ends))

    def covering_gap(self, g: int) -> tuple[int, ...]:
        """Runs whose extended gap zone contains gap g."""
        n = len(self.run_of)
        out = []
        if g >= 1:
            out.append(self.run_of[g - 1])
        if g + 1 <= n:
            j = self.run_of[g]
            if not out or out[0] != j:
                out.append(j)
        return tuple(out)


def _runs(x: Sequence) -> _Runs:
    cached = getattr(x, "_lab_runs", None)
    if cached is not None:
        return cached
    rd = run_decompose(x)
    starts, ends, symbols, run_of = [], [], [], []
    pos = 1
    for j, (sym, length) in enumerate(rd.runs):
        starts.append(pos)
        ends.append(pos + length - 1)
        symbols.append(sym)
        run_of.extend([j] * length)
        pos += length
    runs = _Runs(tuple(starts), tuple(ends), tuple(symbols), tuple(run_of))
    object.__setattr__(x, "_lab_runs", runs)  # Sequence is immutable
    return runs


def _locate_edits(x: Sequence, pattern: EditPattern):
    """Deletion positions (1-based) and insertions as (gap, content), op order."""
    if pattern.source_length != len(x):
        raise PatternLengthMismatch(
            f"pattern consumes {pattern.source_length}, source has {len(x)}"
        )
    dels: list[int] = []
    inss: list[tuple[int, int]] = []
    consumed = 0
    ci = 0
    for code in pattern.ops:
        if code == INSERT:
            inss.append((consumed, int(pattern.contents[ci])))
            ci += 1
        else:
            consumed += 1
            if code == DELETE:
                dels.append(consumed)
    return dels, inss


def _edit_counts(x: Sequence, pattern: EditPattern) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(owned counts, extended counts) per run in one pass."""
    runs = _runs(x)
    dels, inss = _locate_edits(x, pattern)
    own = [0] * runs.count
    ext = [0] * runs.count
    for p in dels:
        j = runs.run_of[p - 1]
        own[j] += 1
        ext[j] += 1
        if j > 0 and p == runs.starts[j]:
            ext[j - 1] += 1
        if j + 1 < runs.count and p == runs.ends[j]:
            ext[j + 1] += 1
    for g, _ in inss:
        for j in runs.covering_gap(g):
            own[j] += 1
            ext[j] += 1
    return tuple(own), tuple(ext)


def extended_run_edit_counts(x: Sequence, pattern: EditPattern) -> tuple[int, ...]:
    """Edits per extended run: deletions of the run or its two neighbouring
    symbols, plus insertions inside the extended gap zone (boundary
    insertions count once in both adjacent runs)."""
    return _edit_counts(x, pattern)[1]


def run_edit_counts(x: Sequence, pattern: EditPattern) -> tuple[int, ...]:
    """Edits owned by each run: deletions of its own symbols plus insertions
    in its extended gap zone."""
    return _edit_counts(x, pattern)[0]


def typicalize(x: Sequence, pattern: EditPattern) -> TypicalizedPattern:
    """Move every edit owned by an over-edited run into the complement.

    A deletion survives iff the extended zone of the deleted symbol's run
    holds exactly one edit; an insertion survives iff that holds for every
    run whose gap zone covers it.
    """
    runs = _runs(x)
    ext = extended_run_edit_counts(x, pattern)

    def drop_del(p: int) -> bool:
        return ext[runs.run_of[p - 1]] >= 2

    def drop_ins(g: int) -> bool:
        covering = runs.covering_gap(g)
        return any(ext[j] >= 2 for j in covering)

    hat_ops: list[int] = []
    hat_contents: list[int] = []
    comp_ops: list[int] = []
    comp_contents: list[int] = []
    consumed = 0
    ci = 0
    for code in pattern.ops:
        if code == INSERT:
            content = int(pattern.contents[ci])
            ci += 1
            if drop_ins(consumed):
                comp_ops.append(CINS)
                comp_contents.append(content)
            else:
                hat_ops.append(INSERT)
                hat_contents.append(content)
        else:
            consumed += 1
            if code == DELETE and not drop_del(consumed):
                hat_ops.append(DELETE)
                comp_ops.append(CBLANK)
            elif code == DELETE:
                hat_ops.append(NOOP)
                comp_ops.append(CDEL)
            else:
                hat_ops.append(NOOP)
                comp_ops.append(CBLANK)
    return TypicalizedPattern(
        EditPattern(np.array(hat_ops, dtype=np.uint8), hat_contents),
        np.array(comp_ops, dtype=np.uint8),
        np.array(comp_contents, dtype=np.uint16),
    )


def typicalized_posess(x: Sequence, tp: TypicalizedPattern) -> Sequence:
    """Apply the typical part; |result| = |x| - k_del + k_ins of e_hat."""
    return apply_edit_pattern(x, tp.e_hat)


def recombine(tp: TypicalizedPattern) -> EditPattern:
    """Union of the typical pattern and the complement; inverse of typicalize."""
    e_hat = tp.e_hat
    n = e_hat.source_length
    comp = tp.complement_ops
    n_comp_consumes = int(np.count_nonzero(comp != CINS))
    if n_comp_consumes != n:
        raise ComplementMisaligned(
            f"complement covers {n_comp_consumes} symbols, pattern consumes {n}"
        )
    # per-gap kept insertions and per-symbol consume ops of e_hat
    kept_ins: dict[int, list[int]] = {}
    hat_consume: list[int] = []
    hat_contents = e_hat.contents
    ci = 0
    for code in e_hat.ops:
        if code == INSERT:
            kept_ins.setdefault(len(hat_consume), []).append(int(hat_contents[ci]))
            ci += 1
        else:
            hat_consume.append(int(code))
    ops: list[int] = []
    contents: list[int] = []

    def flush_gap(g: int) -> None:
        for c in kept_ins.get(g, ()):
            ops.append(INSERT)
            contents.append(c)

    consumed = 0
    comp_contents = iter(tp.complement_contents)
    for code in comp:
        if code == CINS:
            ops.append(INSERT)
            contents.append(int(next(comp_contents)))
            continue
        flush_gap(consumed)
        base = hat_consume[consumed]
        consumed += 1
        if code == CDEL:
            if base == DELETE:
                raise ComplementMisaligned(
                    "eliminated deletion collides with a kept deletion"
                )
            ops.append(DELETE)
        else:
            ops.append(base)
    flush_gap(consumed)
    return EditPattern(np.array(ops, dtype=np.uint8), contents)


def is_typical(x: Sequence, pattern: EditPattern) -> bool:
    return typicalize(x, pattern).e_hat == pattern


def compute_global_alignment(x: Sequence, e_hat: EditPattern) -> tuple[int, ...]:
    """Segment lengths of x, one per run of apply(x, e_hat).

    Kept symbols belong to the run they land in; a deleted symbol follows its
    own run's kept symbols, else the next kept symbol to the right, else the
    previous one (fully deleted suffix).
    """
    y = apply_edit_pattern(x, e_hat)
    yd = run_decompose(y)
    if yd.count == 0:
        return ()
    y_run_of = np.repeat(np.arange(yd.count), yd.lengths())
    n = len(x)
    owner = np.full(n + 1, -1, dtype=np.int64)  # 1-based positions
    out_i = 0
    consumed = 0
    for code in e_hat.ops:
        if code == INSERT:
            out_i += 1
        else:
            consumed += 1
            if code == NOOP:
                owner[consumed] = y_run_of[out_i]
                out_i += 1
    runs = _runs(x)
    kept = np.flatnonzero(owner[1:] >= 0) + 1
    for p in range(1, n + 1):
        if owner[p] >= 0:
            continue
        if kept.size == 0:
            raise PatternLengthMismatch("alignment undefined: everything deleted")
        j = runs.run_of[p - 1]
        lo, hi = runs.starts[j], runs.ends[j]
        run_kept = kept[(kept >= lo) & (kept <= hi)]
        if run_kept.size:
            owner[p] = owner[run_kept[0]]
            continue
        later = kept[kept > p]
        owner[p] = owner[later[0]] if later.size else owner[kept[-1]]
    segments = np.bincount(owner[1:], minlength=yd.count)
    return tuple(int(v) for v in segments)


# --- alignment tree -----------------------------------------------------------


@dataclass
class AlignNode:
    gamma: str | None = None  # "G1" / "G2" on ambiguous branch points
    children: list["AlignNode"] = field(default_factory=list)
    segments: tuple[int, ...] | None = None
    witness: EditPattern | None = None

    @property
    def is_leaf(self) -> bool:
        return self.segments is not None


@dataclass
class AlignmentTree:
    root: AlignNode

    def leaves(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                if node.segments not in out:
                    out.append(node.segments)
            stack.extend(reversed(node.children))
        return out

    def witnesses(self) -> list[EditPattern]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf and node.witness is not None:
                out.append(node.witness)
            stack.extend(reversed(node.children))
        return out

    def gamma_nodes(self) -> list[str]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.gamma is not None:
                out.append(node.gamma)
            stack.extend(reversed(node.children))
        return out

    def split_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if len(node.children) >= 2:
                count += 1
            stack.extend(node.children)
        return count

    @property
    def unresolved(self) -> bool:
        return len(self.leaves()) >= 2


# edit descriptors carried along matcher paths; realized by _choose_positions
# ("del", run), ("del_single", run), ("ins_same", run),
# ("ins_split", run, gap, content), ("ins_gap", left_run, right_run, gap, content)


def _descriptor_owners(desc) -> tuple[int, ...]:
    kind = desc[0]
    if kind in ("del", "del_single", "ins_same", "ins_split"):
        return (desc[1],)
    _, jl, jr, _, _ = desc
    if jr is not None:
        return (jr,)
    if jl is not None:
        return (jl,)
    return ()


def _choose_positions(
    edits: tuple, runs: _Runs
) -> tuple[list[int], list[tuple[int, int]]] | None:
    """Pick concrete edit positions satisfying typicality, or None.

    Returns (deletion positions 1-based, insertions as (gap, content)).
    Adjacent runs may not both own edits touching their shared boundary, and
    a boundary insertion occupies both neighbouring runs.
    """
    owner_desc: dict[int, tuple] = {}
    free_edits: list[tuple] = []  # descriptors with no owner (empty source)
    for d in edits:
        owners = _descriptor_owners(d)
        if not owners:
            free_edits.append(d)
            continue
        j = owners[0]
        if j in owner_desc:
            return None
        owner_desc[j] = d

    lengths = runs.lengths()
    dels: list[int] = []
    inss: list[tuple[int, int]] = []

    # realization = (touch_left, touch_right, co_left, co_right, emit)
    def realizations(j: int):
        d = owner_desc.get(j)
        if d is None:
            return [(False, False, False, False, None)]
        kind = d[0]
        s, e, l = runs.starts[j], runs.ends[j], lengths[j]
        if kind == "del":
            if l >= 3:
                return [(False, False, False, False, ("d", s + 1))]
            if l == 2:
                return [
                    (True, False, False, False, ("d", s)),
                    (False, True, False, False, ("d", e)),
                ]
            return [(True, True, False, False, ("d", s))]
        if kind == "del_single":
            return [(True, True, False, False, ("d", s))]
        if kind == "ins_same":
            sym = runs.symbols[j]
            if l >= 2:
                return [(False, False, False, False, ("i", s, sym))]
            opts = []
            if j == 0:
                opts.append((False, False, False, False, ("i", s - 1, sym)))
            else:
                opts.append((False, False, True, False, ("i", s - 1, sym)))
            if j == runs.count - 1:
                opts.append((False, False, False, False, ("i", e, sym)))
            else:
                opts.append((False, False, False, True, ("i", e, sym)))
            return opts
        if kind == "ins_split":
            _, _, gap, content = d
            return [(False, False, False, False, ("i", gap, content))]
        # ins_gap
        _, jl, jr, gap, content = d
        co_left = jl is not None and jr is not None
        return [(False, False, co_left, False, ("i", gap, content))]

    def emit(realized) -> None:
        if realized is None:
            return
        if realized[0] == "d":
            dels.append(realized[1])
        else:
            inss.append((realized[1], realized[2]))

    # depth-first over runs with the (owned, touchR, prev_touchR, co_pending)
    # state; run counts stay small so plain backtracking is fine.
    chosen: list = [None] * runs.count

    def walk(j: int, prev_owned: bool, prev_touch_r: bool, prev_prev_touch_r: bool,
             co_pending: bool) -> bool:
        if j == runs.count:
            return not co_pending
        if co_pending:
            if owner_desc.get(j) is not None:
                return False
            chosen[j] = None
            return walk(j + 1, True, False, prev_touch_r, False)
        for touch_l, touch_r, co_left, co_right, realized in realizations(j):
            owned = owner_desc.get(j) is not None
            if prev_owned and owned and (prev_touch_r or touch_l):
                continue
            if co_left and (prev_owned or prev_prev_touch_r):
                continue
            if co_right and (j + 1 >= runs.count or owner_desc.get(j + 1) is not None):
                continue
            chosen[j] = realized
            if walk(j + 1, owned or co_right, touch_r, prev_touch_r, co_right):
                return True
        return False

    if not walk(0, False, False, False, False):
        return None
    for realized in chosen:
        emit(realized)
    for d in free_edits:  # insertions into an empty source
        _, _, _, gap, content = d
        inss.append((gap, content))
    return dels, inss


def _build_pattern(n: int, dels: list[int], inss: list[tuple[int, int]]) -> EditPattern:
    del_set = set(dels)
    by_gap: dict[int, list[int]] = {}
    for g, c in sorted(inss, key=lambda t: t[0]):
        by_gap.setdefault(g, []).append(c)
    ops: list[int] = []
    contents: list[int] = []
    for p in range(n + 1):
        for c in by_gap.get(p, ()):
            ops.append(INSERT)
            contents.append(c)
        if p < n:
            ops.append(DELETE if p + 1 in del_set else NOOP)
    return EditPattern(np.array(ops, dtype=np.uint8), contents)


def align(x: Sequence, y_hat: Sequence) -> AlignmentTree:
    """Enumerate the global alignments realizable by typical edit patterns.

    The matcher scans runs left to right; at the two ambiguous length
    configurations (source run one shorter / one longer than the target run)
    it explores both local explanations and keeps whichever complete.  Every
    leaf is validated by materializing a witness pattern.
    """
    runs = _runs(x)
    yd = run_decompose(y_hat)
    xs, xl = runs.symbols, runs.lengths()
    us, ml = tuple(s for s, _ in yd.runs), tuple(l for _, l in yd.runs)
    rx, ry = runs.count, yd.count
    n = len(x)

    def leaf(segs: tuple, edits: tuple) -> list[AlignNode]:
        picked = _choose_positions(edits, runs)
        if picked is None:
            return []
        pattern = _build_pattern(n, *picked)
        if apply_edit_pattern(x, pattern) != y_hat:
            return []
        return [AlignNode(segments=segs, witness=pattern)]

    def case3_chain(xi: int, target: int, symbol: int):
        """Odd runs of `symbol` joined by deleted singles summing to target."""
        total = xl[xi]
        k = xi
        edits: list = []
        while total < target:
            if k + 2 >= rx or xl[k + 1] != 1 or xs[k + 2] != symbol:
                return None
            edits.append(("del_single", k + 1))
            total += xl[k + 2]
            k += 2
        if total != target or not edits:
            return None
        return k, tuple(edits)

    def solve(xi: int, yj: int, segs: tuple, pending: int, edits: tuple,
              last_single: bool) -> list[AlignNode]:
        if yj == ry:
            if pending:
                return []
            rem = rx - xi
            if rem == 0:
                return leaf(segs, edits)
            if rem == 1 and xl[xi] == 1 and segs and not last_single:
                bumped = segs[:-1] + (segs[-1] + xl[xi],)
                return leaf(bumped, edits + (("del_single", xi),))
            return []
        children: list[AlignNode] = []
        if xi == rx:
            if ml[yj] == 1 and pending == 0:
                jl = rx - 1 if rx else None
                d = ("ins_gap", jl, None, n, us[yj])
                children += solve(xi, yj + 1, segs + (0,), 0, edits + (d,), False)
            return _wrap(children, None)
        s, u, l, m = xs[xi], us[yj], xl[xi], ml[yj]
        # standalone deleted run, joining the segment of its right neighbour
        if l == 1 and not last_single and (xi == 0 or xi == rx - 1 or xs[xi - 1] != xs[xi + 1]):
            d = ("del_single", xi)
            if xi == rx - 1:
                if segs:
                    bumped = segs[:-1] + (segs[-1] + 1,)
                    children += solve(xi + 1, yj, bumped, pending, edits + (d,), True)
            else:
                children += solve(xi + 1, yj, segs, pending + 1, edits + (d,), True)
        if s == u:
            if l == m:
                children += solve(
                    xi + 1, yj + 1, segs + (pending + l,), 0, edits, False
                )
            elif l == m - 1:
                b_ins = solve(
                    xi + 1, yj + 1, segs + (pending + l,), 0,
                    edits + (("ins_same", xi),), False,
                )
                chain = case3_chain(xi, m, u)
                if chain is None:
                    children += b_ins
                else:
                    k, chain_edits = chain
                    b_multi = solve(
                        k + 1, yj + 1, segs + (pending + m + len(chain_edits),),
                        0, edits + chain_edits, False,
                    )
                    children += _tag("G1", b_ins + b_multi)
            elif l == m + 1 or l > m + 1:
                b_del = []
                if l == m + 1:
                    b_del = solve(
                        xi + 1, yj + 1, segs + (pending + l,), 0,
                        edits + (("del", xi),), False,
                    )
                b_split = []
                launchable = (
                    yj + 2 <= ry - 1
                    and ml[yj + 1] == 1
                    and us[yj + 2] == u
                    and ml[yj + 2] == l - m
                )
                if launchable:
                    gap = runs.starts[xi] - 1 + m
                    d = ("ins_split", xi, gap, us[yj + 1])
                    b_split = solve(
                        xi + 1, yj + 3, segs + (pending + m, 0, l - m), 0,
                        edits + (d,), False,
                    )
                if l == m + 1 and launchable:
                    children += _tag("G2", b_del + b_split)
                else:
                    children += b_del + b_split
            else:  # l < m - 1
                chain = case3_chain(xi, m, u)
                if chain is not None:
                    k, chain_edits = chain
                    children += solve(
                        k + 1, yj + 1, segs + (pending + m + len(chain_edits),),
                        0, edits + chain_edits, False,
                    )
        else:
            if m == 1 and pending == 0:
                jl = xi - 1 if xi > 0 else None
                gap = runs.starts[xi] - 1
                d = ("ins_gap", jl, xi, gap, u)
                children += solve(xi, yj + 1, segs + (0,), 0, edits + (d,), False)
        return _wrap(children, None)

    def _tag(tag: str, branches: list[AlignNode]) -> list[AlignNode]:
        if not branches:
            return []
        return [AlignNode(gamma=tag, children=branches)]

    def _wrap(children: list[AlignNode], tag) -> list[AlignNode]:
        if len(children) <= 1:
            return children
        return [AlignNode(gamma=tag, children=children)]

    if rx == 0:
        # empty source: y_hat can only be pure insertions, all segments empty
        contents = [int(v) for v in y_hat.symbols]
        witness = EditPattern(np.full(len(y_hat), INSERT, dtype=np.uint8), contents)
        return AlignmentTree(AlignNode(segments=(0,) * ry, witness=witness))
    if ry == 0:
        # a single lone symbol is the only source a typical pattern can erase
        if n == 1:
            witness = EditPattern(np.array([DELETE], dtype=np.uint8), [])
            return AlignmentTree(AlignNode(segments=(), witness=witness))
        raise Unalignable("no typical edit pattern deletes a longer source")
    survivors = solve(0, 0, (), 0, (), False)
    if not survivors:
        raise Unalignable("no typical edit pattern links the sequences")
    root = survivors[0] if len(survivors) == 1 else AlignNode(children=survivors)
    return AlignmentTree(root)


# --- exhaustive enumeration oracles -------------------------------------------


def enumerate_edit_patterns(
    x: Sequence,
    max_ins: int,
    max_del: int,
    alphabet: int | None = None,
    max_total: int | None = None,
) -> Iterator[EditPattern]:
    """Every op stream within the insertion/deletion budgets (and optionally
    a cap on the total edit count)."""
    n = len(x)
    a = alphabet or x.alphabet.size
    symbols = range(a)
    if max_total is None:
        max_total = max_ins + max_del

    def rec(pos: int, ins_left: int, del_left: int, total_left: int,
            ops: list, contents: list):
        if pos == n:
            yield EditPattern(np.array(ops, dtype=np.uint8), list(contents))
            if ins_left and total_left:
                for c in symbols:
                    ops.append(INSERT)
                    contents.append(c)
                    yield from rec(pos, ins_left - 1, del_left, total_left - 1,
                                   ops, contents)
                    ops.pop()
                    contents.pop()
            return
        if ins_left and total_left:
            for c in symbols:
                ops.append(INSERT)
                contents.append(c)
                yield from rec(pos, ins_left - 1, del_left, total_left - 1,
                               ops, contents)
                ops.pop()
                contents.pop()
        if del_left and total_left:
            ops.append(DELETE)
            yield from rec(pos + 1, ins_left, del_left - 1, total_left - 1,
                           ops, contents)
            ops.pop()
        ops.append(NOOP)
        yield from rec(pos + 1, ins_left, del_left, total_left, ops, contents)
        ops.pop()

    yield from rec(0, max_ins, max_del, max_total, [], [])


def enumerate_patterns_between(
    x: Sequence, y: Sequence, max_edits: int | None = None
) -> Iterator[EditPattern]:
    """Every op stream converting x to y with at most max_edits edits."""
    n, m = len(x), len(y)
    if max_edits is None:
        max_edits = n + m
    xs, ys = x.symbols, y.symbols

    def rec(i: int, j: int, budget: int, ops: list, contents: list):
        if budget < 0 or m - j + (n - i) > budget + 2 * min(n - i, m - j):
            return
        if i == n and j == m:
            yield EditPattern(np.array(ops, dtype=np.uint8), list(contents))
            return
        if i < n and j < m and xs[i] == ys[j]:
            ops.append(NOOP)
            yield from rec(i + 1, j + 1, budget, ops, contents)
            ops.pop()
        if i < n:
            ops.append(DELETE)
            yield from rec(i + 1, j, budget - 1, ops, contents)
            ops.pop()
        if j < m:
            ops.append(INSERT)
            contents.append(int(ys[j]))
            yield from rec(i, j + 1, budget - 1, ops, contents)
            ops.pop()
            contents.pop()

    yield from rec(0, 0, max_edits, [], [])


def alignments_oracle(x: Sequence, y_hat: Sequence) -> set[tuple[int, ...]]:
    """Ground truth for align(): alignments of every typical pattern x -> y_hat."""
    cap = 2 * max(1, _runs(x).count) + 1
    out: set[tuple[int, ...]] = set()
    for pattern in enumerate_patterns_between(x, y_hat, cap):
        if is_typical(x, pattern):
            out.add(compute_global_alignment(x, pattern))
    return out


def enumerate_post_edit_set(
    x: Sequence, max_ins: int, max_del: int
) -> set[tuple[int, ...]]:
    """Exact post-edit set as symbol tuples; guarded to small instances."""
    if len(x) + max_ins > 14 or x.alphabet.size > 4:
        raise InstanceTooLarge(
            f"refusing |x| + max_ins = {len(x) + max_ins} over alphabet "
            f"{x.alphabet.size}"
        )
    base = tuple(int(v) for v in x.symbols)
    shortened: set[tuple[int, ...]] = set()
    n = len(base)
    for d in range(min(max_del, n) + 1):
        for kill in combinations(range(n), d):
            keep = set(range(n)) - set(kill)
            shortened.add(tuple(base[i] for i in sorted(keep)))
    out = set(shortened)
    frontier = shortened
    symbols = range(x.alphabet.size)
    for _ in range(max_ins):
        nxt: set[tuple[int, ...]] = set()
        for t in frontier:
            for g in range(len(t) + 1):
                for c in symbols:
                    nxt.add(t[:g] + (c,) + t[g:])
        out |= nxt
        frontier = nxt
    return out


# --- nature's secret ----------------------------------------------------------


@dataclass(frozen=True)
class SecretEstimate:
    bits_per_symbol: float
    stderr: float
    trials: int


def _log_posess_prob(x: Sequence, y: Sequence, eps: float, delta: float) -> float:
    """log2 P(y | x) under the one-pass random edit model, summing over all
    edit patterns by dynamic programming in log space."""
    n, m = len(x), len(y)
    keep = 1.0 - eps - delta
    log_ins = math.log2(eps / x.alphabet.size) if eps > 0 else -math.inf
    log_del = math.log2(delta) if delta > 0 else -math.inf
    log_keep = math.log2(keep) if keep > 0 else -math.inf
    log_stop = math.log2(1.0 - eps)
    NEG = -math.inf

    def lse(values):
        best = max(values)
        if best == NEG:
            return NEG
        return best + math.log2(sum(2.0 ** (v - best) for v in values))

    L = [[NEG] * (m + 1) for _ in range(n + 1)]
    L[n][m] = log_stop
    for j in range(m - 1, -1, -1):
        L[n][j] = L[n][j + 1] + log_ins
    xs, ys = x.symbols, y.symbols
    for i in range(n - 1, -1, -1):
        L[i][m] = L[i + 1][m] + log_del
        for j in range(m - 1, -1, -1):
            opts = [log_ins + L[i][j + 1], log_del + L[i + 1][j]]
            if xs[i] == ys[j]:
                opts.append(log_keep + L[i + 1][j + 1])
            L[i][j] = lse(opts)
    return L[0][0]


def _log_pattern_prob(pattern: EditPattern, eps: float, delta: float, a: int) -> float:
    keep = 1.0 - eps - delta
    n_keep = len(pattern) - pattern.k_ins - pattern.k_del
    total = math.log2(1.0 - eps)
    if pattern.k_ins:
        total += pattern.k_ins * math.log2(eps / a)
    if pattern.k_del:
        total += pattern.k_del * math.log2(delta)
    if n_keep:
        total += n_keep * math.log2(keep)
    return total


def estimate_natures_secret(
    n: int, a: int, eps: float, delta: float, trials: int, seed: int
) -> SecretEstimate:
    """Monte Carlo estimate of the per-symbol uncertainty of the edit pattern
    given both sequences: E[log2 P(y|x) - log2 P(e)] / n."""
    if n > 12:
        raise InstanceTooLarge("posterior enumeration is exponential past n = 12")
    samples = []
    for t in range(trials):
        x = gen_pre_ess(n, a, seed + 7919 * t)
        pattern, y = gen_ltrrid(x, RpesParams(n, a, eps, delta, seed + 7919 * t + 1))
        log_py = _log_posess_prob(x, y, eps, delta)
        log_pe = _log_pattern_prob(pattern, eps, delta, a)
        samples.append((log_py - log_pe) / n)
    arr = np.array(samples)
    stderr = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return SecretEstimate(float(arr.mean()), stderr, trials)
