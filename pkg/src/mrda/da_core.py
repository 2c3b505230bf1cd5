"""Candidate-proposing deferred acceptance with ties and Min-Cutoff guarantees.

Each program's waitlist is a max skew heap keyed by ``(rank key, candidate
index)`` so the worst admit sits at the root.  Candidate indices follow roll
order, which makes the roll number the tie-break among equal ranks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional, Sequence, Union

import numpy as np
from numba import njit

from .columnar import PrefArrays
from .errors import MissingRank, UnknownProgram
from .model import NO_CUTOFF, NO_RANK, Rank, SupReason

INF_KEY = np.iinfo(np.int64).max


@njit(cache=True)
def _merge(h1, h2, left, right, mkey):
    if h1 < 0:
        return h2
    if h2 < 0:
        return h1
    if mkey[h2] > mkey[h1] or (mkey[h2] == mkey[h1] and h2 > h1):
        h1, h2 = h2, h1
    root = h1
    cur = h1
    h1 = right[cur]
    while True:
        right[cur] = left[cur]
        if h1 < 0:
            left[cur] = h2
            break
        if h2 < 0:
            left[cur] = h1
            break
        if mkey[h2] > mkey[h1] or (mkey[h2] == mkey[h1] and h2 > h1):
            h1, h2 = h2, h1
        left[cur] = h1
        cur = h1
        h1 = right[cur]
    return root


@njit(cache=True)
def _reject(x, pos, end, qbuf, tail):
    pos[x] += 1
    if pos[x] < end[x]:
        qbuf[tail] = x
        tail += 1
        if tail == qbuf.shape[0]:
            tail = 0
    return tail


@njit(cache=True)
def _remove_and_reject(v, root, size, cap, left, right, mkey, scratch, pos, end, qbuf, tail):
    kmax = mkey[root[v]]
    total = size[v]
    n_tied = 0
    while root[v] >= 0 and mkey[root[v]] == kmax:
        r = root[v]
        root[v] = _merge(left[r], right[r], left, right, mkey)
        scratch[n_tied] = r
        n_tied += 1
    if total - n_tied >= cap[v]:
        size[v] = total - n_tied
        for i in range(n_tied):
            tail = _reject(scratch[i], pos, end, qbuf, tail)
    else:
        for i in range(n_tied):
            z = scratch[i]
            left[z] = -1
            right[z] = -1
            root[v] = _merge(root[v], z, left, right, mkey)
    return tail


@njit(cache=True)
def _run(queue, pref_vid, pref_key, end, pos, cap, mc, gate, root, size, left, right, mkey, scratch, qbuf):
    qn = qbuf.shape[0]
    head = 0
    tail = 0
    for i in range(queue.shape[0]):
        qbuf[tail] = queue[i]
        tail += 1
    proposals = 0
    while head != tail:
        x = qbuf[head]
        head += 1
        if head == qn:
            head = 0
        proposals += 1
        e = pos[x]
        v = pref_vid[e]
        k = pref_key[e]
        m = mc[v]
        if k < 0 or (k > m and (cap[v] <= 0 or k > gate[v])):
            tail = _reject(x, pos, end, qbuf, tail)
            continue
        s = size[v]
        if s >= cap[v] and s > 0 and k > m and k > mkey[root[v]]:
            tail = _reject(x, pos, end, qbuf, tail)
            continue
        mkey[x] = k
        left[x] = -1
        right[x] = -1
        root[v] = _merge(root[v], x, left, right, mkey)
        size[v] = s + 1
        if s + 1 > cap[v] and mkey[root[v]] > m:
            tail = _remove_and_reject(v, root, size, cap, left, right, mkey, scratch, pos, end, qbuf, tail)
    return proposals


@njit(cache=True)
def _seat(xs, pref_vid, pref_key, pos, root, size, left, right, mkey):
    for i in range(xs.shape[0]):
        x = xs[i]
        v = pref_vid[pos[x]]
        mkey[x] = pref_key[pos[x]]
        left[x] = -1
        right[x] = -1
        root[v] = _merge(root[v], x, left, right, mkey)
        size[v] += 1


@njit(cache=True)
def _shrink(v, root, size, cap, mc, left, right, mkey, scratch, pos, end, qbuf):
    cap[v] -= 1
    tail = 0
    if size[v] > cap[v] and root[v] >= 0 and mkey[root[v]] > mc[v]:
        tail = _remove_and_reject(v, root, size, cap, left, right, mkey, scratch, pos, end, qbuf, tail)
    return tail


class DaEngine:
    """Mutable DA state over a fixed set of preference arrays."""

    def __init__(self, pref: PrefArrays, capacity: np.ndarray, min_cutoff: np.ndarray):
        n, V = len(pref), len(capacity)
        self.pref = pref
        self.cap = np.asarray(capacity, np.int64).copy()
        self.mc = np.asarray(min_cutoff, np.int64)
        self.gate = np.full(V, INF_KEY, np.int64)
        self.end = pref.ptr[1:].copy()
        self.pos = pref.ptr[:-1].copy()
        self.root = np.full(V, -1, np.int64)
        self.size = np.zeros(V, np.int64)
        self.left = np.full(n, -1, np.int64)
        self.right = np.full(n, -1, np.int64)
        self.mkey = np.zeros(n, np.int64)
        self.scratch = np.zeros(max(n, 1), np.int64)
        self.qbuf = np.zeros(n + 1, np.int64)
        self.proposals = 0

    @property
    def n_candidates(self) -> int:
        return len(self.pos)

    def reset(self, capacity: Optional[np.ndarray] = None) -> None:
        self.pos[:] = self.pref.ptr[:-1]
        self.root[:] = -1
        self.size[:] = 0
        if capacity is not None:
            self.cap[:] = capacity

    def run(self, queue: np.ndarray) -> None:
        queue = np.asarray(queue, np.int64)
        queue = queue[self.pos[queue] < self.end[queue]]
        self.proposals += _run(queue, self.pref.vid, self.pref.key, self.end, self.pos, self.cap, self.mc,
                               self.gate, self.root, self.size, self.left, self.right, self.mkey, self.scratch,
                               self.qbuf)

    def seat(self, xs: np.ndarray) -> None:
        """Place candidates straight into the waitlist at their current position (warm start)."""
        xs = np.asarray(xs, np.int64)
        xs = xs[self.pos[xs] < self.end[xs]]
        _seat(xs, self.pref.vid, self.pref.key, self.pos, self.root, self.size, self.left, self.right, self.mkey)

    def shrink(self, v: int) -> np.ndarray:
        """Remove one seat from program ``v`` and resume DA; returns the re-queued rejects."""
        tail = _shrink(v, self.root, self.size, self.cap, self.mc, self.left, self.right, self.mkey,
                       self.scratch, self.pos, self.end, self.qbuf)
        rejected = self.qbuf[:tail].copy()
        self.run(rejected)
        return rejected

    def assigned_entries(self) -> np.ndarray:
        return np.where(self.pos < self.end, self.pos, -1)

    def filled(self) -> np.ndarray:
        e = self.assigned_entries()
        return np.bincount(self.pref.vid[e[e >= 0]], minlength=len(self.cap)).astype(np.int64)

    def members(self, v: int) -> list:
        """Candidates currently held by program ``v`` (heap order)."""
        out, stack = [], [int(self.root[v])]
        while stack:
            x = stack.pop()
            if x >= 0:
                out.append(x)
                stack.append(int(self.left[x]))
                stack.append(int(self.right[x]))
        return out

    def worst_key(self, v: int) -> int:
        r = self.root[v]
        return int(self.mkey[r]) if r >= 0 else NO_RANK

    def snapshot(self) -> tuple:
        return tuple(a.copy() for a in (self.pos, self.root, self.size, self.left, self.right, self.mkey,
                                        self.cap))

    def restore(self, snap: tuple) -> None:
        for dst, src in zip((self.pos, self.root, self.size, self.left, self.right, self.mkey, self.cap), snap):
            dst[:] = src


def overflow_reasons(keys: Sequence[int], capacity: int, min_cutoff: int,
                     eq: SupReason = SupReason.EQ, mc: SupReason = SupReason.MC,
                     within: SupReason = SupReason.NA) -> list:
    """Label a waitlist sorted best-first: MC beats EQ for admits beyond capacity."""
    out = []
    for i, k in enumerate(keys):
        if i < capacity:
            out.append(within)
        elif min_cutoff != NO_CUTOFF and k <= min_cutoff:
            out.append(mc)
        else:
            out.append(eq)
    return out


def remove_and_reject(keys: Sequence[int], capacity: int) -> tuple:
    """Apply the tie-aware removal to a sorted over-full waitlist.

    Returns ``(kept, removed)`` key lists: the block tied with the last entry
    leaves only when the rest still fills the capacity.
    """
    keys = list(keys)
    worst = keys[-1]
    tied = sum(1 for k in keys if k == worst)
    if len(keys) - tied >= capacity:
        return keys[:-tied], keys[-tied:]
    return keys, []


@dataclass
class DaResult:
    assignment: dict
    position: dict
    waitlists: dict
    supernumerary: dict = field(default_factory=dict)
    proposals: int = 0


RankSource = Union[Mapping, Callable]


def _key_of(value) -> int:
    if value is None:
        return NO_RANK
    if isinstance(value, Rank):
        return value.key
    return int(value)


def run_da(preferences: Mapping, capacities: Mapping, ranks: RankSource,
           min_cutoffs: Optional[Mapping] = None, queue: Optional[Sequence] = None,
           initial_positions: Optional[Mapping] = None) -> DaResult:
    """Run deferred acceptance on a small, explicitly given instance.

    ``ranks`` maps ``(candidate, program)`` to an int key, a :class:`Rank`, or
    None for "ineligible"; a missing pair raises :class:`MissingRank`.
    ``queue`` fixes the initial processing order; ``initial_positions`` gives
    1-based starting list positions for a warm start, seating every candidate
    that is not in ``queue`` directly at that position.
    """
    cands = sorted(preferences)
    cidx = {c: i for i, c in enumerate(cands)}
    progs = list(capacities)
    pidx = {p: i for i, p in enumerate(progs)}
    lookup = ranks if callable(ranks) else None
    ptr = [0]
    vid: list = []
    key: list = []
    for c in cands:
        for p in preferences[c]:
            if p not in pidx:
                raise UnknownProgram(f"{p!r} has no capacity entry")
            if lookup is not None:
                value = lookup(c, p)
            else:
                if (c, p) not in ranks:
                    raise MissingRank(c, p)
                value = ranks[(c, p)]
            vid.append(pidx[p])
            key.append(_key_of(value))
        ptr.append(len(vid))
    pref = PrefArrays(np.asarray(ptr, np.int64), np.asarray(vid, np.int64), np.asarray(key, np.int64),
                      np.arange(len(vid), dtype=np.int64))
    mc = np.zeros(len(progs), np.int64)
    for p, v in (min_cutoffs or {}).items():
        mc[pidx[p]] = _key_of(v) if v else NO_CUTOFF
    engine = DaEngine(pref, np.asarray([capacities[p] for p in progs], np.int64), mc)
    if initial_positions:
        for c, i in initial_positions.items():
            engine.pos[cidx[c]] = pref.ptr[cidx[c]] + i - 1
    order = [cidx[c] for c in queue] if queue is not None else list(range(len(cands)))
    if initial_positions:
        queued = set(order)
        engine.seat(np.asarray([i for i in range(len(cands)) if i not in queued], np.int64))
    engine.run(np.asarray(order, np.int64))

    assignment, position = {}, {}
    members: dict = {p: [] for p in progs}
    for c, i in cidx.items():
        e = int(engine.pos[i])
        position[c] = e - int(pref.ptr[i]) + 1
        if e < pref.ptr[i + 1]:
            p = progs[int(pref.vid[e])]
            assignment[c] = p
            members[p].append((int(pref.key[e]), i, c))
        else:
            assignment[c] = None
    waitlists, supernumerary = {}, {}
    for p, lst in members.items():
        lst.sort()
        waitlists[p] = [c for _, _, c in lst]
        labels = overflow_reasons([k for k, _, _ in lst], int(engine.cap[pidx[p]]), int(mc[pidx[p]]))
        extra = [(c, r) for (_, _, c), r in zip(lst, labels) if r != SupReason.NA]
        if extra:
            supernumerary[p] = extra
    return DaResult(assignment, position, waitlists, supernumerary, engine.proposals)


def foreign_pass(engine: DaEngine, open_gn: np.ndarray, foreign_queue: np.ndarray) -> None:
    """Admit foreign nationals after the Indian allocation is final.

    ``open_gn[v]`` names the Indian gender-neutral OPEN program paired with
    foreign program ``v`` (-1 elsewhere).  When that program is full a foreign
    applicant must rank no worse than its last Indian admit; an OPEN program
    with no Indian admit at all sets no bar.
    """
    for v in np.nonzero(open_gn >= 0)[0]:
        g = int(open_gn[v])
        full = engine.size[g] >= engine.cap[g] and engine.size[g] > 0
        engine.gate[v] = engine.worst_key(g) if full else INF_KEY
    engine.run(foreign_queue)
