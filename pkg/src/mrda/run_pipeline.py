"""One round end to end: repeated DA runs with seat de-reservation, DS and
foreign handling, then the allotment and program statistics tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .columnar import PrefArrays, compile_preferences
from .da_core import DaEngine, foreign_pass
from .ds2015 import Ds2015Outcome, allocate_ds_2015
from .errors import NonTermination
from .model import (BIRTH_CODES, PC_OFFSET, AllotmentRow, Category, Flag, Pool, ProgramStats, Quota, Rank,
                    SupReason)
from .rounds import RoundInput
from .tables_io import emit_allotment, emit_program_stats
from .virtualization import KIND_DS, KIND_FOREIGN, KIND_NORMAL, ProgramSet

MAX_RUNS = 10
REASONS = list(SupReason)
_R = {r: i for i, r in enumerate(REASONS)}
#: (within capacity, over capacity by Min-Cutoff, over capacity by a tie) per program kind
_LABELS = {
    KIND_NORMAL: (_R[SupReason.NA], _R[SupReason.MC], _R[SupReason.EQ]),
    KIND_DS: (_R[SupReason.DS], _R[SupReason.DM], _R[SupReason.DE]),
    KIND_FOREIGN: (_R[SupReason.FR], _R[SupReason.FM], _R[SupReason.FE]),
}


@dataclass
class RunTrace:
    run_no: int
    filled: np.ndarray
    capacity: np.ndarray
    moves: list  # (from vid, to vid, seats)


def dereserve(programs: ProgramSet, capacity: np.ndarray, filled: np.ndarray,
              moved_from: np.ndarray, moved_to: np.ndarray) -> list:
    """Move this run's unfilled reserved seats to their parent cells, all at once.

    Updates the arrays in place and returns the list of moves.
    """
    src = np.nonzero((programs.parent >= 0) & (capacity > filled))[0]
    moves = []
    for v in src:
        n = int(capacity[v] - filled[v])
        moves.append((int(v), int(programs.parent[v]), n))
    for v, p, n in moves:
        capacity[v] -= n
        capacity[p] += n
        moved_from[v] += n
        moved_to[p] += n
    return moves


@dataclass
class RoundResult:
    inp: RoundInput
    pref: PrefArrays
    engine: DaEngine
    capacity: np.ndarray  # after de-reservation, before any DS charging
    moved_from: np.ndarray
    moved_to: np.ndarray
    runs: list
    entry: np.ndarray  # allotted preference entry per candidate, -1 if none
    reason: np.ndarray  # index into REASONS
    ds: Optional[Ds2015Outcome] = None
    stained: list = field(default_factory=list)

    @property
    def programs(self) -> ProgramSet:
        return self.inp.programs

    @property
    def charged(self) -> np.ndarray:
        if self.ds is None:
            return np.zeros(len(self.capacity), np.int64)
        return self.ds.charged

    def assignment(self) -> dict:
        """Roll -> virtual program id for every seated candidate."""
        ids, rolls = self.programs.ids, self.inp.candidates.rolls
        return {str(rolls[x]): ids[int(self.pref.vid[e])] for x, e in enumerate(self.entry) if e >= 0}

    def allotment_rows(self) -> list:
        progs, cands, ch = self.programs, self.inp.candidates, self.inp.choices
        out = []
        for x in np.nonzero(self.entry >= 0)[0]:
            e = int(self.entry[x])
            v = int(self.pref.vid[e])
            key = int(self.pref.key[e])
            j = int(self.pref.choice[e])
            inst, br = ch.programs[int(ch.prog[j])]
            pid = progs.ids[v]
            kind = int(progs.kind[v])
            if kind == KIND_DS:
                cat, quota, pool, flag = "OPNO", Quota.AI, Pool.GENDER_NEUTRAL, Flag.DS
            elif kind == KIND_FOREIGN:
                cat, quota, pool, flag = "OPNO", pid.quota, pid.pool, Flag.FOREIGN
            else:
                cat, quota, pool = pid.category.code, pid.quota, pid.pool
                flag = Flag.PREP if key >= PC_OFFSET else Flag.NORMAL
            out.append(AllotmentRow(
                round_no=self.inp.round_no, roll_no=str(cands.rolls[x]),
                birth_cat=BIRTH_CODES[Category(int(cands.category[x])).base], opt_no=int(ch.opt[j]),
                inst_cd=inst, br_cd=br, rank=Rank.from_key(key), allotted_cat=cat, allotted_quota=quota,
                gender_pool=pool, flag=flag, supnum_reason=REASONS[int(self.reason[x])]))
        return out

    def stats_rows(self) -> list:
        progs = self.programs
        V = len(progs.ids)
        xs = np.nonzero(self.entry >= 0)[0]
        vids = self.pref.vid[self.entry[xs]]
        keys = self.pref.key[self.entry[xs]]
        total = np.bincount(vids, minlength=V) + self.charged
        opening = np.full(V, np.iinfo(np.int64).max, np.int64)
        closing = np.full(V, -1, np.int64)
        np.minimum.at(opening, vids, keys)
        np.maximum.at(closing, vids, keys)
        new_cap = self.capacity
        mc = self.inp.mc_keys
        out = []
        for v, pid in enumerate(progs.ids):
            out.append(ProgramStats(
                quota=pid.quota, inst_cd=pid.institute, br_cd=pid.branch, vcategory=pid.vcategory,
                gender_pool=pid.pool,
                opening_rank=Rank.from_key(int(opening[v])) if closing[v] >= 0 else None,
                closing_rank=Rank.from_key(int(closing[v])) if closing[v] >= 0 else None,
                min_cutoff=Rank.from_key(int(mc[v])), total_allotted=int(total[v]),
                init_cap=int(progs.init_cap[v]), new_cap=int(new_cap[v]),
                dereserve_from=int(self.moved_from[v]), dereserve_to=int(self.moved_to[v]),
                supernum=max(int(total[v]) - int(new_cap[v]), 0)))
        return out

    def allotment_csv(self) -> str:
        return emit_allotment(self.allotment_rows(), with_reporting=False)

    def stats_csv(self) -> str:
        return emit_program_stats(self.stats_rows())

    def stained_programs(self) -> list:
        return [self.programs.ids[v] for v in self.stained]


def _label(programs: ProgramSet, pref: PrefArrays, entry: np.ndarray, seats: np.ndarray,
           mc: np.ndarray) -> np.ndarray:
    """Supernumerary reason per candidate from waitlist order within each program."""
    reason = np.zeros(len(entry), np.int8)
    xs = np.nonzero(entry >= 0)[0]
    if not len(xs):
        return reason
    vids = pref.vid[entry[xs]].astype(np.int64)
    keys = pref.key[entry[xs]]
    order = np.lexsort((xs, keys, vids))
    xs, vids, keys = xs[order], vids[order], keys[order]
    first = np.searchsorted(vids, vids, side="left")
    place = np.arange(len(xs)) - first
    within = place < seats[vids]
    by_mc = (mc[vids] > 0) & (keys <= mc[vids])
    kinds = programs.kind[vids]
    for kind, (ok, m, eq) in _LABELS.items():
        sel = kinds == kind
        reason[xs[sel]] = np.where(within[sel], ok, np.where(by_mc[sel], m, eq))
    return reason


def split_queue(pref: PrefArrays, foreign: np.ndarray) -> tuple:
    """(Indian, foreign) candidate indices with a nonempty list, ascending."""
    has_list = pref.ptr[1:] > pref.ptr[:-1]
    return (np.nonzero(has_list & ~foreign)[0].astype(np.int64),
            np.nonzero(has_list & foreign)[0].astype(np.int64))


def multi_run(engine: DaEngine, programs: ProgramSet, queue: np.ndarray) -> tuple:
    """DA runs from scratch until no reserved seat is left unfilled.

    Returns (capacity, moved_from, moved_to, runs); ``engine`` holds the last run.
    """
    capacity = programs.init_cap.copy()
    moved_from = np.zeros_like(capacity)
    moved_to = np.zeros_like(capacity)
    runs = []
    for run_no in range(1, MAX_RUNS + 1):
        engine.reset(capacity)
        engine.run(queue)
        filled = engine.size.copy()
        cap_before = capacity.copy()
        moves = dereserve(programs, capacity, filled, moved_from, moved_to)
        runs.append(RunTrace(run_no, filled, cap_before, moves))
        if not moves:
            return capacity, moved_from, moved_to, runs
    raise NonTermination(f"seats still moving after {MAX_RUNS} runs")


def allocate_round(inp: RoundInput, supernumerary_ok: Optional[bool] = None) -> RoundResult:
    """Allocate one round.

    Under the 2015 DS rule the charging pass first runs without
    supernumerary seats; if that stains programs, it is redone with them
    allowed and the stained list kept on the result.  Passing
    ``supernumerary_ok`` pins a single pass.
    """
    progs = inp.programs
    pref = compile_preferences(inp.candidates, inp.choices, progs)
    engine = DaEngine(pref, progs.init_cap, inp.mc_keys)
    indian, overseas = split_queue(pref, inp.candidates.foreign)
    capacity, moved_from, moved_to, runs = multi_run(engine, progs, indian)

    ds = None
    stained: list = []
    if inp.ds_rule == 2015:
        snap = engine.snapshot()
        ok = bool(supernumerary_ok)
        ds = allocate_ds_2015(engine, progs, inp.candidates.rolls, ok)
        if ds.stained and supernumerary_ok is None:
            stained = ds.stained
            engine.restore(snap)
            ds = allocate_ds_2015(engine, progs, inp.candidates.rolls, True)
        elif not ok:
            stained = ds.stained
    foreign_pass(engine, progs.open_gn, overseas)

    entry = engine.assigned_entries()
    seats = engine.cap.copy()
    reason = _label(progs, pref, entry, seats, inp.mc_keys)
    if ds is not None:
        _label_ds_2015(reason, ds, entry)
        capacity = engine.cap + ds.charged
    return RoundResult(inp, pref, engine, capacity, moved_from, moved_to, runs, entry, reason, ds, stained)


def _label_ds_2015(reason: np.ndarray, ds: Ds2015Outcome, entry: np.ndarray) -> None:
    """Charged DS admits hold ordinary seats; reverted ones sit on top."""
    for lst in ds.seats.values():
        for s in lst:
            if s.candidate is None or entry[s.candidate] < 0:
                continue
            if reason[s.candidate] == _R[SupReason.DS]:
                charged = s.is_processed and not s.supernumerary
                reason[s.candidate] = _R[SupReason.NA] if charged else _R[SupReason.DS]
