"""Preferential DS admission (the 2015 rule) with race detection.

After DA, every seat held through an institute DS program is charged to the
gender-neutral OPEN program of the branch it is tagged with.  Charging one
seat shrinks that program, which may set off a rejection chain.  A chain
that changes the programs behind already charged seats is a *race*; it is
either reverted (the DS admit becomes supernumerary) or reported as stained.
"""

from __future__ import annotations

import copy
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .da_core import DaEngine
from .virtualization import KIND_DS, ProgramSet


@dataclass
class DsSeat:
    institute: str
    candidate: Optional[int] = None  # candidate index
    program: Optional[int] = None  # OPEN vid the seat is charged to
    is_processed: bool = False
    supernumerary: bool = False

    def __post_init__(self) -> None:
        if (self.candidate is None) != (self.program is None):
            raise ValueError("a DS seat holds a candidate exactly when it names a program")


@dataclass
class Ds2015Outcome:
    seats: dict  # DS vid -> list of DsSeat
    charged: np.ndarray  # per vid, seats handed to DS admits
    stained: list = field(default_factory=list)  # vids
    races: int = 0
    trace: list = field(default_factory=list)  # (candidate, race?) per processed seat


def _open_vid(engine: DaEngine, programs: ProgramSet, x: int) -> int:
    pref = engine.pref
    e = int(engine.pos[x])
    return int(programs.open_vid_of_prog[pref.choice_prog[pref.choice[e]]])


def _occupants(engine: DaEngine, d: int) -> list:
    xs = engine.members(d)
    return sorted(xs, key=lambda x: (int(engine.mkey[x]), x))


def _reassign(seats: list, engine: DaEngine, programs: ProgramSet, d: int) -> list:
    """Map the new occupants of DS program ``d`` onto the existing seats."""
    seats = [copy.copy(s) for s in seats]
    now = _occupants(engine, d)
    present = set(now)
    vacated = []
    for s in seats:
        if s.candidate is not None and s.candidate in present:
            s.program = _open_vid(engine, programs, s.candidate)
        else:
            vacated.append((s, s.program))
            s.candidate = s.program = None
    placed = {s.candidate for s in seats if s.candidate is not None}
    newcomers = [x for x in now if x not in placed]
    # a processed seat keeps its program when an entrant holds the same one
    for s, was in vacated:
        if s.is_processed and was is not None:
            for x in newcomers:
                if _open_vid(engine, programs, x) == was:
                    s.candidate, s.program = x, was
                    newcomers.remove(x)
                    break
    empty = [s for s in seats if s.candidate is None and not s.is_processed]
    empty += [s for s in seats if s.candidate is None and s.is_processed]
    for x in newcomers:
        if empty:
            s = empty.pop(0)
        else:
            s = DsSeat(programs.ids[d].institute)
            seats.append(s)
        s.candidate, s.program = x, _open_vid(engine, programs, x)
    return seats


def _processed_programs(seats: list) -> Counter:
    return Counter(s.program for s in seats if s.is_processed)


def allocate_ds_2015(engine: DaEngine, programs: ProgramSet, roll_of: np.ndarray,
                     supernumerary_ok: bool) -> Ds2015Outcome:
    """Charge every DS-program admit to an OPEN seat, one seat at a time.

    ``engine`` must hold a finished allocation; it is advanced in place.
    Seats are processed in (institute code, roll) order.
    """
    ds_vids = [int(v) for v in np.nonzero(programs.kind == KIND_DS)[0]]
    seats: dict = {}
    for d in ds_vids:
        lst = []
        for x in _occupants(engine, d):
            lst.append(DsSeat(programs.ids[d].institute, x, _open_vid(engine, programs, x)))
        seats[d] = lst
    charged = np.zeros(len(programs.ids), np.int64)
    out = Ds2015Outcome(seats, charged)
    stained: set = set()

    while True:
        pending = [(programs.ids[d].institute, str(roll_of[s.candidate]), d, i)
                   for d in ds_vids for i, s in enumerate(seats[d])
                   if not s.is_processed and s.candidate is not None]
        if not pending:
            break
        _, _, d0, i0 = min(pending)
        seat = seats[d0][i0]
        x, o = seat.candidate, seat.program
        if engine.cap[o] <= 0:
            # nothing to give up: the admit stays on top of the program
            seat.is_processed = seat.supernumerary = True
            out.trace.append((x, False))
            continue
        snap = engine.snapshot()
        old = {d: [copy.copy(s) for s in seats[d]] for d in ds_vids}
        old[d0][i0].is_processed = True
        seat.is_processed = True
        charged[o] += 1
        engine.shrink(o)
        new = {d: _reassign(seats[d], engine, programs, d) for d in ds_vids}
        lost: Counter = Counter()
        gained: Counter = Counter()
        for d in ds_vids:
            before, after = _processed_programs(old[d]), _processed_programs(new[d])
            lost += before - after
            gained += after - before
        race = bool(lost or gained)
        out.trace.append((x, race))
        if not race:
            seats.update(new)
            continue
        out.races += 1
        if supernumerary_ok:
            engine.restore(snap)
            charged[o] -= 1
            seats.update(old)
            seats[d0][i0].supernumerary = True
        else:
            seats.update(new)
            stained.update(p for p in list(lost) + list(gained) if p is not None)
    out.seats = seats
    out.stained = sorted(stained)
    return out
