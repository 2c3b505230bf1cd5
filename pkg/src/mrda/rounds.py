"""Round orchestration: Min-Cutoff, preference editing and round input assembly."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .columnar import CandidateTable, ChoiceTable
from .errors import DecisionWithoutSeat, InconsistentTables, UnknownProgram
from .model import AllotmentRow, CandidateRecord, Decision, RStatus
from .virtualization import ProgramSet, build_virtual_programs

#: Reporting outcomes that remove a candidate from every later round.
EXCLUDING_STATUSES = frozenset({RStatus.NR, RStatus.DR})


def seat_cancelled(row: AllotmentRow, cand: Optional[CandidateRecord]) -> bool:
    """True when the seat held in ``row`` does not carry into the next round."""
    if row.seat_cancelled:
        return True
    return cand is not None and cand.cat_change in (1, 4)


def leaves_process(row: AllotmentRow, cand: Optional[CandidateRecord]) -> bool:
    """Reject, withdrawal and no-show all end participation."""
    if row.withdraw == "Y" or row.rstatus in EXCLUDING_STATUSES:
        return True
    return cand is not None and cand.decision == Decision.REJECT


def compute_min_cutoff(prev_allotment: Iterable[AllotmentRow], candidates: Optional[dict] = None,
                       programs: Optional[ProgramSet] = None) -> dict:
    """Min-Cutoff per program from last round's reduced waitlists.

    ``candidates`` maps roll to the *current* record; when given, ranks are
    re-read from the revised credentials and rejecters are dropped.  Programs
    whose reduced waitlist is empty are omitted (their cutoff is 0).
    """
    worst: dict = {}
    for row in prev_allotment:
        cand = candidates.get(row.roll_no) if candidates is not None else None
        if seat_cancelled(row, cand) or leaves_process(row, cand):
            continue
        pid = row.program_id()
        if programs is not None and pid not in programs.index:
            raise UnknownProgram(f"allotment of {row.roll_no} names unknown program {pid}")
        rank = row.rank
        if cand is not None and programs is not None:
            current = programs.rank_of(cand, pid)
            if current is not None:
                rank = current
        if pid not in worst or rank > worst[pid]:
            worst[pid] = rank
    return worst


def edit_preferences(choices: list, decision: Optional[Decision], allotted: Optional[AllotmentRow],
                     *, excluded: bool = False, cancelled: bool = False) -> list:
    """Edit one raw choice list for the next round.

    ``excluded`` covers withdrawal and no-show; ``cancelled`` a seat lost at
    reporting, after which the candidate floats.  Invalid entries always go.
    """
    valid = [c for c in choices if c.valid]
    if excluded or decision == Decision.REJECT:
        if decision == Decision.REJECT and allotted is None:
            raise DecisionWithoutSeat(f"{_roll(choices)}: Reject without a seat")
        return []
    if allotted is None:
        if decision in (Decision.FREEZE, Decision.SLIDE):
            raise DecisionWithoutSeat(f"{_roll(choices)}: {decision.value} without a seat")
        return valid
    if cancelled or decision in (None, Decision.FLOAT):
        return valid
    at = next((i for i, c in enumerate(valid)
               if (c.inst_cd, c.br_cd) == (allotted.inst_cd, allotted.br_cd)), None)
    if at is None:
        raise DecisionWithoutSeat(f"{allotted.roll_no}: allotted {allotted.inst_cd}/{allotted.br_cd} "
                                  "is not on the choice list")
    if decision == Decision.FREEZE:
        return valid[at:]
    return [c for c in valid[:at] if c.inst_cd == allotted.inst_cd] + valid[at:]


def _roll(choices: list) -> str:
    return choices[0].roll_no if choices else "?"


@dataclass
class RoundInput:
    round_no: int
    programs: ProgramSet
    candidates: CandidateTable
    choices: ChoiceTable
    min_cutoff: dict = field(default_factory=dict)
    prev_allotment: Optional[list] = None
    raw_choices: Optional[ChoiceTable] = None
    ds_rule: int = 2016

    def __post_init__(self) -> None:
        if self.round_no < 1:
            raise ValueError("round numbers start at 1")
        if self.round_no == 1 and any(r.key for r in self.min_cutoff.values()):
            raise InconsistentTables("round 1 carries nonzero Min-Cutoffs")
        if self.ds_rule not in (2015, 2016):
            raise ValueError("ds_rule is 2015 or 2016")
        self.mc_keys = self.programs.cutoff_keys(self.min_cutoff)

    @property
    def records(self) -> dict:
        return {c.roll_no: c for c in self.candidates.to_records()}


def preprocess_round(round_no: int, seat_matrix: list, foreign_seat_matrix: list, profiles: dict,
                     candidates: Union[list, CandidateTable], choices: Union[dict, ChoiceTable],
                     prev_allotment: Optional[list] = None, min_cutoff: Optional[dict] = None,
                     baseline: Optional[dict] = None, ds_rule: int = 2016,
                     programs: Optional[ProgramSet] = None) -> RoundInput:
    """Assemble a :class:`RoundInput`, editing lists from last round's outcome.

    ``min_cutoff`` overrides the table derived from ``prev_allotment``.
    """
    table = candidates if isinstance(candidates, CandidateTable) else CandidateTable.from_records(candidates)
    if programs is None:
        programs = build_virtual_programs(seat_matrix, foreign_seat_matrix, profiles, baseline)
    raw = choices if isinstance(choices, ChoiceTable) else ChoiceTable.from_rows(choices, table)

    if round_no == 1 or not prev_allotment:
        if round_no > 1 and prev_allotment is None:
            raise InconsistentTables(f"round {round_no} needs the previous allotment")
        edited = _drop_invalid(raw)
        return RoundInput(round_no, programs, table, edited, dict(min_cutoff or {}), prev_allotment, raw, ds_rule)

    records = {c.roll_no: c for c in table.to_records()}
    held: dict = {}
    for row in prev_allotment:
        if row.roll_no not in records:
            raise InconsistentTables(f"previous allotment names unknown roll {row.roll_no!r}")
        held[row.roll_no] = row
    rows = raw.to_rows(table)
    edited: dict = {}
    for roll, cand in records.items():
        lst = rows.get(roll, [])
        row = held.get(roll)
        if row is None:
            if cand.decision in (Decision.FREEZE, Decision.SLIDE, Decision.REJECT):
                raise DecisionWithoutSeat(f"{roll}: decision {cand.decision.value} without a seat")
            out = edit_preferences(lst, None, None)
        else:
            out = edit_preferences(lst, cand.decision, row, excluded=leaves_process(row, cand),
                                   cancelled=seat_cancelled(row, cand))
        if out:
            edited[roll] = out
    if min_cutoff is None:
        min_cutoff = compute_min_cutoff(prev_allotment, records, programs)
    return RoundInput(round_no, programs, table, ChoiceTable.from_rows(edited, table), dict(min_cutoff),
                      prev_allotment, raw, ds_rule)


def _drop_invalid(t: ChoiceTable) -> ChoiceTable:
    if t.valid.all():
        return t
    keep = t.valid
    cs = np.zeros(len(keep) + 1, np.int64)
    np.cumsum(keep, out=cs[1:])
    ptr = cs[t.ptr]
    return ChoiceTable(ptr, t.prog[keep], t.opt[keep], t.valid[keep], t.programs)
