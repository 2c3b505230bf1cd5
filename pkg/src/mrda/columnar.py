"""Array-backed candidate and choice tables and the bulk preference compiler.

The allocation kernels never touch Python objects: candidates are rows of
numpy columns sorted by roll number (so candidate index order is the
tie-break order) and virtual preference lists live in CSR form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .errors import UnknownProgram
from .model import (N_RANK_LISTS, REMARK_CELLS, CandidateInfo, CandidateRecord, Category, Gender, Nationality,
                    RankList)
from .virtualization import KIND_CODE, InstituteKind, ProgramSet

SYMBOLS = ("", "*", "=", "+", "$", "%", "P", "N")
SYMBOL_CODE = {s: i for i, s in enumerate(SYMBOLS)}
SYM_STAR, SYM_P, SYM_N = SYMBOL_CODE["*"], SYMBOL_CODE["P"], SYMBOL_CODE["N"]
SYMBOL_MASK = np.array([sum(1 << int(c) for c in REMARK_CELLS.get(s, ())) for s in SYMBOLS], np.int64)
#: Cell -> PC rank-list column, -1 where no PC list exists.
PC_COLUMN = np.array([-1, -1, 24, 25, 26, 27, 28, 29], np.int64)
_IIT = KIND_CODE[InstituteKind.IIT]
_KIND_QUOTAS = {  # kind -> ((home quotas), (other quotas)) as quota indices
    KIND_CODE[InstituteKind.IIT]: ((0,), (0,)),
    KIND_CODE[InstituteKind.GFTI_AI]: ((0,), (0,)),
    KIND_CODE[InstituteKind.GFTI_HS_AI]: ((0, 1), (0,)),
    KIND_CODE[InstituteKind.NIT]: ((1,), (2,)),
    KIND_CODE[InstituteKind.GFTI_HS_OS]: ((1,), (2,)),
}


@dataclass
class CandidateTable:
    rolls: np.ndarray  # str, ascending
    category: np.ndarray  # int8 cell tag 0..7
    female: np.ndarray
    foreign: np.ndarray
    state: np.ndarray  # str
    ds: np.ndarray
    prep: np.ndarray
    aat: np.ndarray
    remark: np.ndarray  # int8 [n, 3]
    ranks: np.ndarray  # int64 [n, 30], 0 = absent
    records: Optional[list] = None

    def __len__(self) -> int:
        return len(self.rolls)

    @classmethod
    def from_records(cls, records: list) -> "CandidateTable":
        recs = sorted(records, key=lambda r: r.roll_no)
        n = len(recs)
        ranks = np.zeros((n, N_RANK_LISTS), np.int64)
        remark = np.zeros((n, 3), np.int8)
        for i, r in enumerate(recs):
            for rl, v in r.ranks.items():
                ranks[i, int(rl)] = v
            for f in range(3):
                remark[i, f] = SYMBOL_CODE[r.remarks[f]]
        return cls(
            rolls=np.array([r.roll_no for r in recs], dtype=str) if n else np.zeros(0, "<U8"),
            category=np.array([int(r.category) for r in recs], np.int8),
            female=np.array([r.is_female for r in recs], np.bool_),
            foreign=np.array([r.is_foreign for r in recs], np.bool_),
            state=np.array([r.state_code for r in recs], dtype="<U2") if n else np.zeros(0, "<U2"),
            ds=np.array([r.ds_flag for r in recs], np.bool_),
            prep=np.array([r.prep_eligible for r in recs], np.bool_),
            aat=np.array([r.aat_qualified for r in recs], np.bool_),
            remark=remark, ranks=ranks, records=recs)

    def to_records(self) -> list:
        """Materialize records (identity columns blank when the table was generated)."""
        if self.records is not None:
            return self.records
        out = []
        for i in range(len(self)):
            ranks = {RankList(j): int(v) for j, v in enumerate(self.ranks[i]) if v > 0}
            out.append(CandidateRecord(
                roll_no=str(self.rolls[i]), category=Category(int(self.category[i])),
                gender=Gender.FEMALE if self.female[i] else Gender.MALE, state_code=str(self.state[i]),
                nationality=Nationality.FOREIGN if self.foreign[i] else Nationality.INDIAN,
                ds_flag=bool(self.ds[i]), prep_eligible=bool(self.prep[i]), ranks=ranks,
                remarks=tuple(SYMBOLS[int(s)] for s in self.remark[i]), aat_qualified=bool(self.aat[i]),
                info=CandidateInfo()))
        self.records = out
        return out

    def position(self) -> dict:
        return {str(r): i for i, r in enumerate(self.rolls)}


@dataclass
class ChoiceTable:
    """Raw choice lists aligned with a :class:`CandidateTable` (row i = candidate i)."""

    ptr: np.ndarray  # int64 [n+1]
    prog: np.ndarray  # int32 index into ``programs``
    opt: np.ndarray  # int16 original OptNo
    valid: np.ndarray  # bool
    programs: list  # (inst_cd, br_cd)

    @classmethod
    def from_rows(cls, choices: dict, candidates: CandidateTable) -> "ChoiceTable":
        programs: list = []
        pindex: dict = {}
        ptr = [0]
        prog: list = []
        opt: list = []
        valid: list = []
        for roll in candidates.rolls:
            for row in choices.get(str(roll), ()):
                key = (row.inst_cd, row.br_cd)
                j = pindex.get(key)
                if j is None:
                    j = pindex[key] = len(programs)
                    programs.append(key)
                prog.append(j)
                opt.append(row.opt_no)
                valid.append(row.valid)
            ptr.append(len(prog))
        if opt and max(opt) > np.iinfo(np.int16).max:
            raise ValueError("choice lists longer than 32767 entries are not supported")
        return cls(np.asarray(ptr, np.int64), np.asarray(prog, np.int32), np.asarray(opt, np.int16),
                   np.asarray(valid, np.bool_), programs)

    def to_rows(self, candidates: CandidateTable) -> dict:
        from .tables_io import ChoiceRow

        out: dict = {}
        for i, roll in enumerate(candidates.rolls):
            lo, hi = self.ptr[i], self.ptr[i + 1]
            if hi > lo:
                out[str(roll)] = [ChoiceRow(str(roll), int(self.opt[j]), *self.programs[self.prog[j]],
                                            "" if self.valid[j] else "N") for j in range(lo, hi)]
        return out


@dataclass
class PrefArrays:
    """Virtual preference lists in CSR form; ``choice[e]`` is the raw choice row of entry ``e``."""

    ptr: np.ndarray
    vid: np.ndarray
    key: np.ndarray
    choice: np.ndarray
    choice_prog: Optional[np.ndarray] = None  # actual program index per raw choice row

    def __len__(self) -> int:
        return len(self.ptr) - 1

    def entries(self, x: int) -> range:
        return range(int(self.ptr[x]), int(self.ptr[x + 1]))


@njit(cache=True)
def _cell_key(x, fam, cell, has_pc, remark, ranks, prep, sym_mask, pc_column):
    sym = remark[x, fam]
    if sym == 0 or sym == 7:
        return -1
    if (sym_mask[sym] >> cell) & 1:
        r = ranks[x, fam * 8 + cell]
        if r > 0:
            return r
    if fam == 2 and has_pc and prep[x]:
        col = pc_column[cell]
        if col >= 0:
            r = ranks[x, col]
            if r > 0:
                return (1 << 50) + r
    return -1


@njit(cache=True)
def _expand(write, out_ptr, out_vid, out_key, out_choice, counts,
            category, female, foreign, state, ds, prep, aat, remark, ranks,
            ch_ptr, ch_prog, ch_valid,
            p_inst, p_family, p_kind, p_has_pc, p_aat, p_home, quota_table,
            vid_of, ds_vid_of_inst, foreign_vid_of_prog, sym_mask, pc_column, seen):
    n = category.shape[0]
    ladder = np.empty(4, np.int64)
    for x in range(n):
        base_pos = out_ptr[x] if write else 0
        cnt = 0
        nseen = 0
        cat = category[x]
        b = cat % 4
        pwd = cat >= 4
        nl = 1
        ladder[0] = 0
        if pwd:
            ladder[nl] = 4
            nl += 1
        if b != 0:
            ladder[nl] = b
            nl += 1
            if pwd:
                ladder[nl] = b + 4
                nl += 1
        for j in range(ch_ptr[x], ch_ptr[x + 1]):
            if not ch_valid[j]:
                continue
            p = ch_prog[j]
            kind = p_kind[p]
            if foreign[x]:
                if kind != 0:
                    continue
                fv = foreign_vid_of_prog[p]
                if fv < 0 or remark[x, 2] != 1:
                    continue
                r = ranks[x, 16]
                if r <= 0:
                    continue
                if write:
                    out_vid[base_pos + cnt] = fv
                    out_key[base_pos + cnt] = r
                    out_choice[base_pos + cnt] = j
                cnt += 1
                continue
            if p_aat[p] and not aat[x]:
                continue
            fam = p_family[p]
            home = state[x] >= 0 and p_home[p, state[x]]
            side = 0 if home else 1
            nq = quota_table[kind, side, 0]
            for qi in range(nq):
                q = quota_table[kind, side, 1 + qi]
                for li in range(nl):
                    cell = ladder[li]
                    k = _cell_key(x, fam, cell, p_has_pc[p], remark, ranks, prep, sym_mask, pc_column)
                    if k < 0:
                        continue
                    for pool in range(2):
                        if pool == 0 and not female[x]:
                            continue
                        v = vid_of[p, q, cell, pool]
                        if v < 0:
                            continue
                        if write:
                            out_vid[base_pos + cnt] = v
                            out_key[base_pos + cnt] = k
                            out_choice[base_pos + cnt] = j
                        cnt += 1
            if ds[x] and kind == 0:
                inst = p_inst[p]
                dv = ds_vid_of_inst[inst]
                if dv >= 0 and remark[x, 2] == 1 and ranks[x, 16] > 0:
                    dup = False
                    for s in range(nseen):
                        if seen[s] == inst:
                            dup = True
                            break
                    if not dup:
                        seen[nseen] = inst
                        nseen += 1
                        if write:
                            out_vid[base_pos + cnt] = dv
                            out_key[base_pos + cnt] = ranks[x, 16]
                            out_choice[base_pos + cnt] = j
                        cnt += 1
        counts[x] = cnt


def _quota_table() -> np.ndarray:
    t = np.zeros((len(KIND_CODE), 2, 3), np.int64)
    for kind, sides in _KIND_QUOTAS.items():
        for side, qs in enumerate(sides):
            t[kind, side, 0] = len(qs)
            for i, q in enumerate(qs):
                t[kind, side, 1 + i] = q
    return t


def compile_preferences(candidates: CandidateTable, choices: ChoiceTable, programs: ProgramSet) -> PrefArrays:
    """Expand every candidate's raw list into CSR virtual preference arrays."""
    n = len(candidates)
    pmap = np.empty(max(len(choices.programs), 1), np.int32)
    for j, key in enumerate(choices.programs):
        p = programs.actual_index.get(key)
        if p is None:
            raise UnknownProgram(f"choice names {key[0]}/{key[1]}, absent from the seat matrix")
        pmap[j] = p
    ch_prog = pmap[choices.prog] if len(choices.prog) else np.zeros(0, np.int32)

    state = np.full(n, -1, np.int64)
    if n and programs.state_codes:
        codes = np.array(list(programs.state_codes.keys()), dtype="<U2")
        order = np.argsort(codes)
        pos = np.searchsorted(codes[order], candidates.state)
        pos = np.clip(pos, 0, len(codes) - 1)
        hit = codes[order][pos] == candidates.state
        state[hit] = np.array(list(programs.state_codes.values()), np.int64)[order][pos[hit]]

    p_family = np.array([int(ap.family) for ap in programs.actual] or [0], np.int64)
    p_kind = np.array([KIND_CODE[ap.profile.kind] for ap in programs.actual] or [0], np.int64)
    p_has_pc = np.array([ap.profile.has_pc for ap in programs.actual] or [False], np.bool_)
    p_aat = np.array([ap.requires_aat for ap in programs.actual] or [False], np.bool_)
    assert _IIT == 0
    longest = int(np.max(np.diff(choices.ptr))) if n else 0
    seen = np.empty(max(longest, 1), np.int64)
    counts = np.zeros(n, np.int64)
    dummy_i32 = np.zeros(0, np.int32)
    dummy_i64 = np.zeros(0, np.int64)
    args = (candidates.category, candidates.female, candidates.foreign, state, candidates.ds, candidates.prep,
            candidates.aat, candidates.remark, candidates.ranks, choices.ptr, ch_prog, choices.valid,
            programs.inst_of_prog, p_family, p_kind, p_has_pc, p_aat, programs.home, _quota_table(),
            programs.vid_of, programs.ds_vid_of_inst, programs.foreign_vid_of_prog, SYMBOL_MASK, PC_COLUMN, seen)
    _expand(False, np.zeros(n + 1, np.int64), dummy_i32, dummy_i64, dummy_i32, counts, *args)
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=ptr[1:])
    total = int(ptr[-1])
    vid = np.empty(total, np.int32)
    key = np.empty(total, np.int64)
    choice = np.empty(total, np.int32)
    _expand(True, ptr, vid, key, choice, counts, *args)
    return PrefArrays(ptr, vid, key, choice, ch_prog)
