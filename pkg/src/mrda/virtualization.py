"""Seat matrices to virtual programs, raw choices to virtual preference lists."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .errors import InvalidBaseline, NegativeCapacity, UnknownInstitute, UnknownProgram
from .model import (DS_BRANCH, QUOTA_INDEX, CandidateRecord, Category, Family, Pool, Quota, Rank,
                    VirtualProgramId, effective_rank)

DEFAULT_FEMALE_TARGET = Fraction(14, 100)
FEMALE_CAP = Fraction(1, 5)

#: Child cell -> parent cell for unfilled-seat moves.
DERESERVATION_EDGES = {
    Category.OPEN_PwD: Category.OPEN,
    Category.OBC_NCL_PwD: Category.OBC_NCL,
    Category.OBC_NCL: Category.OPEN,
    Category.SC_PwD: Category.SC,
    Category.ST_PwD: Category.ST,
}

KIND_NORMAL, KIND_DS, KIND_FOREIGN = 0, 1, 2
POOLS = (Pool.FEMALE_ONLY, Pool.GENDER_NEUTRAL)
POOL_INDEX = {Pool.FEMALE_ONLY: 0, Pool.GENDER_NEUTRAL: 1}
CELLS = tuple(Category(i) for i in range(8))


class InstituteKind(str, enum.Enum):
    IIT = "IIT"
    NIT = "NIT"
    GFTI_AI = "GFTI_AI"
    GFTI_HS_OS = "GFTI_HS_OS"
    GFTI_HS_AI = "GFTI_HS_AI"


KIND_CODE = {k: i for i, k in enumerate(InstituteKind)}


@dataclass(frozen=True)
class InstituteProfile:
    inst_cd: str
    kind: InstituteKind
    has_pc: bool = False
    home_states: frozenset = frozenset()
    ds_capacity: int = 0
    arch_branches: frozenset = frozenset()

    def __post_init__(self) -> None:
        if self.kind == InstituteKind.IIT and self.ds_capacity != 2:
            raise ValueError(f"{self.inst_cd}: an IIT carries exactly 2 DS seats")
        if self.kind != InstituteKind.IIT and self.ds_capacity != 0:
            raise ValueError(f"{self.inst_cd}: only IITs carry DS seats")
        if self.has_pc and self.kind != InstituteKind.IIT:
            raise ValueError(f"{self.inst_cd}: preparatory courses exist only at IITs")

    def quota_plan(self) -> tuple:
        """Quotas this institute offers, as (quotas for home residents, quotas for others)."""
        if self.kind in (InstituteKind.IIT, InstituteKind.GFTI_AI):
            return (Quota.AI,), (Quota.AI,)
        if self.kind == InstituteKind.GFTI_HS_AI:
            return (Quota.AI, Quota.HS), (Quota.AI,)
        return (Quota.HS,), (Quota.OS,)


@dataclass(frozen=True)
class BaselineCell:
    capacity: int
    female_admits: int
    target: Fraction = DEFAULT_FEMALE_TARGET


def compute_gender_pools(C: int, f: int, target=DEFAULT_FEMALE_TARGET) -> tuple:
    """Split a cell of ``C`` seats that admitted ``f`` females last year."""
    t = Fraction(target) if not isinstance(target, float) else Fraction(str(target))
    if not (0 < t <= FEMALE_CAP):
        raise InvalidBaseline(f"target fraction {target} outside (0, 0.2]")
    if C < 0 or f < 0 or f > C:
        raise InvalidBaseline(f"need 0 <= f <= C, got C={C}, f={f}")
    if f < t * C:
        x = math.ceil((t * C - f) / (1 - t))
        return f + x, C - f
    if f <= FEMALE_CAP * C:
        return f, C - f
    top = math.floor(FEMALE_CAP * C)
    return top, C - top


def new_program_pools(C: int, target=DEFAULT_FEMALE_TARGET) -> tuple:
    """Split for a cell without history: a target share of C goes to females."""
    t = Fraction(target) if not isinstance(target, float) else Fraction(str(target))
    female = math.ceil(t * C)
    return female, C - female


@dataclass(frozen=True)
class ActualProgram:
    inst_cd: str
    br_cd: str
    profile: InstituteProfile
    family: Family
    home_states: frozenset

    @property
    def requires_aat(self) -> bool:
        return self.profile.kind == InstituteKind.IIT and self.br_cd in self.profile.arch_branches


class VirtualPreference(NamedTuple):
    program: VirtualProgramId
    rank: Rank
    opt_no: int


@dataclass
class ProgramSet:
    """Every virtual program of a round plus the lookup tables expansion needs."""

    ids: list
    index: dict
    init_cap: np.ndarray
    parent: np.ndarray
    kind: np.ndarray
    open_gn: np.ndarray
    actual: list
    actual_index: dict
    profiles: dict
    vid_of: np.ndarray
    ds_vid_of_inst: np.ndarray
    inst_codes: list
    inst_of_prog: np.ndarray
    foreign_vid_of_prog: np.ndarray
    open_vid_of_prog: np.ndarray
    state_codes: dict
    home: np.ndarray
    actual_of_vid: np.ndarray = field(default=None)

    @property
    def size(self) -> int:
        return len(self.ids)

    def program(self, inst_cd: str, br_cd: str) -> ActualProgram:
        try:
            return self.actual[self.actual_index[(inst_cd, br_cd)]]
        except KeyError:
            raise UnknownProgram(f"{inst_cd}/{br_cd} is not in the seat matrix") from None

    def family_of(self, pid: VirtualProgramId) -> tuple:
        """(family, has_pc) of the actual program behind ``pid``."""
        if pid.is_ds:
            return Family.ADV, False
        ap = self.program(pid.institute, pid.branch)
        return ap.family, ap.profile.has_pc

    def rank_of(self, c: CandidateRecord, pid: VirtualProgramId) -> Optional[Rank]:
        family, has_pc = self.family_of(pid)
        return effective_rank(c, pid, family, has_pc)

    def cutoff_keys(self, table: dict) -> np.ndarray:
        """Min-Cutoff keys aligned with ``ids``; absent programs get 0."""
        out = np.zeros(len(self.ids), np.int64)
        for pid, rank in table.items():
            vid = self.index.get(pid)
            if vid is None:
                raise UnknownProgram(f"min-cutoff row for unknown program {pid}")
            out[vid] = rank.key
        return out

    def is_home(self, ap: ActualProgram, state_code: str) -> bool:
        return bool(state_code) and state_code in ap.home_states


def _family_of(profile: InstituteProfile, br_cd: str) -> Family:
    if profile.kind == InstituteKind.IIT:
        return Family.ADV
    return Family.ARCH if br_cd in profile.arch_branches else Family.ENG


def split_by_baseline(seat_matrix: list, baseline: dict) -> list:
    """Turn a neutral-only matrix into Female/Neutral rows, cell by cell."""
    from .tables_io import SeatMatrixRow

    out = []
    for row in seat_matrix:
        if row.gender_pool != Pool.GENDER_NEUTRAL:
            raise InvalidBaseline(f"{row.inst_cd}/{row.br_cd}: matrix already carries gender pools")
        female, neutral = {}, {}
        for cat, count in row.counts.items():
            cell = baseline.get((row.quota, row.inst_cd, row.br_cd, cat))
            if cell is None:
                fem, neu = new_program_pools(count)
            else:
                if cell.capacity != count:
                    raise InvalidBaseline(f"{row.inst_cd}/{row.br_cd}/{cat.code}: baseline C={cell.capacity} "
                                          f"but matrix declares {count}")
                fem, neu = compute_gender_pools(cell.capacity, cell.female_admits, cell.target)
            female[cat], neutral[cat] = fem, neu
        out.append(SeatMatrixRow(row.quota, row.inst_cd, row.br_cd, Pool.FEMALE_ONLY, female, row.st_codes))
        out.append(SeatMatrixRow(row.quota, row.inst_cd, row.br_cd, Pool.GENDER_NEUTRAL, neutral, row.st_codes))
    return out


def build_virtual_programs(seat_matrix: list, foreign_seat_matrix: list, profiles: dict,
                           baseline: Optional[dict] = None) -> ProgramSet:
    if baseline:
        seat_matrix = split_by_baseline(seat_matrix, baseline)

    # actual programs in first-appearance order
    actual: list = []
    actual_index: dict = {}
    states_of: dict = {}
    for row in seat_matrix:
        if row.inst_cd not in profiles:
            raise UnknownInstitute(f"institute {row.inst_cd} has no profile")
        for cat, n in row.counts.items():
            if n < 0:
                raise NegativeCapacity(f"{row.inst_cd}/{row.br_cd}/{cat.code}: {n}")
        key = (row.inst_cd, row.br_cd)
        if key not in actual_index:
            actual_index[key] = len(actual)
            actual.append(key)
            states_of[key] = set()
        states_of[key] |= row.home_states
    actual_programs = []
    for inst, br in actual:
        prof = profiles[inst]
        homes = frozenset(states_of[(inst, br)]) or prof.home_states
        actual_programs.append(ActualProgram(inst, br, prof, _family_of(prof, br), homes))

    capacity = {(r.quota, r.inst_cd, r.br_cd, r.gender_pool): r.counts for r in seat_matrix}
    ids: list = []
    caps: list = []
    kinds: list = []

    def add(pid: VirtualProgramId, cap: int, kind: int) -> None:
        ids.append(pid)
        caps.append(cap)
        kinds.append(kind)

    declared: dict = {}
    for (q, inst, br, _pool) in capacity:
        declared.setdefault((inst, br), []).append(q)
    for ap in actual_programs:
        home_q, other_q = ap.profile.quota_plan()
        quotas = list(dict.fromkeys(home_q + other_q + tuple(declared[(ap.inst_cd, ap.br_cd)])))
        for q in quotas:
            for pool in POOLS:
                counts = capacity.get((q, ap.inst_cd, ap.br_cd, pool), {})
                for cat in CELLS:
                    add(VirtualProgramId(q, ap.inst_cd, ap.br_cd, cat, pool), counts.get(cat, 0), KIND_NORMAL)

    inst_codes = sorted({ap.inst_cd for ap in actual_programs})
    inst_pos = {c: i for i, c in enumerate(inst_codes)}
    for inst in inst_codes:
        prof = profiles[inst]
        if prof.ds_capacity > 0:
            add(VirtualProgramId(Quota.AI, inst, DS_BRANCH, Category.DS), prof.ds_capacity, KIND_DS)

    foreign_caps: dict = {}
    for row in foreign_seat_matrix:
        key = (row.inst_cd, row.br_cd)
        if key not in actual_index:
            raise UnknownProgram(f"foreign seats for {row.inst_cd}/{row.br_cd}, absent from the seat matrix")
        if profiles[row.inst_cd].kind != InstituteKind.IIT:
            raise UnknownProgram(f"foreign seats declared at non-IIT {row.inst_cd}")
        if row.total < 0:
            raise NegativeCapacity(f"foreign {row.inst_cd}/{row.br_cd}")
        foreign_caps[key] = foreign_caps.get(key, 0) + row.total
    for ap in actual_programs:
        if ap.profile.kind == InstituteKind.IIT:
            add(VirtualProgramId(Quota.AI, ap.inst_cd, ap.br_cd, Category.OPEN, Pool.GENDER_NEUTRAL, True),
                foreign_caps.get((ap.inst_cd, ap.br_cd), 0), KIND_FOREIGN)

    index = {pid: i for i, pid in enumerate(ids)}
    V, P = len(ids), len(actual_programs)
    parent = np.full(V, -1, np.int32)
    open_gn = np.full(V, -1, np.int32)
    actual_of_vid = np.full(V, -1, np.int32)
    vid_of = np.full((max(P, 1), len(Quota), 8, 2), -1, np.int32)
    foreign_vid_of_prog = np.full(max(P, 1), -1, np.int32)
    open_vid_of_prog = np.full(max(P, 1), -1, np.int32)
    ds_vid_of_inst = np.full(max(len(inst_codes), 1), -1, np.int32)
    for vid, pid in enumerate(ids):
        if pid.is_ds:
            ds_vid_of_inst[inst_pos[pid.institute]] = vid
            continue
        p = actual_index[(pid.institute, pid.branch)]
        actual_of_vid[vid] = p
        if pid.foreign_pool:
            foreign_vid_of_prog[p] = vid
            open_gn[vid] = index[VirtualProgramId(pid.quota, pid.institute, pid.branch, Category.OPEN)]
            continue
        vid_of[p, QUOTA_INDEX[pid.quota], int(pid.category), POOL_INDEX[pid.pool]] = vid
        if pid.category in DERESERVATION_EDGES:
            parent[vid] = index[VirtualProgramId(pid.quota, pid.institute, pid.branch,
                                                 DERESERVATION_EDGES[pid.category], pid.pool)]
    for p, ap in enumerate(actual_programs):
        open_vid_of_prog[p] = vid_of[p, QUOTA_INDEX[Quota.AI], 0, 1]

    state_list = sorted({s for ap in actual_programs for s in ap.home_states})
    state_codes = {s: i for i, s in enumerate(state_list)}
    home = np.zeros((max(P, 1), max(len(state_list), 1)), np.bool_)
    for p, ap in enumerate(actual_programs):
        for s in ap.home_states:
            home[p, state_codes[s]] = True

    return ProgramSet(
        ids=ids, index=index, init_cap=np.asarray(caps, np.int64),
        parent=parent, kind=np.asarray(kinds, np.int8), open_gn=open_gn,
        actual=actual_programs, actual_index=actual_index, profiles=profiles, vid_of=vid_of,
        ds_vid_of_inst=ds_vid_of_inst, inst_codes=inst_codes,
        inst_of_prog=np.asarray([inst_pos[ap.inst_cd] for ap in actual_programs] or [0], np.int32),
        foreign_vid_of_prog=foreign_vid_of_prog, open_vid_of_prog=open_vid_of_prog,
        state_codes=state_codes, home=home, actual_of_vid=actual_of_vid)


def quotas_for(ap: ActualProgram, state_code: str) -> tuple:
    home_q, other_q = ap.profile.quota_plan()
    return home_q if (state_code and state_code in ap.home_states) else other_q


def expand_preferences(c: CandidateRecord, choices: Iterable, programs: ProgramSet) -> list:
    """Reference expansion of one raw choice list into virtual preferences."""
    out: list = []
    if c.is_foreign:
        for ch in choices:
            if not ch.valid:
                continue
            ap = programs.program(ch.inst_cd, ch.br_cd)
            if ap.profile.kind != InstituteKind.IIT:
                continue
            pid = VirtualProgramId(Quota.AI, ap.inst_cd, ap.br_cd, Category.OPEN, Pool.GENDER_NEUTRAL, True)
            rank = effective_rank(c, pid, ap.family, ap.profile.has_pc)
            if rank is not None and pid in programs.index:
                out.append(VirtualPreference(pid, rank, ch.opt_no))
        return out

    pools = POOLS if c.is_female else (Pool.GENDER_NEUTRAL,)
    ladder = c.ladder()
    ds_seen: set = set()
    for ch in choices:
        if not ch.valid:
            continue
        ap = programs.program(ch.inst_cd, ch.br_cd)
        if ap.requires_aat and not c.aat_qualified:
            continue
        for q in quotas_for(ap, c.state_code):
            for cell in ladder:
                for pool in pools:
                    pid = VirtualProgramId(q, ap.inst_cd, ap.br_cd, cell, pool)
                    if pid not in programs.index:
                        continue
                    rank = effective_rank(c, pid, ap.family, ap.profile.has_pc)
                    if rank is not None:
                        out.append(VirtualPreference(pid, rank, ch.opt_no))
        if c.ds_flag and ap.profile.kind == InstituteKind.IIT and ap.inst_cd not in ds_seen:
            pid = VirtualProgramId(Quota.AI, ap.inst_cd, DS_BRANCH, Category.DS)
            rank = effective_rank(c, pid, Family.ADV, False)
            if rank is not None and pid in programs.index:
                out.append(VirtualPreference(pid, rank, ch.opt_no))
                ds_seen.add(ap.inst_cd)
    return out
