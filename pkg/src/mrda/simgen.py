"""Seeded synthetic instances and the separate-allocation counterfactual."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from numba import njit

from .columnar import SYMBOL_CODE, CandidateTable, ChoiceTable, compile_preferences
from .da_core import DaEngine, foreign_pass
from .run_pipeline import allocate_round, multi_run, split_queue
from .model import N_RANK_LISTS, RANK_SCALE, Category, Decision, Pool, Quota, RankList, RStatus
from .tables_io import (SeatMatrixRow, emit_candidates, emit_choices, emit_profiles, emit_seat_matrix,
                        write_text)
from .virtualization import InstituteKind, InstituteProfile, new_program_pools

_STATES = [chr(65 + i) + chr(65 + j) for i in range(26) for j in range(26)]


@dataclass
class GenConfig:
    n_candidates: int = 100
    n_institutes: int = 6
    branches: tuple = (2, 5)  # inclusive range per institute
    seats: tuple = (2, 8)  # inclusive range per quota row
    kind_weights: dict = field(default_factory=lambda: {
        InstituteKind.IIT: 0.35, InstituteKind.NIT: 0.35, InstituteKind.GFTI_AI: 0.1,
        InstituteKind.GFTI_HS_OS: 0.1, InstituteKind.GFTI_HS_AI: 0.1})
    list_length: tuple = (1, 8)
    n_states: int = 6
    tie_rate: float = 0.0
    female_rate: float = 0.3
    female_pools: bool = True
    category_weights: tuple = (0.5, 0.27, 0.15, 0.08)  # OPEN, OBC-NCL, SC, ST
    pwd_rate: float = 0.05
    adv_rate: float = 0.5  # share with an Advanced rank
    arch_rate: float = 0.2
    restricted_rate: float = 0.08  # category-only remark symbols
    prep_rate: float = 0.03
    ds_rate: float = 0.01
    foreign_rate: float = 0.01
    pc_rate: float = 0.5  # IITs offering preparatory courses
    arch_branch_rate: float = 0.15
    invalid_rate: float = 0.0
    n_programs: Optional[int] = None  # exact number of (institute, branch) pairs; overrides ``branches``


@dataclass
class Instance:
    seat_matrix: list
    foreign_seat_matrix: list
    profiles: dict
    candidates: CandidateTable
    choices: ChoiceTable

    def choice_rows(self) -> dict:
        return self.choices.to_rows(self.candidates)

    def write(self, out_dir: str) -> dict:
        os.makedirs(out_dir, exist_ok=True)
        paths = {name: os.path.join(out_dir, f"{name}.csv")
                 for name in ("seat_matrix", "foreign_seat_matrix", "institutes", "candidates", "choices")}
        write_text(paths["seat_matrix"], emit_seat_matrix(self.seat_matrix))
        write_text(paths["foreign_seat_matrix"], emit_seat_matrix(self.foreign_seat_matrix))
        write_text(paths["institutes"], emit_profiles(self.profiles))
        write_text(paths["candidates"], emit_candidates(self.candidates.to_records()))
        write_text(paths["choices"], emit_choices(self.choice_rows()))
        return paths


def _pick(rng, weights: dict):
    keys = list(weights)
    p = np.array([weights[k] for k in keys], float)
    return keys[int(rng.choice(len(keys), p=p / p.sum()))]


def _split(total: int, rng) -> dict:
    """Spread ``total`` seats over the eight cells roughly like the real reservation."""
    share = {Category.OBC_NCL: 0.27, Category.SC: 0.15, Category.ST: 0.075}
    counts = {c: 0 for c in Category if c != Category.DS}
    rest = total
    for c, s in share.items():
        n = int(rng.binomial(total, s))
        n = min(n, rest)
        counts[c] = n
        rest -= n
    counts[Category.OPEN] = rest
    for c in (Category.OPEN, Category.OBC_NCL, Category.SC, Category.ST):
        pwd = int(rng.binomial(counts[c], 0.05))
        counts[c] -= pwd
        counts[Category.tag(c, True)] = pwd
    return counts


def _matrix(cfg: GenConfig, rng) -> tuple:
    profiles: dict = {}
    rows: list = []
    foreign: list = []
    states = _STATES[:max(cfg.n_states, 1)]
    letter = {InstituteKind.IIT: "I", InstituteKind.NIT: "N", InstituteKind.GFTI_AI: "G",
              InstituteKind.GFTI_HS_OS: "H", InstituteKind.GFTI_HS_AI: "A"}
    n_inst = cfg.n_institutes if cfg.n_programs is None else max(1, min(cfg.n_institutes, cfg.n_programs))
    for i in range(n_inst):
        kind = _pick(rng, cfg.kind_weights)
        code = letter[kind] + f"{i:02d}" if i < 100 else letter[kind] + _STATES[i % 676]
        if cfg.n_programs is None:
            n_br = int(rng.integers(cfg.branches[0], cfg.branches[1] + 1))
        else:
            n_br = cfg.n_programs // n_inst + (i < cfg.n_programs % n_inst)
        branches = [f"B{j:03d}" for j in range(n_br)]
        arch = frozenset(b for b in branches[:1] if rng.random() < cfg.arch_branch_rate)
        home = frozenset() if kind in (InstituteKind.IIT, InstituteKind.GFTI_AI) else frozenset(
            {states[int(rng.integers(len(states)))]})
        profiles[code] = InstituteProfile(
            code, kind, has_pc=kind == InstituteKind.IIT and rng.random() < cfg.pc_rate, home_states=home,
            ds_capacity=2 if kind == InstituteKind.IIT else 0, arch_branches=arch)
        home_q, other_q = profiles[code].quota_plan()
        quotas = list(dict.fromkeys(home_q + other_q))
        st = tuple(sorted(home)) + ("",) * (4 - len(home))
        for br in branches:
            for q in quotas:
                counts = _split(int(rng.integers(cfg.seats[0], cfg.seats[1] + 1)), rng)
                if cfg.female_pools:
                    fem, neu = {}, {}
                    for c, n in counts.items():
                        fem[c], neu[c] = new_program_pools(n)
                    rows.append(SeatMatrixRow(q, code, br, Pool.FEMALE_ONLY, fem, st))
                    rows.append(SeatMatrixRow(q, code, br, Pool.GENDER_NEUTRAL, neu, st))
                else:
                    rows.append(SeatMatrixRow(q, code, br, Pool.GENDER_NEUTRAL, counts, st))
            if kind == InstituteKind.IIT and cfg.foreign_rate > 0:
                n = int(rng.integers(0, 2))
                cells = {c: 0 for c in Category if c != Category.DS}
                cells[Category.OPEN] = n
                foreign.append(SeatMatrixRow(Quota.AI, code, br, Pool.GENDER_NEUTRAL, cells))
    return rows, foreign, profiles


def _ranks_among(score: np.ndarray, members: np.ndarray, tie: np.ndarray) -> np.ndarray:
    """1-based ranks of ``members`` by ``score``; a tie-flagged candidate shares its predecessor's rank."""
    out = np.zeros(len(score), np.int64)
    idx = np.nonzero(members)[0]
    if not len(idx):
        return out
    order = idx[np.argsort(score[idx], kind="stable")]
    r = np.arange(1, len(order) + 1, dtype=np.int64)
    t = tie[order].copy()
    t[0] = False
    # each tied entry takes the rank of the nearest untied entry before it
    anchor = np.maximum.accumulate(np.where(~t, np.arange(len(order)), 0))
    out[order] = r[anchor]
    return out * RANK_SCALE


@njit(cache=True)
def _sample_lists(seed, n, lengths, cum, ptr, out):
    np.random.seed(seed)
    total = cum[-1]
    for x in range(n):
        lo = ptr[x]
        k = 0
        tries = 0
        while k < lengths[x] and tries < 50 * lengths[x] + 50:
            tries += 1
            u = np.random.random() * total
            j = np.searchsorted(cum, u, side="right")
            if j >= cum.shape[0]:
                j = cum.shape[0] - 1
            dup = False
            for t in range(lo, lo + k):
                if out[t] == j:
                    dup = True
                    break
            if not dup:
                out[lo + k] = j
                k += 1
        lengths[x] = k


def generate_instance(seed: int, cfg: Optional[GenConfig] = None, **overrides) -> Instance:
    """Build a valid table set; identical seeds give identical tables."""
    cfg = cfg or GenConfig()
    if overrides:
        cfg = GenConfig(**{**cfg.__dict__, **overrides})
    rng = np.random.default_rng(seed)
    rows, foreign_rows, profiles = _matrix(cfg, rng)
    programs = list(dict.fromkeys((r.inst_cd, r.br_cd) for r in rows))
    n = cfg.n_candidates
    states = _STATES[:max(cfg.n_states, 1)]

    base = rng.choice(4, size=n, p=np.asarray(cfg.category_weights) / sum(cfg.category_weights))
    pwd = rng.random(n) < cfg.pwd_rate
    female = rng.random(n) < cfg.female_rate
    foreign = rng.random(n) < cfg.foreign_rate
    base[foreign] = 0
    pwd &= ~foreign
    category = (base + 4 * pwd).astype(np.int8)
    state = np.array(states, dtype="<U2")[rng.integers(len(states), size=n)]
    state[foreign] = ""
    tie = rng.random(n) < cfg.tie_rate

    ranks = np.zeros((n, N_RANK_LISTS), np.int64)
    remark = np.zeros((n, 3), np.int8)
    families = [(0, np.ones(n, bool) & ~foreign), (1, (rng.random(n) < cfg.arch_rate) & ~foreign),
                (2, (rng.random(n) < cfg.adv_rate) | foreign)]
    prep = np.zeros(n, bool)
    for fam, takes in families:
        score = rng.random(n)
        restricted = takes & (base > 0) & (rng.random(n) < cfg.restricted_rate) & ~foreign
        full = takes & ~restricted
        if fam == 2:
            prep = takes & ~foreign & ((base >= 2) | pwd) & (rng.random(n) < cfg.prep_rate)
            full &= ~prep
            restricted &= ~prep
        sym = np.zeros(n, np.int8)
        sym[full] = SYMBOL_CODE["*"]
        sym[restricted & (base == 1) & ~pwd] = SYMBOL_CODE["="]
        sym[restricted & (base >= 2)] = SYMBOL_CODE["+"]
        sym[restricted & (base == 1) & pwd] = SYMBOL_CODE["$"]
        sym[takes & ~full & ~restricted & ~prep] = SYMBOL_CODE["N"]
        if fam == 2:
            sym[prep] = SYMBOL_CODE["P"]
        remark[:, fam] = sym
        ranked = takes & ~prep
        col = fam * 8
        ranks[:, col] = _ranks_among(score, ranked & ~restricted, tie)
        for b in range(1, 4):
            ranks[:, col + b] = _ranks_among(score, ranked & ~foreign & (base == b), tie)
        ranks[:, col + 4] = _ranks_among(score, ranked & ~restricted & pwd, tie)
        for b in range(1, 4):
            ranks[:, col + 4 + b] = _ranks_among(score, ranked & pwd & (base == b), tie)
        if fam == 2:
            pc = [(RankList.PC_SC, prep & (base == 2) & ~pwd), (RankList.PC_ST, prep & (base == 3) & ~pwd),
                  (RankList.PC_CRL_PD, prep & pwd)]
            pc += [(RankList(RankList.PC_CRL_PD + b), prep & pwd & (base == b)) for b in range(1, 4)]
            for rl, members in pc:
                ranks[:, int(rl)] = _ranks_among(score, members, tie)
    # prep candidates keep only PC ranks in the Advanced family
    ranks[prep, 16:24] = 0
    prep &= ranks[:, 24:30].any(axis=1)
    remark[(remark[:, 2] == SYMBOL_CODE["P"]) & ~prep, 2] = SYMBOL_CODE["N"]
    ds = (rng.random(n) < cfg.ds_rate) & (remark[:, 2] == SYMBOL_CODE["*"]) & (ranks[:, 16] > 0) & ~foreign
    aat = (ranks[:, 16] > 0) & (rng.random(n) < 0.3)

    # popularity-weighted choice lists
    pop = rng.pareto(1.5, size=len(programs)) + 0.2
    cum = np.cumsum(pop)
    lengths = rng.integers(cfg.list_length[0], cfg.list_length[1] + 1, size=n).astype(np.int64)
    lengths = np.minimum(lengths, len(programs))
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(lengths, out=ptr[1:])
    out = np.full(int(ptr[-1]), -1, np.int32)
    _sample_lists(int(rng.integers(2**31 - 1)), n, lengths, cum, ptr, out)
    keep = out >= 0
    cs = np.zeros(len(out) + 1, np.int64)
    np.cumsum(keep, out=cs[1:])
    ptr = cs[ptr]
    prog = out[keep]
    opt = (np.arange(len(prog)) - np.repeat(ptr[:-1], np.diff(ptr)) + 1).astype(np.int16)
    valid = rng.random(len(prog)) >= cfg.invalid_rate

    width = max(len(str(n)), 6)
    rolls = np.array([f"R{i:0{width}d}" for i in range(n)]) if n else np.zeros(0, "<U8")
    cands = CandidateTable(rolls=rolls, category=category, female=female, foreign=foreign, state=state, ds=ds,
                           prep=prep, aat=aat, remark=remark, ranks=ranks)
    choices = ChoiceTable(ptr, prog, opt, valid, programs)
    return Instance(rows, foreign_rows, profiles, cands, choices)


def small_market(rng, n_candidates: int, n_programs: int, ties: bool = False, min_cutoffs: bool = False,
                 max_capacity: int = 2, max_list: Optional[int] = None) -> tuple:
    """A bare DA instance: (preferences, capacities, rank key per pair, min-cutoffs)."""
    cands = [f"c{i:02d}" for i in range(n_candidates)]
    progs = [f"p{j}" for j in range(n_programs)]
    caps = {p: int(rng.integers(0, max_capacity + 1)) for p in progs}
    prefs = {}
    for c in cands:
        k = int(rng.integers(0, (max_list or n_programs) + 1))
        prefs[c] = [progs[j] for j in rng.permutation(n_programs)[:k]]
    ranks = {}
    for p in progs:
        if ties:
            keys = rng.integers(1, max(2, n_candidates // 2) + 1, size=n_candidates)
        else:
            keys = rng.permutation(n_candidates) + 1
        for c, k in zip(cands, keys):
            ranks[(c, p)] = int(k) if rng.random() > 0.1 else None
    mc = {}
    if min_cutoffs:
        for p in progs:
            if rng.random() < 0.5:
                mc[p] = int(rng.integers(1, n_candidates + 1))
    return prefs, caps, ranks, mc


# ---------------------------------------------------------------- reporting between rounds

@dataclass
class ReportingConfig:
    decisions: dict = field(default_factory=lambda: {
        Decision.FREEZE: 0.3, Decision.FLOAT: 0.35, Decision.SLIDE: 0.25, Decision.REJECT: 0.1})
    no_show: float = 0.05
    cancelled: float = 0.03  # RC: seat lost at verification, candidate stays
    withdraw: float = 0.03
    churn: float = 0.08  # share of candidates whose credentials are revised


def _demoted(c) -> Optional[Category]:
    """Category after a revision that removes a reservation claim, or None if there is none to remove."""
    if c.category.base != Category.OPEN:
        return Category.tag(Category.OPEN, c.is_pwd)
    if c.is_pwd:
        return Category.OPEN
    return None


def simulate_reporting(rng, records: list, allotment: list, cfg: Optional[ReportingConfig] = None) -> tuple:
    """Random reporting outcomes for one round.

    Returns (revised candidate records, allotment rows carrying Withdraw and
    RStatus).  Revised credentials use CatChange 1 or 4 for seated
    candidates (seat cancelled) and 3 otherwise.
    """
    cfg = cfg or ReportingConfig()
    held = {r.roll_no: r for r in allotment}
    names, weights = list(cfg.decisions), np.array(list(cfg.decisions.values()), float)
    weights /= weights.sum()
    out_records, out_rows = [], []
    for c in records:
        row = held.get(c.roll_no)
        decision = None
        if row is not None:
            decision = names[int(rng.choice(len(names), p=weights))]
            u = rng.random()
            status, withdraw = RStatus.RP, None
            if u < cfg.no_show:
                status = RStatus.NR
            elif u < cfg.no_show + cfg.cancelled:
                status = RStatus.RC
            elif decision != Decision.REJECT and rng.random() < cfg.withdraw:
                withdraw = "Y"
            out_rows.append(replace(row, withdraw=withdraw, rstatus=status))
        cat, change = c.category, 2
        if rng.random() < cfg.churn and _demoted(c) is not None:
            cat = _demoted(c)
            change = int(rng.choice([1, 4, 3])) if row is not None else 3
        out_records.append(replace(c, category=cat, cat_change=change, decision=decision))
    return out_records, out_rows


# ---------------------------------------------------------------- separate allocation

@dataclass
class CounterfactualMetrics:
    iit_vacancies_saved: int  # candidates who would hold an IIT and a non-IIT seat at once
    candidates_benefited: int  # candidates strictly better off under the joint allocation
    joint: dict  # roll -> OptNo or None
    separate: dict  # roll -> best OptNo over the two seats, or None


def _subset(pref, keep: np.ndarray):
    cs = np.zeros(len(keep) + 1, np.int64)
    np.cumsum(keep, out=cs[1:])
    return replace(pref, ptr=cs[pref.ptr], vid=pref.vid[keep], key=pref.key[keep], choice=pref.choice[keep])


def _allocate(pref, inp) -> np.ndarray:
    """Full round allocation over ``pref``; OptNo per candidate (0 = unseated)."""
    engine = DaEngine(pref, inp.programs.init_cap, inp.mc_keys)
    indian, overseas = split_queue(pref, inp.candidates.foreign)
    multi_run(engine, inp.programs, indian)
    foreign_pass(engine, inp.programs.open_gn, overseas)
    entry = engine.assigned_entries()
    opt = np.zeros(len(entry), np.int64)
    seated = entry >= 0
    opt[seated] = inp.choices.opt[pref.choice[entry[seated]]]
    return opt


def counterfactual_separate(inp) -> CounterfactualMetrics:
    """Compare the joint round with IIT and non-IIT seats allocated one after the other."""
    progs = inp.programs
    pref = compile_preferences(inp.candidates, inp.choices, progs)
    iit_inst = np.array([progs.profiles[pid.institute].kind == InstituteKind.IIT for pid in progs.ids], bool)
    entry_iit = iit_inst[pref.vid] if len(pref.vid) else np.zeros(0, bool)
    iit_opt = _allocate(_subset(pref, entry_iit), inp)

    owner = np.repeat(np.arange(len(pref.ptr) - 1), np.diff(pref.ptr))
    entry_opt = inp.choices.opt[pref.choice].astype(np.int64)
    bound = np.where(iit_opt > 0, iit_opt, np.iinfo(np.int64).max)
    other_opt = _allocate(_subset(pref, ~entry_iit & (entry_opt < bound[owner])), inp)

    res = allocate_round(inp)
    seated = res.entry >= 0
    joint_opt = np.zeros(len(seated), np.int64)
    joint_opt[seated] = inp.choices.opt[pref.choice[res.entry[seated]]]

    big = np.iinfo(np.int64).max
    sep = np.minimum(np.where(iit_opt > 0, iit_opt, big), np.where(other_opt > 0, other_opt, big))
    jnt = np.where(joint_opt > 0, joint_opt, big)
    rolls = [str(r) for r in inp.candidates.rolls]
    return CounterfactualMetrics(
        iit_vacancies_saved=int(((iit_opt > 0) & (other_opt > 0)).sum()),
        candidates_benefited=int((jnt < sep).sum()),
        joint={r: (int(o) if o else None) for r, o in zip(rolls, joint_opt)},
        separate={r: (int(o) if o < big else None) for r, o in zip(rolls, sep)})
