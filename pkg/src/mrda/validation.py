"""Independent checks of one round's output, plus small-instance oracles.

Nothing here reuses the allocation kernels: preference lists are rebuilt
with the reference expansion and every property is checked from the
allotment and statistics tables alone.
"""

from __future__ import annotations

import copy
import itertools
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import InstanceTooLarge
from .model import (BIRTH_CODES, AllotmentRow, Category, Decision, Flag, Pool, ProgramStats, Quota, Rank,
                    SupReason, VirtualProgramId)
from .rounds import RoundInput, leaves_process, seat_cancelled
from .tables_io import Finding
from .virtualization import DERESERVATION_EDGES, InstituteKind, expand_preferences, quotas_for

CHECKS = ("FAIRNESS", "QUOTA", "CATEGORY", "WILLINGNESS", "MIN_CUTOFF", "NONFEMALE", "NONFEMALE_VACANCY",
          "FEMALE", "DERESERVATION", "SUPERNUMERARY")

_WITHIN = {"normal": SupReason.NA, "ds": SupReason.DS, "foreign": SupReason.FR}
_OVER_MC = {"normal": SupReason.MC, "ds": SupReason.DM, "foreign": SupReason.FM}
_OVER_EQ = {"normal": SupReason.EQ, "ds": SupReason.DE, "foreign": SupReason.FE}


def _kind(pid: VirtualProgramId) -> str:
    return "ds" if pid.is_ds else "foreign" if pid.foreign_pool else "normal"


@dataclass
class _Ctx:
    inp: RoundInput
    records: dict
    choices: dict
    prefs: dict
    rows: dict
    members: dict
    stats: dict
    idx: dict
    findings: list = field(default_factory=list)

    def add(self, check: str, subject, detail: str) -> None:
        self.findings.append(Finding(check, str(subject), detail))

    def cap(self, pid) -> int:
        s = self.stats.get(pid)
        if s is not None:
            return s.new_cap
        vid = self.inp.programs.index.get(pid)
        return int(self.inp.programs.init_cap[vid]) if vid is not None else 0

    def mc(self, pid) -> int:
        r = self.inp.min_cutoff.get(pid)
        return r.key if r is not None else 0

    def count(self, pid) -> int:
        return len(self.members.get(pid, ()))

    def closing(self, pid) -> int:
        m = self.members.get(pid)
        return max(k for k, _ in m) if m else -1

    def rejected(self, roll: str):
        """Preference entries strictly above the candidate's allotment."""
        lst = self.prefs.get(roll, [])
        return lst[:self.idx.get(roll, len(lst))]


def _build(inp: RoundInput, allotment: Iterable[AllotmentRow], stats: Iterable[ProgramStats]) -> _Ctx:
    records = inp.records
    choices = inp.choices.to_rows(inp.candidates)
    prefs = {roll: expand_preferences(c, choices.get(roll, []), inp.programs) for roll, c in records.items()}
    ctx = _Ctx(inp, records, choices, prefs, {}, defaultdict(list), {}, {})
    for s in stats:
        pid = s.program_id()
        if pid in ctx.stats:
            ctx.add("SUPERNUMERARY", pid, "duplicate statistics row")
        ctx.stats[pid] = s
    for row in allotment:
        if row.roll_no not in records:
            ctx.add("CATEGORY", row.roll_no, "allotted candidate is not in the candidate table")
            continue
        ctx.rows[row.roll_no] = row
        pid = row.program_id()
        ctx.members[pid].append((row.rank.key, row.roll_no))
        lst = prefs[row.roll_no]
        at = next((i for i, vp in enumerate(lst) if vp.program == pid), None)
        if at is not None:
            ctx.idx[row.roll_no] = at
    return ctx


def _legit_reject(ctx: _Ctx, pid: VirtualProgramId, key: int) -> bool:
    if ctx.cap(pid) <= 0:
        return True
    if ctx.count(pid) >= ctx.cap(pid) and key > ctx.closing(pid):
        return True
    if pid.foreign_pool:
        g = VirtualProgramId(pid.quota, pid.institute, pid.branch, Category.OPEN)
        if ctx.count(g) >= ctx.cap(g) and ctx.count(g) > 0 and key > ctx.closing(g):
            return True
    return False


def _fairness_and_cutoff(ctx: _Ctx) -> None:
    for roll in ctx.records:
        for vp in ctx.rejected(roll):
            key, m = vp.rank.key, ctx.mc(vp.program)
            if m and key <= m:
                ctx.add("MIN_CUTOFF", roll, f"rank {vp.rank} within Min-Cutoff {Rank.from_key(m)} "
                                            f"of {vp.program} but not seated there")
            elif not _legit_reject(ctx, vp.program, key):
                closing = ctx.closing(vp.program)
                ctx.add("FAIRNESS", roll, f"turned away from {vp.program} with rank {vp.rank}; closing "
                                          f"{Rank.from_key(closing) if closing >= 0 else 'none'}, "
                                          f"{ctx.count(vp.program)}/{ctx.cap(vp.program)} filled")


def _quota(ctx: _Ctx) -> None:
    progs = ctx.inp.programs
    for roll, row in ctx.rows.items():
        c = ctx.records[roll]
        if row.flag in (Flag.DS, Flag.FOREIGN):
            if row.allotted_quota != Quota.AI:
                ctx.add("QUOTA", roll, f"{row.flag.name} seat must come from the AI quota")
            continue
        try:
            ap = progs.program(row.inst_cd, row.br_cd)
        except Exception:
            continue  # reported by the category check
        allowed = quotas_for(ap, c.state_code)
        if row.allotted_quota not in allowed:
            ctx.add("QUOTA", roll, f"quota {row.allotted_quota.value} at {row.inst_cd}/{row.br_cd} but "
                                   f"state {c.state_code or '-'} admits only {[q.value for q in allowed]}")


def _expected_flag(pid: VirtualProgramId, rank: Rank) -> Flag:
    if pid.is_ds:
        return Flag.DS
    if pid.foreign_pool:
        return Flag.FOREIGN
    return Flag.PREP if rank.is_pc else Flag.NORMAL


def _category(ctx: _Ctx) -> None:
    progs = ctx.inp.programs
    for roll, row in ctx.rows.items():
        c = ctx.records[roll]
        if row.birth_cat != BIRTH_CODES[c.category.base]:
            ctx.add("CATEGORY", roll, f"Birth_Cat {row.birth_cat} but candidate is {c.category.base.name}")
        try:
            pid = row.program_id()
        except ValueError as exc:
            ctx.add("CATEGORY", roll, f"unusable program columns: {exc}")
            continue
        if pid not in progs.index:
            ctx.add("CATEGORY", roll, f"{pid} does not exist")
            continue
        rank = progs.rank_of(c, pid)
        if rank is None:
            ctx.add("CATEGORY", roll, f"not eligible for {pid}")
            continue
        if rank != row.rank:
            ctx.add("CATEGORY", roll, f"rank {row.rank.display()} recorded, merit list gives {rank.display()}")
        if row.flag != _expected_flag(pid, rank):
            ctx.add("CATEGORY", roll, f"flag {row.flag.value}, expected {_expected_flag(pid, rank).value}")
        at = ctx.idx.get(roll)
        if at is None:
            ctx.add("CATEGORY", roll, f"{pid} is not on the virtual preference list")
            continue
        vp = ctx.prefs[roll][at]
        if vp.opt_no != row.opt_no:
            ctx.add("CATEGORY", roll, f"Optno {row.opt_no}, preference list gives {vp.opt_no}")
        chosen = next((ch for ch in ctx.choices.get(roll, []) if ch.opt_no == row.opt_no), None)
        if chosen is None or (chosen.inst_cd, chosen.br_cd) != (row.inst_cd, row.br_cd):
            ctx.add("CATEGORY", roll, f"Optno {row.opt_no} does not name {row.inst_cd}/{row.br_cd}")


def _willingness(ctx: _Ctx) -> None:
    for prev in ctx.inp.prev_allotment or ():
        c = ctx.records.get(prev.roll_no)
        cur = ctx.rows.get(prev.roll_no)
        if leaves_process(prev, c):
            if cur is not None:
                ctx.add("WILLINGNESS", prev.roll_no, "left the process but holds a seat")
            continue
        if seat_cancelled(prev, c) or cur is None or c is None:
            continue
        if c.decision == Decision.FREEZE and cur.opt_no < prev.opt_no:
            ctx.add("WILLINGNESS", prev.roll_no, f"froze option {prev.opt_no} but moved up to {cur.opt_no}")
        if (c.decision == Decision.SLIDE and cur.opt_no < prev.opt_no and cur.inst_cd != prev.inst_cd):
            ctx.add("WILLINGNESS", prev.roll_no, f"slid at {prev.inst_cd} but moved to {cur.inst_cd}")


def _gender(ctx: _Ctx) -> None:
    for pid in ctx.inp.programs.ids:
        if _kind(pid) != "normal" or pid.pool != Pool.GENDER_NEUTRAL:
            continue
        fid = replace(pid, pool=Pool.FEMALE_ONLY)
        gn = ctx.members.get(pid, [])
        fem = ctx.members.get(fid, [])
        female_in_gn = [k for k, r in gn if ctx.records[r].is_female]
        nonfemale = [k for k, r in gn if not ctx.records[r].is_female]
        cap = ctx.cap(pid)
        if len(nonfemale) < cap and len(gn) >= cap and not female_in_gn:
            ctx.add("NONFEMALE_VACANCY", pid, "gender-neutral pool is short of non-females with no vacancy "
                                             "and no female")
        denied = []  # (key, roll, female?) turned away by the neutral pool
        for roll, lst in ctx.prefs.items():
            at = ctx.idx.get(roll, len(lst))
            for vp in lst[:at]:
                if vp.program == pid:
                    denied.append((vp.rank.key, roll, ctx.records[roll].is_female))
        admitted = [k for k, _ in gn] + [k for k, _ in fem]
        if denied and admitted and max(admitted) >= min(k for k, _, _ in denied) and len(nonfemale) < cap:
            ctx.add("NONFEMALE", pid, "seats not given on merit and neutral seats not all with non-females")
        if nonfemale:
            worst_male = max(nonfemale)
            for k, roll, is_f in denied:
                if is_f and k <= worst_male:
                    ctx.add("FEMALE", roll, f"denied {pid} while a non-female with rank "
                                            f"{Rank.from_key(worst_male)} holds a seat")


def _dereservation(ctx: _Ctx) -> None:
    progs = ctx.inp.programs
    families: dict = defaultdict(list)
    for pid, s in ctx.stats.items():
        vid = progs.index.get(pid)
        if vid is None:
            ctx.add("DERESERVATION", pid, "statistics for an unknown program")
            continue
        if s.init_cap != int(progs.init_cap[vid]):
            ctx.add("DERESERVATION", pid, f"InitCap {s.init_cap}, seat matrix says {int(progs.init_cap[vid])}")
        if s.new_cap != s.init_cap + s.dereserve_to - s.dereserve_from:
            ctx.add("DERESERVATION", pid, f"NewCap {s.new_cap} != {s.init_cap} + {s.dereserve_to} - "
                                          f"{s.dereserve_from}")
        reservable = _kind(pid) == "normal" and pid.category in DERESERVATION_EDGES
        if s.dereserve_from and not reservable:
            ctx.add("DERESERVATION", pid, "seats moved out of a category that never de-reserves")
        if s.dereserve_from and (s.supernum or ctx.count(pid) > s.new_cap):
            ctx.add("DERESERVATION", pid, "gave seats away yet holds supernumerary admits")
        if reservable and ctx.count(pid) < s.new_cap:
            ctx.add("DERESERVATION", pid, f"{s.new_cap - ctx.count(pid)} reserved seats left unfilled")
        if _kind(pid) == "normal":
            families[(pid.quota, pid.institute, pid.branch, pid.pool)].append((pid, s))
        elif s.dereserve_from or s.dereserve_to:
            ctx.add("DERESERVATION", pid, "DS and foreign seats never move")
    for items in families.values():
        if sum(s.init_cap for _, s in items) != sum(s.new_cap for _, s in items):
            ctx.add("DERESERVATION", items[0][0], "seats not conserved across the categories of a program")
        got = {pid.category: (pid, s) for pid, s in items}
        for parent, (pid, s) in got.items():
            inflow = sum(got[ch][1].dereserve_from for ch, par in DERESERVATION_EDGES.items()
                         if par == parent and ch in got)
            if s.dereserve_to != inflow:
                ctx.add("DERESERVATION", pid, f"DeReserveTo {s.dereserve_to} but children released {inflow}")
    for roll in ctx.records:
        for vp in ctx.rejected(roll):
            s = ctx.stats.get(vp.program)
            if s is not None and s.dereserve_from and not (ctx.mc(vp.program) and vp.rank.key <= ctx.mc(vp.program)):
                ctx.add("DERESERVATION", roll, f"eligible applicant turned away by {vp.program}, "
                                               "which gave seats away")


def _supernumerary(ctx: _Ctx) -> None:
    for pid, admits in ctx.members.items():
        if pid not in ctx.stats:
            ctx.add("SUPERNUMERARY", pid, "admits to a program without a statistics row")
    for pid, s in ctx.stats.items():
        admits = ctx.members.get(pid, [])
        kind = _kind(pid)
        keys = [k for k, _ in admits]
        if s.total_allotted != len(admits):
            ctx.add("SUPERNUMERARY", pid, f"TotalAllotted {s.total_allotted}, allotment has {len(admits)}")
        if s.supernum != max(s.total_allotted - s.new_cap, 0):
            ctx.add("SUPERNUMERARY", pid, f"SuperNum {s.supernum} inconsistent with total and capacity")
        opening = Rank.from_key(min(keys)) if keys else None
        closing = Rank.from_key(max(keys)) if keys else None
        if (s.opening_rank, s.closing_rank) != (opening, closing):
            ctx.add("SUPERNUMERARY", pid, "opening/closing ranks disagree with the allotment")
        if s.min_cutoff.key != ctx.mc(pid):
            ctx.add("SUPERNUMERARY", pid, "MinCutOff differs from the round input")
        extra = 0
        m = ctx.mc(pid)
        for k, roll in admits:
            reason = ctx.rows[roll].supnum_reason
            if reason == _WITHIN[kind]:
                continue
            extra += 1
            if reason == _OVER_MC[kind]:
                if not (m and k <= m):
                    ctx.add("SUPERNUMERARY", roll, f"{reason.value} without a Min-Cutoff claim at {pid}")
            elif reason == _OVER_EQ[kind]:
                if keys.count(k) < 2:
                    ctx.add("SUPERNUMERARY", roll, f"{reason.value} but nobody else holds rank {Rank.from_key(k)}")
            else:
                ctx.add("SUPERNUMERARY", roll, f"reason {reason.value} is not legal at {pid}")
        if extra != max(len(admits) - s.new_cap, 0):
            ctx.add("SUPERNUMERARY", pid, f"{extra} admits marked supernumerary, "
                                          f"{max(len(admits) - s.new_cap, 0)} over capacity")


def validate_all(inp: RoundInput, allotment: Iterable[AllotmentRow], stats: Iterable[ProgramStats]) -> list:
    """Every check over one round; returns findings (empty when the output is sound)."""
    ctx = _build(inp, list(allotment), list(stats))
    _fairness_and_cutoff(ctx)
    _quota(ctx)
    _category(ctx)
    _willingness(ctx)
    _gender(ctx)
    _dereservation(ctx)
    _supernumerary(ctx)
    return ctx.findings


# ---------------------------------------------------------------- comparison

@dataclass
class Comparison:
    diffs: list  # (roll, row in a or None, row in b or None)
    label_diffs: list  # same seat, different supernumerary reason

    def __bool__(self) -> bool:
        return bool(self.diffs)


def _seat(row: AllotmentRow) -> tuple:
    return (row.inst_cd, row.br_cd, row.allotted_quota, row.allotted_cat, row.gender_pool, row.flag)


def compare_allotments(a: Iterable[AllotmentRow], b: Iterable[AllotmentRow]) -> Comparison:
    ra = {r.roll_no: r for r in a}
    rb = {r.roll_no: r for r in b}
    diffs, labels = [], []
    for roll in sorted(ra.keys() | rb.keys()):
        x, y = ra.get(roll), rb.get(roll)
        if x is None or y is None or _seat(x) != _seat(y):
            diffs.append((roll, x, y))
        elif x.supnum_reason != y.supnum_reason:
            labels.append((roll, x, y))
    return Comparison(diffs, labels)


# ---------------------------------------------------------------- small-instance oracles

def reference_da(preferences: dict, capacities: dict, ranks: dict, min_cutoffs: Optional[dict] = None,
                 order: Optional[list] = None) -> dict:
    """Textbook DA on plain dicts; ``ranks[(c, p)]`` is an int or None.  Ties keep or drop a whole block."""
    mc = min_cutoffs or {}
    pos = {c: 0 for c in preferences}
    held = {p: [] for p in capacities}
    queue = list(order if order is not None else sorted(preferences))
    queue = [c for c in queue if preferences[c]]
    while queue:
        c = queue.pop(0)
        p = preferences[c][pos[c]]
        k = ranks.get((c, p))
        cut = mc.get(p) or 0
        ok = k is not None and (capacities[p] > 0 or k <= cut)
        rejected = [] if ok else [c]
        if ok:
            held[p].append((k, c))
            held[p].sort()
            worst = held[p][-1][0]
            if len(held[p]) > capacities[p] and worst > cut:
                tied = [e for e in held[p] if e[0] == worst]
                if len(held[p]) - len(tied) >= capacities[p]:
                    held[p] = held[p][:-len(tied)]
                    rejected = [x for _, x in tied]
        for x in rejected:
            pos[x] += 1
            if pos[x] < len(preferences[x]):
                queue.append(x)
    out = {c: None for c in preferences}
    for p, lst in held.items():
        for _, c in lst:
            out[c] = p
    return out


def _prefers(prefs: list, p, q) -> bool:
    """True when ``p`` is strictly better than ``q`` (None = unmatched) on the list."""
    if p not in prefs:
        return False
    return q is None or prefs.index(p) < prefs.index(q)


def is_stable(assignment: dict, preferences: dict, capacities: dict, ranks: dict) -> bool:
    held = defaultdict(list)
    for c, p in assignment.items():
        if p is not None:
            if p not in preferences[c] or ranks.get((c, p)) is None:
                return False
            held[p].append(ranks[(c, p)])
    if any(len(v) > capacities[p] for p, v in held.items()):
        return False
    for c, prefs in preferences.items():
        for p in prefs:
            if p == assignment[c]:
                break
            k = ranks.get((c, p))
            if k is None or capacities[p] == 0:
                continue
            if len(held[p]) < capacities[p] or max(held[p]) > k:
                return False
    return True


def oracle_stable_match(preferences: dict, capacities: dict, ranks: dict,
                        max_candidates: int = 12, max_programs: int = 6) -> dict:
    """Candidate-optimal stable matching by exhaustive search (strict ranks only)."""
    cands = sorted(preferences)
    if len(cands) > max_candidates or len(capacities) > max_programs:
        raise InstanceTooLarge(f"{len(cands)} candidates x {len(capacities)} programs")
    for p in capacities:
        seen = [ranks.get((c, p)) for c in cands if ranks.get((c, p)) is not None]
        if len(seen) != len(set(seen)):
            raise ValueError("the oracle needs strict merit lists")
    options = {c: [p for p in preferences[c] if ranks.get((c, p)) is not None and capacities[p] > 0] + [None]
               for c in cands}
    best: dict = {}
    assign: dict = {}
    load = defaultdict(list)

    def envy_free(c, p) -> bool:
        # nobody already placed may be displaced by c, and c may not envy anyone placed
        k = ranks.get((c, p)) if p is not None else None
        if p is not None:
            for d in assign:
                q = assign[d]
                kd = ranks.get((d, p))
                if kd is not None and kd < k and _prefers(preferences[d], p, q):
                    return False
        for q in preferences[c]:
            if q == p:
                break
            kq = ranks.get((c, q))
            if kq is None or capacities[q] == 0:
                continue
            if any(kk > kq for kk in load[q]):
                return False
        return True

    def walk(i: int) -> None:
        if i == len(cands):
            if is_stable(assign, preferences, capacities, ranks):
                for c, p in assign.items():
                    if c not in best or _prefers(preferences[c], p, best[c]):
                        best[c] = p
            return
        c = cands[i]
        for p in options[c]:
            if p is not None and len(load[p]) >= capacities[p]:
                continue
            if not envy_free(c, p):
                continue
            assign[c] = p
            if p is not None:
                load[p].append(ranks[(c, p)])
            walk(i + 1)
            if p is not None:
                load[p].remove(ranks[(c, p)])
            del assign[c]

    walk(0)
    if not is_stable(best, preferences, capacities, ranks):
        raise AssertionError("pointwise best outcomes do not form a stable matching")
    return best


# ---------------------------------------------------------------- mutation battery

Mutation = Callable[[RoundInput, list, list, np.random.Generator], Optional[tuple]]


def _mut_rank_swap(inp, rows, stats, rng):
    ctx = _build(inp, rows, stats)
    for roll in sorted(ctx.records):
        for vp in ctx.rejected(roll):
            better = [r for k, r in ctx.members.get(vp.program, []) if k < vp.rank.key]
            if not better:
                continue
            holder = better[0]
            out = [copy.copy(r) for r in rows]
            by = {r.roll_no: r for r in out}
            a = by[holder]
            mine = by.get(roll)
            seat_a = (a.opt_no, a.inst_cd, a.br_cd, a.allotted_cat, a.allotted_quota, a.gender_pool, a.flag)
            # the worse-ranked candidate takes the better one's seat
            if mine is None:
                mine = copy.copy(a)
                mine.roll_no = roll
                out.remove(a)
                out.append(mine)
            else:
                seat_m = (mine.opt_no, mine.inst_cd, mine.br_cd, mine.allotted_cat, mine.allotted_quota,
                          mine.gender_pool, mine.flag)
                (a.opt_no, a.inst_cd, a.br_cd, a.allotted_cat, a.allotted_quota, a.gender_pool, a.flag) = seat_m
            (mine.opt_no, mine.inst_cd, mine.br_cd, mine.allotted_cat, mine.allotted_quota, mine.gender_pool,
             mine.flag) = seat_a
            mine.rank = vp.rank
            return out, stats
    return None


def _mut_capacity(inp, rows, stats, rng):
    if not stats:
        return None
    out = [copy.copy(s) for s in stats]
    i = int(rng.integers(len(out)))
    out[i].new_cap += 1
    return rows, out


def _mut_pool_swap(inp, rows, stats, rng):
    recs = inp.records
    for i, r in enumerate(rows):
        if r.gender_pool == Pool.GENDER_NEUTRAL and r.flag in (Flag.NORMAL, Flag.PREP) \
                and not recs[r.roll_no].is_female:
            out = list(rows)
            out[i] = replace(r, gender_pool=Pool.FEMALE_ONLY)
            return out, stats
    return None


def _mut_reason_blank(inp, rows, stats, rng):
    out = list(rows)
    for i, r in enumerate(rows):
        if r.supnum_reason not in (SupReason.NA, SupReason.DS, SupReason.FR):
            out[i] = replace(r, supnum_reason=SupReason.NA)
            return out, stats
    if not rows:
        return None
    r = rows[0]
    over = {Flag.DS: SupReason.DE, Flag.FOREIGN: SupReason.FE}.get(r.flag, SupReason.EQ)
    out[0] = replace(r, supnum_reason=over)
    return out, stats


def _mut_quota_flip(inp, rows, stats, rng):
    flip = {Quota.HS: Quota.OS, Quota.OS: Quota.HS, Quota.AI: Quota.HS}
    for i, r in enumerate(rows):
        if r.flag in (Flag.NORMAL, Flag.PREP):
            kind = inp.programs.profiles[r.inst_cd].kind
            if r.allotted_quota == Quota.AI and kind not in (InstituteKind.IIT, InstituteKind.GFTI_AI):
                continue
            out = list(rows)
            out[i] = replace(r, allotted_quota=flip[r.allotted_quota])
            return out, stats
    return None


def _mut_category_flip(inp, rows, stats, rng):
    recs = inp.records
    for i, r in enumerate(rows):
        if r.flag == Flag.NORMAL and recs[r.roll_no].category == Category.OPEN:
            out = list(rows)
            out[i] = replace(r, allotted_cat=Category.SC.code)
            return out, stats
    return None


def _mut_drop_admit(inp, rows, stats, rng):
    if not rows:
        return None
    i = int(rng.integers(len(rows)))
    return rows[:i] + rows[i + 1:], stats


def _mut_willingness(inp, rows, stats, rng):
    """Hand a seat back to someone who rejected or withdrew."""
    recs = inp.records
    mine = {r.roll_no for r in rows}
    for prev in inp.prev_allotment or ():
        if prev.roll_no in mine or not leaves_process(prev, recs.get(prev.roll_no)):
            continue
        row = replace(prev, round_no=inp.round_no, withdraw=None, rstatus=None)
        return rows + [row], stats
    return None


MUTATIONS: dict = {
    "rank_swap": _mut_rank_swap,
    "capacity_tamper": _mut_capacity,
    "pool_swap": _mut_pool_swap,
    "reason_blank": _mut_reason_blank,
    "quota_flip": _mut_quota_flip,
    "category_flip": _mut_category_flip,
    "drop_admit": _mut_drop_admit,
    "willingness_violation": _mut_willingness,
}
