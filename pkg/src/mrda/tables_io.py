"""CSV readers and writers for the seat-allocation tables.

Files are UTF-8 CSV with a header row, comma delimiter and LF line endings.
Every parser reports the 1-based physical line of an offending row (the
header is line 1).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional

from .errors import (DuplicateKey, DuplicateRoll, InconsistentTables, MalformedRow, TotalMismatch,
                     UnknownRemarkSymbol)
from .model import (BIRTH_CODES, AllotmentRow, BIRTH_FROM_CODE, FAMILY_SYMBOLS, CandidateInfo, CandidateRecord, Category,
                    Decision, Family, Flag, Gender, Nationality, Pool, ProgramStats, Quota, Rank, RankList,
                    RStatus, SupReason, VirtualProgramId, format_scaled, parse_rank_text)

SEAT_COUNT_COLUMNS = ["OP", "OP_PwD", "SC", "SC_PwD", "ST", "ST_PwD", "OBC_NCL", "OBC_NCL_PwD"]
SEAT_COUNT_CATEGORIES = [Category.OPEN, Category.OPEN_PwD, Category.SC, Category.SC_PwD,
                         Category.ST, Category.ST_PwD, Category.OBC_NCL, Category.OBC_NCL_PwD]
SEAT_MATRIX_COLUMNS = ["Quota", "InstCd", "BrCd", "GenderPool", *SEAT_COUNT_COLUMNS, "Total",
                       "StCd1", "StCd2", "StCd3", "StCd4"]
CHOICE_COLUMNS = ["RollNo", "OptNo", "Instcd", "BrCd", "Validity"]
ALLOTMENT_COLUMNS = ["RoundNo", "RollNo", "Birth_Cat", "Optno", "InstCd", "BrCd", "Rank", "AllottedCat",
                     "AllottedQuota", "GenderPool", "Flag", "SupNumReason", "Withdraw", "RStatus"]
STATS_COLUMNS = ["Quota", "InstCd", "BrCd", "VCategory", "GenderPool", "OpeningRank", "ClosingRank",
                 "MinCutOff", "TotalAllotted", "InitCap", "NewCap", "DeReserveFrom", "DeReserveTo", "SuperNum"]
MIN_CUTOFF_COLUMNS = ["Quota", "InstCd", "BrCd", "VCategory", "GenderPool", "MinCutOff"]
FINDING_COLUMNS = ["check_id", "subject", "detail"]
PROFILE_COLUMNS = ["InstCd", "Kind", "HasPC", "DSCapacity", "HomeStates", "ArchBranches"]
BASELINE_COLUMNS = ["Quota", "InstCd", "BrCd", "Category", "C", "f", "Target"]

_RANK_SUFFIXES = ["CRL", "OBC_NCL", "SC", "ST", "CRL_PD", "OBC_NCL_PD", "SC_PD", "ST_PD"]
_PC_COLUMNS = ["Adv_Prep_SC_Rank", "Adv_Prep_ST_Rank", "Adv_Prep_CRL_PD_Rank", "Adv_Prep_OBC-NCL_PD_Rank",
               "Adv_Prep_SC_PD_Rank", "Adv_Prep_ST_PD_Rank"]
CANDIDATE_COLUMNS = (
    ["RollNo", "AppNo", "NAME", "MNAME", "FNAME", "GName", "SCode", "Gender", "DOB", "CAT", "PwD", "Nationality"]
    + [f"AI_Eng_{s}_Rank" for s in _RANK_SUFFIXES] + ["Eng_Rem_Symb"]
    + [f"AI_Arc_{s}_Rank" for s in _RANK_SUFFIXES] + ["Arc_Rem_Symb"]
    + ["Adv_RollNo", "Adv_RegNo"] + [f"Adv_{s}_Rank" for s in _RANK_SUFFIXES] + ["Adv_Rem_Symb", "Adv_IsPrep"]
    + _PC_COLUMNS
    + ["Adv_AAT_Status", "Adv_DS", "Adv_colour blind", "Adv_OneEyedVision", "Eng_Top_20", "Arc_Top_20",
       "Adv_Top_20", "Board_Mark_Eng", "Board_Mark_Arc", "Board_Mark_Adv", "Board_RollNo", "Board_Year_Passing",
       "Board_Name", "CatChange", "Decision"]
)
assert len(CANDIDATE_COLUMNS) == 63

_RANK_COLUMNS = (
    [(f"AI_Eng_{s}_Rank", RankList(i)) for i, s in enumerate(_RANK_SUFFIXES)]
    + [(f"AI_Arc_{s}_Rank", RankList(8 + i)) for i, s in enumerate(_RANK_SUFFIXES)]
    + [(f"Adv_{s}_Rank", RankList(16 + i)) for i, s in enumerate(_RANK_SUFFIXES)]
    + [(c, RankList(24 + i)) for i, c in enumerate(_PC_COLUMNS)]
)
_REMARK_COLUMNS = [("Eng_Rem_Symb", Family.ENG), ("Arc_Rem_Symb", Family.ARCH), ("Adv_Rem_Symb", Family.ADV)]
_INFO_COLUMNS = [("app_no", "AppNo"), ("name", "NAME"), ("mother_name", "MNAME"), ("father_name", "FNAME"),
                 ("guardian_name", "GName"), ("dob", "DOB"), ("adv_roll_no", "Adv_RollNo"),
                 ("adv_reg_no", "Adv_RegNo"), ("eng_top_20", "Eng_Top_20"), ("arc_top_20", "Arc_Top_20"),
                 ("adv_top_20", "Adv_Top_20"), ("board_mark_eng", "Board_Mark_Eng"),
                 ("board_mark_arc", "Board_Mark_Arc"), ("board_mark_adv", "Board_Mark_Adv"),
                 ("board_roll_no", "Board_RollNo"), ("board_year", "Board_Year_Passing"),
                 ("board_name", "Board_Name")]


@dataclass
class SeatMatrixRow:
    quota: Quota
    inst_cd: str
    br_cd: str
    gender_pool: Pool
    counts: dict  # Category -> int
    st_codes: tuple = ("", "", "", "")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def home_states(self) -> frozenset:
        return frozenset(s for s in self.st_codes if s)


@dataclass
class ChoiceRow:
    roll_no: str
    opt_no: int
    inst_cd: str
    br_cd: str
    validity: str = ""

    @property
    def valid(self) -> bool:
        return self.validity != "N"


@dataclass
class MinCutoffRow:
    program: VirtualProgramId
    min_cutoff: Rank


@dataclass
class Finding:
    check_id: str
    subject: str
    detail: str


# ---------------------------------------------------------------- helpers

def _open_text(source) -> IO[str]:
    if isinstance(source, str):
        return io.StringIO(source)
    return source


def _rows(source, columns: list, accept_prefix: Optional[int] = None) -> Iterator[tuple]:
    """Yield ``(line_no, dict)`` after checking the header."""
    reader = csv.reader(_open_text(source))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow(1, "missing header row") from None
    expected = columns
    if header != columns:
        if accept_prefix is not None and header == columns[:accept_prefix]:
            expected = header
        else:
            raise MalformedRow(1, f"unexpected header {header!r}")
    for fields in reader:
        line = reader.line_num
        if not fields:
            continue
        if len(fields) != len(expected):
            raise MalformedRow(line, f"expected {len(expected)} fields, found {len(fields)}")
        yield line, dict(zip(expected, fields))


def _emit(columns: list, rows: Iterable[list]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return out.getvalue()


def _int(line: int, text: str, what: str, minimum: int = 0) -> int:
    try:
        v = int(text)
    except ValueError:
        raise MalformedRow(line, f"{what} is not an integer: {text!r}") from None
    if v < minimum:
        raise MalformedRow(line, f"{what} below {minimum}: {v}")
    return v


def _code(line: int, text: str, width: int, what: str, blank_ok: bool = False) -> str:
    if blank_ok and text == "":
        return text
    if len(text) != width:
        raise MalformedRow(line, f"{what} must be {width} characters: {text!r}")
    return text


def _enum(line: int, enum_cls, text: str, what: str):
    try:
        return enum_cls(text)
    except ValueError:
        raise MalformedRow(line, f"bad {what}: {text!r}") from None


def _rank(line: int, text: str, what: str) -> int:
    try:
        v = parse_rank_text(text)
    except ValueError as exc:
        raise MalformedRow(line, f"{what}: {exc}") from None
    if v == 0:
        raise MalformedRow(line, f"{what}: rank 0 is not allowed")
    return v


def _yes_no(line: int, text: str, what: str) -> bool:
    if text in ("", "2"):
        return False
    if text == "1":
        return True
    raise MalformedRow(line, f"{what} must be 1 or 2: {text!r}")


def _min_cutoff_text(rank: Rank) -> str:
    return "0" if rank.key == 0 else rank.display()


def _parse_min_cutoff(line: int, text: str) -> Rank:
    try:
        return Rank.parse_display(text)
    except ValueError as exc:
        raise MalformedRow(line, f"MinCutOff: {exc}") from None


def _program_from_columns(line: int, d: dict) -> VirtualProgramId:
    quota = _enum(line, Quota, d["Quota"], "quota")
    pool = _enum(line, Pool, d["GenderPool"], "gender pool")
    vcat = d["VCategory"]
    try:
        if vcat == "FRNO":
            return VirtualProgramId(quota, d["InstCd"], d["BrCd"], Category.OPEN, pool, True)
        return VirtualProgramId(quota, d["InstCd"], d["BrCd"], Category.from_code(vcat), pool)
    except ValueError as exc:
        raise MalformedRow(line, str(exc)) from None


def _program_columns(p: VirtualProgramId) -> list:
    return [p.quota.value, p.institute, p.branch, p.vcategory, p.pool.value]


# ---------------------------------------------------------------- seat matrix

def parse_seat_matrix(source) -> list:
    rows: list = []
    seen: dict = {}
    for line, d in _rows(source, SEAT_MATRIX_COLUMNS):
        quota = _enum(line, Quota, d["Quota"], "quota")
        inst = _code(line, d["InstCd"], 3, "InstCd")
        br = _code(line, d["BrCd"], 4, "BrCd")
        pool = _enum(line, Pool, d["GenderPool"], "gender pool")
        counts = {cat: _int(line, d[col], col) for col, cat in zip(SEAT_COUNT_COLUMNS, SEAT_COUNT_CATEGORIES)}
        total = _int(line, d["Total"], "Total")
        if total != sum(counts.values()):
            raise TotalMismatch(line, total, sum(counts.values()))
        st = tuple(_code(line, d[f"StCd{i}"], 2, f"StCd{i}", blank_ok=True) for i in range(1, 5))
        key = (quota, inst, br, pool)
        if key in seen:
            raise DuplicateKey(line, key)
        seen[key] = line
        rows.append(SeatMatrixRow(quota, inst, br, pool, counts, st))
    return rows


def emit_seat_matrix(rows: Iterable[SeatMatrixRow]) -> str:
    return _emit(SEAT_MATRIX_COLUMNS, (
        [r.quota.value, r.inst_cd, r.br_cd, r.gender_pool.value,
         *(r.counts.get(cat, 0) for cat in SEAT_COUNT_CATEGORIES), r.total, *r.st_codes]
        for r in rows))


# ---------------------------------------------------------------- candidates

def _parse_candidate(line: int, d: dict) -> CandidateRecord:
    roll = d["RollNo"]
    if not roll:
        raise MalformedRow(line, "blank RollNo")
    gender = _enum(line, Gender, _int(line, d["Gender"], "Gender", 1), "Gender")
    if d["CAT"] not in BIRTH_FROM_CODE:
        raise MalformedRow(line, f"bad CAT {d['CAT']!r}")
    if d["PwD"] not in ("1", "2"):
        raise MalformedRow(line, f"PwD must be 1 or 2: {d['PwD']!r}")
    category = Category.tag(BIRTH_FROM_CODE[d["CAT"]], d["PwD"] == "1")
    nationality = _enum(line, Nationality, _int(line, d["Nationality"], "Nationality", 1), "Nationality")
    ranks = {rl: _rank(line, d[col], col) for col, rl in _RANK_COLUMNS if d[col] != ""}
    remarks = []
    for col, fam in _REMARK_COLUMNS:
        sym = d[col]
        if sym and sym not in FAMILY_SYMBOLS[fam]:
            raise UnknownRemarkSymbol(line, sym)
        remarks.append(sym)
    cat_change = _int(line, d["CatChange"], "CatChange", 1) if d["CatChange"] else 2
    decision = _enum(line, Decision, d["Decision"], "Decision") if d["Decision"] else None
    state = _code(line, d["SCode"], 2, "SCode", blank_ok=True)
    info = CandidateInfo(**{attr: d[col] for attr, col in _INFO_COLUMNS})
    try:
        return CandidateRecord(
            roll_no=roll, category=category, gender=gender, state_code=state, nationality=nationality,
            ds_flag=_yes_no(line, d["Adv_DS"], "Adv_DS"),
            prep_eligible=_yes_no(line, d["Adv_IsPrep"], "Adv_IsPrep"),
            ranks=ranks, remarks=tuple(remarks),
            aat_qualified=_yes_no(line, d["Adv_AAT_Status"], "Adv_AAT_Status"),
            color_blind=_yes_no(line, d["Adv_colour blind"], "Adv_colour blind"),
            one_eyed=_yes_no(line, d["Adv_OneEyedVision"], "Adv_OneEyedVision"),
            cat_change=cat_change, decision=decision, info=info)
    except ValueError as exc:
        raise MalformedRow(line, str(exc)) from None


def parse_candidates(source) -> list:
    out: list = []
    seen: set = set()
    for line, d in _rows(source, CANDIDATE_COLUMNS):
        c = _parse_candidate(line, d)
        if c.roll_no in seen:
            raise DuplicateRoll(line, c.roll_no)
        seen.add(c.roll_no)
        out.append(c)
    return out


def _yn(flag: bool) -> str:
    return "1" if flag else "2"


def candidate_fields(c: CandidateRecord) -> list:
    d = {col: getattr(c.info, attr) for attr, col in _INFO_COLUMNS}
    d.update({
        "RollNo": c.roll_no, "SCode": c.state_code, "Gender": str(int(c.gender)),
        "CAT": BIRTH_CODES[c.category.base], "PwD": _yn(c.is_pwd), "Nationality": str(int(c.nationality)),
        "Adv_IsPrep": _yn(c.prep_eligible), "Adv_AAT_Status": _yn(c.aat_qualified), "Adv_DS": _yn(c.ds_flag),
        "Adv_colour blind": _yn(c.color_blind), "Adv_OneEyedVision": _yn(c.one_eyed),
        "CatChange": str(c.cat_change), "Decision": c.decision.value if c.decision else "",
    })
    for col, rl in _RANK_COLUMNS:
        v = c.ranks.get(rl)
        d[col] = format_scaled(v) if v else ""
    for col, fam in _REMARK_COLUMNS:
        d[col] = c.remarks[int(fam)]
    return [d[col] for col in CANDIDATE_COLUMNS]


def emit_candidates(records: Iterable[CandidateRecord]) -> str:
    return _emit(CANDIDATE_COLUMNS, (candidate_fields(c) for c in records))


# ---------------------------------------------------------------- choices

def parse_choices(source, candidates: Optional[Iterable[CandidateRecord]] = None) -> dict:
    """Map roll number to its ordered choice rows, checking OptNo runs 1..n."""
    known = None if candidates is None else {c.roll_no for c in candidates}
    out: dict = {}
    for line, d in _rows(source, CHOICE_COLUMNS):
        roll = d["RollNo"]
        if known is not None and roll not in known:
            raise InconsistentTables(f"line {line}: choice for unknown roll {roll!r}")
        opt = _int(line, d["OptNo"], "OptNo", 1)
        if d["Validity"] not in ("", "N"):
            raise MalformedRow(line, f"Validity must be blank or N: {d['Validity']!r}")
        lst = out.setdefault(roll, [])
        if opt != len(lst) + 1:
            raise MalformedRow(line, f"OptNo {opt} out of sequence for {roll}")
        lst.append(ChoiceRow(roll, opt, _code(line, d["Instcd"], 3, "Instcd"), _code(line, d["BrCd"], 4, "BrCd"),
                             d["Validity"]))
    return out


def emit_choices(choices: dict) -> str:
    return _emit(CHOICE_COLUMNS, ([r.roll_no, r.opt_no, r.inst_cd, r.br_cd, r.validity]
                                  for rows in choices.values() for r in rows))


# ---------------------------------------------------------------- allotment

def parse_prev_allotment(source) -> list:
    """Parse an allotment table with 12 (engine output) or 14 columns."""
    out: list = []
    seen: set = set()
    for line, d in _rows(source, ALLOTMENT_COLUMNS, accept_prefix=12):
        flag = _enum(line, Flag, d["Flag"], "Flag")
        try:
            value = parse_rank_text(d["Rank"])
        except ValueError as exc:
            raise MalformedRow(line, f"Rank: {exc}") from None
        if value == 0:
            raise MalformedRow(line, "Rank: rank 0 is not allowed")
        if d["Birth_Cat"] not in BIRTH_FROM_CODE:
            raise MalformedRow(line, f"bad Birth_Cat {d['Birth_Cat']!r}")
        try:
            Category.from_code(d["AllottedCat"])
        except ValueError as exc:
            raise MalformedRow(line, str(exc)) from None
        withdraw = d.get("Withdraw") or None
        if withdraw not in (None, "Y", "N"):
            raise MalformedRow(line, f"Withdraw must be Y or N: {withdraw!r}")
        rstatus = d.get("RStatus") or None
        row = AllotmentRow(
            round_no=_int(line, d["RoundNo"], "RoundNo", 1), roll_no=d["RollNo"], birth_cat=d["Birth_Cat"],
            opt_no=_int(line, d["Optno"], "Optno", 1), inst_cd=_code(line, d["InstCd"], 3, "InstCd"),
            br_cd=_code(line, d["BrCd"], 4, "BrCd"), rank=Rank(1 if flag == Flag.PREP else 0, value),
            allotted_cat=d["AllottedCat"], allotted_quota=_enum(line, Quota, d["AllottedQuota"], "quota"),
            gender_pool=_enum(line, Pool, d["GenderPool"], "gender pool"), flag=flag,
            supnum_reason=_enum(line, SupReason, d["SupNumReason"], "SupNumReason"), withdraw=withdraw,
            rstatus=_enum(line, RStatus, rstatus, "RStatus") if rstatus else None)
        if row.roll_no in seen:
            raise DuplicateRoll(line, row.roll_no)
        seen.add(row.roll_no)
        out.append(row)
    return out


def emit_allotment(rows: Iterable, with_reporting: bool = True) -> str:
    """Serialize allotment rows; the two reporting columns are blank when unset."""
    cols = ALLOTMENT_COLUMNS if with_reporting else ALLOTMENT_COLUMNS[:12]

    def fields(r):
        base = [r.round_no, r.roll_no, r.birth_cat, r.opt_no, r.inst_cd, r.br_cd, r.rank.number(),
                r.allotted_cat, r.allotted_quota.value, r.gender_pool.value, r.flag.value, r.supnum_reason.value]
        if with_reporting:
            base += [r.withdraw or "", r.rstatus.value if r.rstatus else ""]
        return base

    return _emit(cols, (fields(r) for r in rows))


# ---------------------------------------------------------------- program statistics

def parse_program_stats(source) -> list:
    out: list = []
    for line, d in _rows(source, STATS_COLUMNS):
        pid = _program_from_columns(line, d)

        def opt_rank(text, what):
            if text == "":
                return None
            try:
                return Rank.parse_display(text)
            except ValueError as exc:
                raise MalformedRow(line, f"{what}: {exc}") from None

        out.append(ProgramStats(
            quota=pid.quota, inst_cd=pid.institute, br_cd=pid.branch, vcategory=d["VCategory"],
            gender_pool=pid.pool, opening_rank=opt_rank(d["OpeningRank"], "OpeningRank"),
            closing_rank=opt_rank(d["ClosingRank"], "ClosingRank"),
            min_cutoff=_parse_min_cutoff(line, d["MinCutOff"]),
            total_allotted=_int(line, d["TotalAllotted"], "TotalAllotted"),
            init_cap=_int(line, d["InitCap"], "InitCap"), new_cap=_int(line, d["NewCap"], "NewCap"),
            dereserve_from=_int(line, d["DeReserveFrom"], "DeReserveFrom"),
            dereserve_to=_int(line, d["DeReserveTo"], "DeReserveTo"),
            supernum=_int(line, d["SuperNum"], "SuperNum")))
    return out


def emit_program_stats(rows: Iterable[ProgramStats]) -> str:
    return _emit(STATS_COLUMNS, (
        [s.quota.value, s.inst_cd, s.br_cd, s.vcategory, s.gender_pool.value,
         s.opening_rank.display() if s.opening_rank else "", s.closing_rank.display() if s.closing_rank else "",
         _min_cutoff_text(s.min_cutoff), s.total_allotted, s.init_cap, s.new_cap, s.dereserve_from,
         s.dereserve_to, s.supernum] for s in rows))


# ---------------------------------------------------------------- min-cutoff

def parse_min_cutoff(source) -> dict:
    out: dict = {}
    for line, d in _rows(source, MIN_CUTOFF_COLUMNS):
        pid = _program_from_columns(line, d)
        if pid in out:
            raise DuplicateKey(line, pid)
        out[pid] = _parse_min_cutoff(line, d["MinCutOff"])
    return out


def emit_min_cutoff(table: dict) -> str:
    return _emit(MIN_CUTOFF_COLUMNS, ([*_program_columns(p), _min_cutoff_text(r)] for p, r in sorted(table.items())))


# ---------------------------------------------------------------- findings and stained programs

def emit_findings(findings: Iterable[Finding]) -> str:
    return _emit(FINDING_COLUMNS, ([f.check_id, f.subject, f.detail] for f in findings))


def parse_findings(source) -> list:
    return [Finding(d["check_id"], d["subject"], d["detail"]) for _, d in _rows(source, FINDING_COLUMNS)]


def emit_programs(programs: Iterable[VirtualProgramId]) -> str:
    return _emit(MIN_CUTOFF_COLUMNS[:5], (_program_columns(p) for p in programs))


# ---------------------------------------------------------------- institute profiles and baselines

def parse_profiles(source) -> dict:
    from .virtualization import InstituteKind, InstituteProfile

    out: dict = {}
    for line, d in _rows(source, PROFILE_COLUMNS):
        inst = _code(line, d["InstCd"], 3, "InstCd")
        if inst in out:
            raise DuplicateKey(line, inst)
        if d["HasPC"] not in ("Y", "N"):
            raise MalformedRow(line, f"HasPC must be Y or N: {d['HasPC']!r}")
        try:
            out[inst] = InstituteProfile(
                inst_cd=inst, kind=_enum(line, InstituteKind, d["Kind"], "Kind"), has_pc=d["HasPC"] == "Y",
                home_states=frozenset(s for s in d["HomeStates"].split(";") if s),
                ds_capacity=_int(line, d["DSCapacity"], "DSCapacity"),
                arch_branches=frozenset(b for b in d["ArchBranches"].split(";") if b))
        except ValueError as exc:
            raise MalformedRow(line, str(exc)) from None
    return out


def emit_profiles(profiles: dict) -> str:
    return _emit(PROFILE_COLUMNS, (
        [p.inst_cd, p.kind.value, "Y" if p.has_pc else "N", p.ds_capacity, ";".join(sorted(p.home_states)),
         ";".join(sorted(p.arch_branches))] for p in profiles.values()))


def parse_baseline(source) -> dict:
    from fractions import Fraction

    from .virtualization import BaselineCell

    out: dict = {}
    for line, d in _rows(source, BASELINE_COLUMNS):
        quota = _enum(line, Quota, d["Quota"], "quota")
        try:
            cat = Category.from_code(d["Category"])
            target = Fraction(d["Target"]) if d["Target"] else Fraction(14, 100)
        except ValueError as exc:
            raise MalformedRow(line, str(exc)) from None
        key = (quota, d["InstCd"], d["BrCd"], cat)
        if key in out:
            raise DuplicateKey(line, key)
        out[key] = BaselineCell(_int(line, d["C"], "C"), _int(line, d["f"], "f"), target)
    return out


def emit_baseline(baseline: dict) -> str:
    return _emit(BASELINE_COLUMNS, (
        [q.value, inst, br, cat.code, b.capacity, b.female_admits, str(b.target)]
        for (q, inst, br, cat), b in baseline.items()))


def read_text(path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
