"""Domain types and rank/eligibility semantics.

Ranks are exact decimals held as integers scaled by ``RANK_SCALE``.  Every
place that orders candidates uses a single int64 *key*::

    key = tier * PC_OFFSET + scaled_value

where tier 0 is the standard merit list and tier 1 the preparatory-course
list appended after it.  ``NO_RANK`` (-1) marks ineligibility and a key of 0
is the "no Min-Cutoff" sentinel.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Mapping, Optional

RANK_SCALE = 10_000
PC_OFFSET = 1 << 50
NO_RANK = -1
NO_CUTOFF = 0


class Category(enum.IntEnum):
    """Seat category cell; the first eight are candidate tags, DS is program-only."""

    OPEN = 0
    OBC_NCL = 1
    SC = 2
    ST = 3
    OPEN_PwD = 4
    OBC_NCL_PwD = 5
    SC_PwD = 6
    ST_PwD = 7
    DS = 8

    @property
    def is_pwd(self) -> bool:
        return 4 <= self <= 7

    @property
    def base(self) -> "Category":
        return Category(self % 4) if self != Category.DS else self

    @property
    def code(self) -> str:
        return _CATEGORY_CODES[self]

    @classmethod
    def from_code(cls, code: str) -> "Category":
        try:
            return _CODE_CATEGORY[code]
        except KeyError:
            raise ValueError(f"unknown category code {code!r}") from None

    @classmethod
    def tag(cls, base: "Category", pwd: bool) -> "Category":
        return cls(int(base) % 4 + (4 if pwd else 0))


_CATEGORY_CODES = {
    Category.OPEN: "OPNO",
    Category.OBC_NCL: "BCNO",
    Category.SC: "SCNO",
    Category.ST: "STNO",
    Category.OPEN_PwD: "OPPH",
    Category.OBC_NCL_PwD: "BCPH",
    Category.SC_PwD: "SCPH",
    Category.ST_PwD: "STPH",
    Category.DS: "DSNO",
}
_CODE_CATEGORY = {v: k for k, v in _CATEGORY_CODES.items()}

BIRTH_CODES = {Category.OPEN: "GN", Category.OBC_NCL: "BC", Category.SC: "SC", Category.ST: "ST"}
BIRTH_FROM_CODE = {v: k for k, v in BIRTH_CODES.items()}

#: Pseudo vcategory used for foreign-national programs in stats/min-cutoff tables.
FOREIGN_VCATEGORY = "FRNO"
DS_BRANCH = "0000"


class Gender(enum.IntEnum):
    MALE = 1
    FEMALE = 2
    TRANSGENDER = 3


class Nationality(enum.IntEnum):
    INDIAN = 1
    OCI = 2
    PIO = 3
    FOREIGN = 4


class Quota(str, enum.Enum):
    AI = "AI"
    HS = "HS"
    OS = "OS"
    AP = "AP"
    GO = "GO"


QUOTA_INDEX = {q: i for i, q in enumerate(Quota)}


class Pool(str, enum.Enum):
    FEMALE_ONLY = "Female"
    GENDER_NEUTRAL = "Neutral"


class Family(enum.IntEnum):
    """Exam family a program draws its merit lists from."""

    ENG = 0
    ARCH = 1
    ADV = 2


class Decision(str, enum.Enum):
    FREEZE = "FR"
    FLOAT = "FL"
    SLIDE = "SL"
    REJECT = "RJ"


class RStatus(str, enum.Enum):
    NR = "NR"
    DR = "DR"
    RC = "RC"
    RP = "RP"
    RT = "RT"
    RU = "RU"


CANCELLING_STATUSES = frozenset({RStatus.NR, RStatus.DR, RStatus.RC})


class Flag(str, enum.Enum):
    NORMAL = "N"
    DS = "D"
    FOREIGN = "F"
    PREP = "P"


class SupReason(str, enum.Enum):
    NA = "NA"
    EQ = "EQ"
    MC = "MC"
    FR = "FR"
    FE = "FE"
    FM = "FM"
    DS = "DS"
    DE = "DE"
    DM = "DM"


class RankList(enum.IntEnum):
    """Column index into a candidate's rank vector (family * 8 + cell, then PC lists)."""

    ENG_CRL = 0
    ENG_OBC_NCL = 1
    ENG_SC = 2
    ENG_ST = 3
    ENG_CRL_PD = 4
    ENG_OBC_NCL_PD = 5
    ENG_SC_PD = 6
    ENG_ST_PD = 7
    ARC_CRL = 8
    ARC_OBC_NCL = 9
    ARC_SC = 10
    ARC_ST = 11
    ARC_CRL_PD = 12
    ARC_OBC_NCL_PD = 13
    ARC_SC_PD = 14
    ARC_ST_PD = 15
    ADV_CRL = 16
    ADV_OBC_NCL = 17
    ADV_SC = 18
    ADV_ST = 19
    ADV_CRL_PD = 20
    ADV_OBC_NCL_PD = 21
    ADV_SC_PD = 22
    ADV_ST_PD = 23
    PC_SC = 24
    PC_ST = 25
    PC_CRL_PD = 26
    PC_OBC_NCL_PD = 27
    PC_SC_PD = 28
    PC_ST_PD = 29

    @classmethod
    def standard(cls, family: Family, cell: Category) -> "RankList":
        return cls(int(family) * 8 + int(cell))


N_RANK_LISTS = len(RankList)
PC_LIST_OF_CELL = {
    Category.SC: RankList.PC_SC,
    Category.ST: RankList.PC_ST,
    Category.OPEN_PwD: RankList.PC_CRL_PD,
    Category.OBC_NCL_PwD: RankList.PC_OBC_NCL_PD,
    Category.SC_PwD: RankList.PC_SC_PD,
    Category.ST_PwD: RankList.PC_ST_PD,
}

#: Cells whose standard list a remark symbol unlocks.
_ALL_CELLS = frozenset(Category(i) for i in range(8))
REMARK_CELLS: dict[str, frozenset] = {
    "*": _ALL_CELLS,
    "=": frozenset({Category.OBC_NCL, Category.OBC_NCL_PwD}),
    "+": frozenset({Category.SC, Category.ST, Category.OPEN_PwD, Category.OBC_NCL_PwD,
                    Category.SC_PwD, Category.ST_PwD}),
    "$": frozenset({Category.OBC_NCL_PwD}),
    "%": frozenset({Category.OPEN_PwD}),
    "P": frozenset(),
    "N": frozenset(),
}
#: Symbols legal per family; "P" exists only for the Advanced exam.
FAMILY_SYMBOLS = {
    Family.ENG: frozenset("*=+$%N"),
    Family.ARCH: frozenset("*=+$%N"),
    Family.ADV: frozenset("*=+$%PN"),
}


def parse_rank_text(text: str) -> int:
    """Parse a positive decimal rank into its scaled integer form."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None
    scaled = d * RANK_SCALE
    if not d.is_finite() or scaled != scaled.to_integral_value():
        raise ValueError(f"rank {text!r} has more than 4 decimals")
    value = int(scaled)
    if value < 0 or value >= PC_OFFSET:
        raise ValueError(f"rank {text!r} out of range")
    return value


def format_scaled(value: int) -> str:
    whole, frac = divmod(value, RANK_SCALE)
    if frac == 0:
        return str(whole)
    return f"{whole}.{frac:04d}".rstrip("0")


@dataclass(frozen=True, order=True)
class Rank:
    """A position on an extended merit list: (tier, scaled value)."""

    tier: int
    value: int

    @property
    def key(self) -> int:
        return self.tier * PC_OFFSET + self.value

    @property
    def is_pc(self) -> bool:
        return self.tier == 1

    @classmethod
    def from_key(cls, key: int) -> "Rank":
        if key < 0:
            raise ValueError("negative rank key")
        return cls(int(key // PC_OFFSET), int(key % PC_OFFSET))

    @classmethod
    def standard(cls, text: str) -> "Rank":
        return cls(0, parse_rank_text(text))

    @classmethod
    def parse_display(cls, text: str) -> "Rank":
        """Inverse of :meth:`display`: ``"3P"`` is PC rank 3."""
        if text.endswith("P"):
            return cls(1, parse_rank_text(text[:-1]))
        return cls(0, parse_rank_text(text))

    def number(self) -> str:
        return format_scaled(self.value)

    def display(self) -> str:
        return self.number() + ("P" if self.is_pc else "")

    def __str__(self) -> str:
        return self.display()


@dataclass(frozen=True)
class CandidateInfo:
    """Identity and bookkeeping columns that never influence allocation."""

    app_no: str = ""
    name: str = ""
    mother_name: str = ""
    father_name: str = ""
    guardian_name: str = ""
    dob: str = ""
    adv_roll_no: str = ""
    adv_reg_no: str = ""
    eng_top_20: str = ""
    arc_top_20: str = ""
    adv_top_20: str = ""
    board_mark_eng: str = ""
    board_mark_arc: str = ""
    board_mark_adv: str = ""
    board_roll_no: str = ""
    board_year: str = ""
    board_name: str = ""


@dataclass
class CandidateRecord:
    """One applicant.  ``ranks`` maps a rank list to its scaled value."""

    roll_no: str
    category: Category
    gender: Gender = Gender.MALE
    state_code: str = ""
    nationality: Nationality = Nationality.INDIAN
    ds_flag: bool = False
    prep_eligible: bool = False
    ranks: dict = field(default_factory=dict)
    remarks: tuple = ("", "", "")
    aat_qualified: bool = False
    color_blind: bool = False
    one_eyed: bool = False
    cat_change: int = 2
    decision: Optional[Decision] = None
    info: CandidateInfo = field(default_factory=CandidateInfo)

    def __post_init__(self) -> None:
        if self.category == Category.DS:
            raise ValueError("DS is not a candidate category")
        if self.ds_flag and RankList.ADV_CRL not in self.ranks:
            raise ValueError(f"{self.roll_no}: DS candidate without a CRL rank")
        if self.prep_eligible and not any(rl in self.ranks for rl in PC_LIST_OF_CELL.values()):
            raise ValueError(f"{self.roll_no}: preparatory candidate without a PC rank")
        if self.cat_change not in (1, 2, 3, 4):
            raise ValueError(f"{self.roll_no}: CatChange must be 1..4")

    @property
    def is_female(self) -> bool:
        return self.gender == Gender.FEMALE

    @property
    def is_foreign(self) -> bool:
        return self.nationality == Nationality.FOREIGN

    @property
    def is_pwd(self) -> bool:
        return self.category.is_pwd

    def remark(self, family: Family) -> str:
        return self.remarks[int(family)]

    def ladder(self) -> list:
        """Category cells in the order a candidate competes for them."""
        base = self.category.base
        cells = [Category.OPEN]
        if self.is_pwd:
            cells.append(Category.OPEN_PwD)
        if base != Category.OPEN:
            cells.append(base)
            if self.is_pwd:
                cells.append(Category.tag(base, True))
        return cells


@dataclass(frozen=True, order=True)
class VirtualProgramId:
    quota: Quota
    institute: str
    branch: str
    category: Category
    pool: Pool = Pool.GENDER_NEUTRAL
    foreign_pool: bool = False

    def __post_init__(self) -> None:
        if self.category == Category.DS and (self.branch != DS_BRANCH or self.pool != Pool.GENDER_NEUTRAL):
            raise ValueError("DS programs use branch 0000 and the gender-neutral pool")
        if self.foreign_pool and (self.category != Category.OPEN or self.pool != Pool.GENDER_NEUTRAL):
            raise ValueError("foreign programs are OPEN and gender-neutral")

    @property
    def is_ds(self) -> bool:
        return self.category == Category.DS

    @property
    def vcategory(self) -> str:
        return FOREIGN_VCATEGORY if self.foreign_pool else self.category.code

    def __str__(self) -> str:
        return f"{self.quota.value}/{self.institute}/{self.branch}/{self.vcategory}/{self.pool.value}"


@dataclass
class VirtualProgram:
    id: VirtualProgramId
    init_capacity: int
    capacity: int
    min_cutoff: int = NO_CUTOFF
    waitlist: list = field(default_factory=list)
    dereserve_to: int = 0
    dereserve_from: int = 0


@dataclass
class AllotmentRow:
    round_no: int
    roll_no: str
    birth_cat: str
    opt_no: int
    inst_cd: str
    br_cd: str
    rank: Rank
    allotted_cat: str
    allotted_quota: Quota
    gender_pool: Pool
    flag: Flag
    supnum_reason: SupReason = SupReason.NA
    withdraw: Optional[str] = None
    rstatus: Optional[RStatus] = None

    def program_id(self, ds_branch: bool = True) -> VirtualProgramId:
        """Virtual program holding this seat (DS admits map to the institute DS program)."""
        if self.flag == Flag.DS and ds_branch:
            return VirtualProgramId(Quota.AI, self.inst_cd, DS_BRANCH, Category.DS)
        return VirtualProgramId(self.allotted_quota, self.inst_cd, self.br_cd,
                                Category.from_code(self.allotted_cat), self.gender_pool,
                                self.flag == Flag.FOREIGN)

    @property
    def seat_cancelled(self) -> bool:
        return self.withdraw == "Y" or (self.rstatus in CANCELLING_STATUSES)


@dataclass
class ProgramStats:
    quota: Quota
    inst_cd: str
    br_cd: str
    vcategory: str
    gender_pool: Pool
    opening_rank: Optional[Rank]
    closing_rank: Optional[Rank]
    min_cutoff: Rank
    total_allotted: int
    init_cap: int
    new_cap: int
    dereserve_from: int
    dereserve_to: int
    supernum: int

    def program_id(self) -> VirtualProgramId:
        if self.vcategory == FOREIGN_VCATEGORY:
            return VirtualProgramId(self.quota, self.inst_cd, self.br_cd, Category.OPEN, self.gender_pool, True)
        return VirtualProgramId(self.quota, self.inst_cd, self.br_cd, Category.from_code(self.vcategory),
                                self.gender_pool)


def _cell_key(c: CandidateRecord, family: Family, cell: Category, has_pc: bool) -> Optional[Rank]:
    symbol = c.remark(family)
    if symbol in ("", "N"):
        return None
    if cell in REMARK_CELLS[symbol]:
        value = c.ranks.get(RankList.standard(family, cell))
        if value:
            return Rank(0, value)
    if family == Family.ADV and has_pc and c.prep_eligible:
        pc_list = PC_LIST_OF_CELL.get(cell)
        if pc_list is not None and c.ranks.get(pc_list):
            return Rank(1, c.ranks[pc_list])
    return None


def effective_rank(c: CandidateRecord, p: VirtualProgramId, family: Family, has_pc: bool) -> Optional[Rank]:
    """Position of ``c`` on the extended merit list of ``p``, or None when ineligible.

    ``family`` and ``has_pc`` describe the actual program behind ``p``.
    """
    if p.pool == Pool.FEMALE_ONLY and not c.is_female:
        return None
    if p.foreign_pool != c.is_foreign:
        return None
    if p.is_ds or p.foreign_pool:
        if p.is_ds and not c.ds_flag:
            return None
        if c.remark(Family.ADV) != "*":
            return None
        value = c.ranks.get(RankList.ADV_CRL)
        return Rank(0, value) if value else None
    if p.category not in c.ladder():
        return None
    return _cell_key(c, family, p.category, has_pc)


def key_of(rank: Optional[Rank]) -> int:
    return NO_RANK if rank is None else rank.key


def ranks_from_mapping(values: Mapping) -> dict:
    """Build a rank vector from ``{RankList: "12.5"}`` style input."""
    return {RankList(k): parse_rank_text(str(v)) for k, v in values.items()}
