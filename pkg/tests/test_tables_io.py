import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import cand, choices, seats
from mrda.errors import DuplicateKey, DuplicateRoll, MalformedRow, TotalMismatch, UnknownRemarkSymbol
from mrda.model import (AllotmentRow, Category, Decision, Flag, Pool, ProgramStats, Quota, Rank, RStatus,
                        SupReason, VirtualProgramId)
from mrda.simgen import generate_instance
from mrda.tables_io import (CANDIDATE_COLUMNS, emit_allotment, emit_candidates, emit_choices, emit_min_cutoff,
                            emit_program_stats, emit_seat_matrix, parse_candidates, parse_choices,
                            parse_min_cutoff, parse_prev_allotment, parse_program_stats, parse_seat_matrix)

HEADER = "Quota,InstCd,BrCd,GenderPool,OP,OP_PwD,SC,SC_PwD,ST,ST_PwD,OBC_NCL,OBC_NCL_PwD,Total,StCd1,StCd2,StCd3,StCd4\n"


def test_seat_matrix_row_accepted():
    rows = parse_seat_matrix(HEADER + "AI,I01,B001,Neutral,20,1,0,0,0,0,10,2,33,,,,\n")
    assert rows[0].counts[Category.OPEN] == 20 and rows[0].total == 33


def test_seat_matrix_total_mismatch():
    with pytest.raises(TotalMismatch):
        parse_seat_matrix(HEADER + "AI,I01,B001,Neutral,20,1,0,0,0,0,10,2,32,,,,\n")


def test_seat_matrix_duplicate_key():
    line = "AI,I01,B001,Neutral,1,0,0,0,0,0,0,0,1,,,,\n"
    with pytest.raises(DuplicateKey):
        parse_seat_matrix(HEADER + line + line)


def test_seat_matrix_round_trip_keeps_states():
    rows = [seats("HS", "N01", "B002", states=("GJ", "MH"), OP=3, SC=1),
            seats("OS", "N01", "B002", Pool.FEMALE_ONLY, OP=1)]
    assert parse_seat_matrix(emit_seat_matrix(rows)) == rows


def test_seat_matrix_bad_width():
    with pytest.raises(MalformedRow):
        parse_seat_matrix(HEADER + "AI,I0001,B001,Neutral,1,0,0,0,0,0,0,0,1,,,,\n")


def _one_candidate(**overrides) -> str:
    text = emit_candidates([cand("R1", ADV_CRL=4)])
    header, row = text.splitlines()
    cols = header.split(",")
    vals = row.split(",")
    assert len(cols) == len(CANDIDATE_COLUMNS) == 63
    for k, v in overrides.items():
        vals[cols.index(k)] = v
    return header + "\n" + ",".join(vals) + "\n"


def test_prep_only_candidate():
    text = _one_candidate(**{"Adv_Rem_Symb": "P", "Adv_IsPrep": "1", "Adv_Prep_SC_Rank": "3", "Adv_CRL_Rank": "",
                             "CAT": "SC"})
    c = parse_candidates(text)[0]
    assert c.prep_eligible and c.remarks[2] == "P" and c.category == Category.SC


def test_gender_code_two_is_female():
    assert parse_candidates(_one_candidate(Gender="2"))[0].is_female
    assert not parse_candidates(_one_candidate(Gender="1"))[0].is_female


def test_cat_change_defaults_to_two():
    assert parse_candidates(_one_candidate(CatChange=""))[0].cat_change == 2


def test_unknown_remark_symbol():
    with pytest.raises(UnknownRemarkSymbol):
        parse_candidates(_one_candidate(Eng_Rem_Symb="Q"))
    with pytest.raises(UnknownRemarkSymbol):
        parse_candidates(_one_candidate(Eng_Rem_Symb="P"))  # P exists only for the Advanced exam


def test_rank_zero_rejected():
    with pytest.raises(MalformedRow):
        parse_candidates(_one_candidate(Adv_CRL_Rank="0"))


def test_duplicate_roll():
    text = _one_candidate()
    with pytest.raises(DuplicateRoll):
        parse_candidates(text + text.splitlines()[1] + "\n")


def test_generated_candidates_round_trip():
    inst = generate_instance(5, n_candidates=300, tie_rate=0.2, ds_rate=0.05, foreign_rate=0.05, prep_rate=0.2)
    recs = [c for c in inst.candidates.to_records()]
    recs[0] = cand(recs[0].roll_no, Category.OBC_NCL_PwD, female=True, state="GJ", decision=Decision.SLIDE,
                   cat_change=3, ENG_CRL=12.5, ENG_OBC_NCL_PD=1)
    assert parse_candidates(emit_candidates(recs)) == recs


def test_choices_round_trip_and_sequence():
    lists = {"R1": choices("R1", "I01/B001", "N02/B003", invalid=(2,)), "R2": choices("R2", "I01/B001")}
    assert parse_choices(emit_choices(lists)) == lists
    bad = "RollNo,OptNo,Instcd,BrCd,Validity\nR1,1,I01,B001,\nR1,3,I01,B002,\n"
    with pytest.raises(MalformedRow):
        parse_choices(bad)


rows_strategy = st.builds(
    AllotmentRow,
    round_no=st.integers(1, 7),
    roll_no=st.text("0123456789", min_size=1, max_size=10),
    birth_cat=st.sampled_from(["GN", "BC", "SC", "ST"]),
    opt_no=st.integers(1, 400),
    inst_cd=st.sampled_from(["I01", "N22", "G03"]),
    br_cd=st.sampled_from(["B001", "4110", "0000"]),
    rank=st.builds(Rank, st.just(0), st.integers(1, 10**9)),
    allotted_cat=st.sampled_from(["OPNO", "OPPH", "BCNO", "BCPH", "SCNO", "SCPH", "STNO", "STPH"]),
    allotted_quota=st.sampled_from(list(Quota)),
    gender_pool=st.sampled_from(list(Pool)),
    flag=st.sampled_from([Flag.NORMAL, Flag.DS, Flag.FOREIGN]),
    supnum_reason=st.sampled_from(list(SupReason)),
    withdraw=st.sampled_from([None, "Y", "N"]),
    rstatus=st.sampled_from([None, *RStatus]),
)


@settings(max_examples=50)
@given(st.lists(rows_strategy, max_size=20, unique_by=lambda r: r.roll_no))
def test_allotment_round_trip(rows):
    assert parse_prev_allotment(emit_allotment(rows)) == rows


def test_allotment_literals():
    row = AllotmentRow(1, "R1", "GN", 2, "I01", "B001", Rank(1, 30000), "SCNO", Quota.AI, Pool.GENDER_NEUTRAL,
                       Flag.PREP, SupReason.EQ)
    text = emit_allotment([row], with_reporting=False)
    assert text.splitlines()[1] == "1,R1,GN,2,I01,B001,3,SCNO,AI,Neutral,P,EQ"
    assert parse_prev_allotment(text) == [row]


def test_stats_round_trip_and_pc_suffix():
    s = ProgramStats(Quota.AI, "I01", "B001", "SCNO", Pool.FEMALE_ONLY, Rank(0, 10000), Rank(1, 30000),
                     Rank(0, 0), 3, 2, 3, 0, 1, 0)
    text = emit_program_stats([s])
    assert ",1,3P,0," in text
    assert parse_program_stats(text) == [s]


def test_min_cutoff_round_trip():
    table = {VirtualProgramId(Quota.HS, "N01", "B001", Category.ST, Pool.FEMALE_ONLY): Rank(1, 50000),
             VirtualProgramId(Quota.AI, "I01", "B001", Category.OPEN, foreign_pool=True): Rank(0, 0)}
    assert parse_min_cutoff(emit_min_cutoff(table)) == table
