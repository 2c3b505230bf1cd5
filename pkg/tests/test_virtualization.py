from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import cand, choices, gfti, iit, nit, seats
from mrda.columnar import compile_preferences
from mrda.errors import InvalidBaseline, NegativeCapacity, UnknownInstitute
from mrda.model import Category, Pool, Quota, Rank
from mrda.simgen import generate_instance
from mrda.virtualization import (InstituteKind, KIND_DS, KIND_FOREIGN, BaselineCell, build_virtual_programs,
                                 compute_gender_pools, expand_preferences, new_program_pools, split_by_baseline)

F, N = Pool.FEMALE_ONLY, Pool.GENDER_NEUTRAL


@pytest.mark.parametrize("C,f,expected", [(100, 0, (17, 100)), (100, 40, (20, 80)), (100, 16, (16, 84)),
                                          (100, 14, (14, 86)), (100, 20, (20, 80)), (7, 3, (1, 6))])
def test_gender_pools(C, f, expected):
    assert compute_gender_pools(C, f) == expected


def test_gender_pools_reject_bad_input():
    with pytest.raises(InvalidBaseline):
        compute_gender_pools(10, 11)
    with pytest.raises(InvalidBaseline):
        compute_gender_pools(10, 1, Fraction(1, 4))


def test_new_program_pools_take_target_share_of_capacity():
    assert new_program_pools(100) == (14, 86)
    assert new_program_pools(3) == (1, 2)
    assert new_program_pools(0) == (0, 0)


def test_split_by_baseline_uses_history_per_cell():
    raw = [seats("AI", "I01", "B001", OP=100, SC=10)]
    base = {(Quota.AI, "I01", "B001", Category.OPEN): BaselineCell(100, 0)}
    fem, neu = split_by_baseline(raw, base)
    assert (fem.gender_pool, neu.gender_pool) == (F, N)
    assert (fem.counts[Category.OPEN], neu.counts[Category.OPEN]) == (17, 100)
    assert (fem.counts[Category.SC], neu.counts[Category.SC]) == new_program_pools(10)
    with pytest.raises(InvalidBaseline):
        split_by_baseline(raw, {(Quota.AI, "I01", "B001", Category.OPEN): BaselineCell(90, 0)})


def _count(ps, inst, kind=0):
    return sum(1 for v, pid in enumerate(ps.ids) if pid.institute == inst and ps.kind[v] == kind)


def test_virtual_program_counts_per_institute_kind():
    matrix = [seats("AI", "I01", "B001", OP=2), seats("HS", "N01", "B001", states=("GJ",), OP=1),
              seats("OS", "N01", "B001", states=("GJ",), OP=1), seats("AI", "G01", "B001", OP=1)]
    ps = build_virtual_programs(matrix, [seats("AI", "I01", "B001", OP=1)],
                                {"I01": iit("I01"), "N01": nit("N01", "GJ"), "G01": gfti("G01")})
    assert _count(ps, "I01") == 16 and _count(ps, "N01") == 32 and _count(ps, "G01") == 16
    assert _count(ps, "I01", KIND_DS) == 1 and _count(ps, "I01", KIND_FOREIGN) == 1
    assert _count(ps, "N01", KIND_DS) == 0


def test_build_errors():
    with pytest.raises(UnknownInstitute):
        build_virtual_programs([seats("AI", "I09", "B001", OP=1)], [], {})
    with pytest.raises(NegativeCapacity):
        build_virtual_programs([seats("AI", "I01", "B001", OP=-1)], [], {"I01": iit("I01")})


def _expand(c, lists, matrix, profiles):
    ps = build_virtual_programs(matrix, [], {p.inst_cd: p for p in profiles})
    return [(vp.program.quota, vp.program.category, vp.program.pool) for vp in expand_preferences(c, lists, ps)]


def test_sc_pwd_female_order():
    c = cand("x", Category.SC_PwD, female=True, ADV_CRL=9, ADV_CRL_PD=1, ADV_SC=3, ADV_SC_PD=1)
    got = _expand(c, choices("x", "I01/B001"), [seats("AI", "I01", "B001", OP=1)], [iit("I01")])
    cats = [Category.OPEN, Category.OPEN_PwD, Category.SC, Category.SC_PwD]
    assert got == [(Quota.AI, cat, pool) for cat in cats for pool in (F, N)]


def test_obc_male_order():
    c = cand("x", Category.OBC_NCL, ADV_CRL=9, ADV_OBC_NCL=3)
    got = _expand(c, choices("x", "I01/B001"), [seats("AI", "I01", "B001", OP=1)], [iit("I01")])
    assert got == [(Quota.AI, Category.OPEN, N), (Quota.AI, Category.OBC_NCL, N)]


def test_st_female_home_state_nit():
    c = cand("x", Category.ST, female=True, state="GJ", ENG_CRL=90, ENG_ST=2)
    matrix = [seats("HS", "NSU", "CIVL", states=("GJ",), OP=1), seats("OS", "NSU", "CIVL", states=("GJ",), OP=1)]
    got = _expand(c, choices("x", "NSU/CIVL"), matrix, [nit("NSU", "GJ")])
    assert got == [(Quota.HS, Category.OPEN, F), (Quota.HS, Category.OPEN, N), (Quota.HS, Category.ST, F),
                   (Quota.HS, Category.ST, N)]
    c2 = cand("y", Category.ST, female=True, state="MH", ENG_CRL=90, ENG_ST=2)
    assert {q for q, _, _ in _expand(c2, choices("y", "NSU/CIVL"), matrix, [nit("NSU", "GJ")])} == {Quota.OS}


def test_gfti_all_india_before_home_state():
    prof = gfti("G01", InstituteKind.GFTI_HS_AI, "KA")
    matrix = [seats("AI", "G01", "B001", OP=1), seats("HS", "G01", "B001", OP=1)]
    home = cand("h", state="KA", ENG_CRL=3)
    away = cand("a", state="GJ", ENG_CRL=3)
    assert [q for q, _, _ in _expand(home, choices("h", "G01/B001"), matrix, [prof])] == [Quota.AI, Quota.HS]
    assert [q for q, _, _ in _expand(away, choices("a", "G01/B001"), matrix, [prof])] == [Quota.AI]


def test_ds_entry_follows_first_program_of_each_institute():
    c = cand("x", ds=True, ADV_CRL=9)
    matrix = [seats("AI", "I01", "B001", OP=1), seats("AI", "I01", "B002", OP=1), seats("AI", "I02", "B001", OP=1)]
    ps = build_virtual_programs(matrix, [], {"I01": iit("I01"), "I02": iit("I02")})
    lst = expand_preferences(c, choices("x", "I01/B001", "I01/B002", "I02/B001"), ps)
    assert [(vp.program.branch, vp.program.category, vp.opt_no) for vp in lst] == [
        ("B001", Category.OPEN, 1), ("0000", Category.DS, 1), ("B002", Category.OPEN, 2),
        ("B001", Category.OPEN, 3), ("0000", Category.DS, 3)]


def test_architecture_needs_aat():
    matrix = [seats("AI", "I01", "ARCH", OP=1)]
    prof = iit("I01", arch=("ARCH",))
    assert _expand(cand("x", ADV_CRL=3), choices("x", "I01/ARCH"), matrix, [prof]) == []
    assert len(_expand(cand("y", aat=True, ADV_CRL=3), choices("y", "I01/ARCH"), matrix, [prof])) == 1


def test_foreign_candidate_sees_only_iit_foreign_programs():
    matrix = [seats("AI", "I01", "B001", OP=1), seats("AI", "G01", "B001", OP=1)]
    ps = build_virtual_programs(matrix, [seats("AI", "I01", "B001", OP=1)], {"I01": iit("I01"), "G01": gfti("G01")})
    lst = expand_preferences(cand("f", foreign=True, ADV_CRL=3, ENG_CRL=3), choices("f", "G01/B001", "I01/B001"), ps)
    assert [vp.program.foreign_pool for vp in lst] == [True]


def test_invalid_choices_are_skipped():
    matrix = [seats("AI", "I01", "B001", OP=1), seats("AI", "I01", "B002", OP=1)]
    got = _expand(cand("x", ADV_CRL=1), choices("x", "I01/B001", "I01/B002", invalid=(1,)), matrix, [iit("I01")])
    assert len(got) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 0.3), st.booleans())
def test_columnar_expansion_matches_reference(seed, tie_rate, pools):
    """The compiled arrays reproduce the record-by-record expansion exactly."""
    inst = generate_instance(seed, n_candidates=120, tie_rate=tie_rate, female_pools=pools, ds_rate=0.1,
                             foreign_rate=0.05, prep_rate=0.3, restricted_rate=0.2, invalid_rate=0.1,
                             arch_branch_rate=0.5)
    ps = build_virtual_programs(inst.seat_matrix, inst.foreign_seat_matrix, inst.profiles)
    pref = compile_preferences(inst.candidates, inst.choices, ps)
    rows = inst.choice_rows()
    for i, c in enumerate(inst.candidates.to_records()):
        ref = [(vp.program, vp.rank, vp.opt_no) for vp in expand_preferences(c, rows.get(c.roll_no, []), ps)]
        lo, hi = pref.ptr[i], pref.ptr[i + 1]
        got = [(ps.ids[int(pref.vid[e])], Rank.from_key(int(pref.key[e])), int(inst.choices.opt[pref.choice[e]]))
               for e in range(lo, hi)]
        assert got == ref, c.roll_no


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_expansion_invariants(seed):
    inst = generate_instance(seed, n_candidates=80, ds_rate=0.1, foreign_rate=0.05)
    ps = build_virtual_programs(inst.seat_matrix, inst.foreign_seat_matrix, inst.profiles)
    rows = inst.choice_rows()
    for c in inst.candidates.to_records():
        lst = expand_preferences(c, rows.get(c.roll_no, []), ps)
        opts = [vp.opt_no for vp in lst]
        assert opts == sorted(opts)
        for vp in lst:
            assert ps.rank_of(c, vp.program) == vp.rank
            assert c.is_female or vp.program.pool == N
            assert c.ds_flag or not vp.program.is_ds
            if vp.program.quota == Quota.HS:
                assert c.state_code in ps.program(vp.program.institute, vp.program.branch).home_states
