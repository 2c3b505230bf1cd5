import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import cand
from mrda.model import (PC_OFFSET, RANK_SCALE, Category, Family, Pool, Quota, Rank, VirtualProgramId,
                        effective_rank, format_scaled, parse_rank_text)


def vp(cat, pool=Pool.GENDER_NEUTRAL, **kw):
    return VirtualProgramId(Quota.AI, "I01", "B001", cat, pool, **kw)


def test_standard_rank_lookup():
    c = cand("x", Category.SC, ADV_SC=12)
    assert effective_rank(c, vp(Category.SC), Family.ADV, has_pc=True) == Rank(0, 12 * RANK_SCALE)


def test_pc_rank_sits_after_every_standard_rank():
    c = cand("x", Category.SC, prep=True, PC_SC=3)
    r = effective_rank(c, vp(Category.SC), Family.ADV, has_pc=True)
    assert r == Rank(1, 3 * RANK_SCALE)
    assert r > Rank(0, 10**9)


def test_pc_rank_unusable_without_preparatory_course():
    c = cand("x", Category.SC, prep=True, PC_SC=3)
    assert effective_rank(c, vp(Category.SC), Family.ADV, has_pc=False) is None


def test_female_pool_and_foreign_pool_gates():
    male, fem = cand("m", ADV_CRL=5), cand("f", female=True, ADV_CRL=5)
    assert effective_rank(male, vp(Category.OPEN, Pool.FEMALE_ONLY), Family.ADV, False) is None
    assert effective_rank(fem, vp(Category.OPEN, Pool.FEMALE_ONLY), Family.ADV, False) is not None
    assert effective_rank(male, vp(Category.OPEN, foreign_pool=True), Family.ADV, False) is None


def test_remark_n_blocks_a_family():
    c = cand("x", remarks=("N", "N", "*"), ENG_CRL=4, ADV_CRL=9)
    assert effective_rank(c, vp(Category.OPEN), Family.ENG, False) is None
    assert effective_rank(c, vp(Category.OPEN), Family.ADV, False) == Rank(0, 9 * RANK_SCALE)


def test_restricted_remark_skips_open():
    c = cand("x", Category.OBC_NCL, remarks=("=", "N", "N"), ENG_CRL=7, ENG_OBC_NCL=2)
    assert effective_rank(c, vp(Category.OPEN), Family.ENG, False) is None
    assert effective_rank(c, vp(Category.OBC_NCL), Family.ENG, False) == Rank(0, 2 * RANK_SCALE)


def test_ladder_order():
    c = cand("x", Category.SC_PwD, ADV_CRL=1)
    assert c.ladder() == [Category.OPEN, Category.OPEN_PwD, Category.SC, Category.SC_PwD]
    assert cand("y", ADV_CRL=1).ladder() == [Category.OPEN]


def test_record_invariants():
    with pytest.raises(ValueError):
        cand("x", ds=True, ENG_CRL=3)
    with pytest.raises(ValueError):
        cand("x", Category.SC, prep=True, ADV_SC=3)
    with pytest.raises(ValueError):
        cand("x", cat_change=5, ADV_CRL=1)


def test_program_id_invariants():
    with pytest.raises(ValueError):
        VirtualProgramId(Quota.AI, "I01", "B001", Category.DS)
    with pytest.raises(ValueError):
        VirtualProgramId(Quota.AI, "I01", "B001", Category.SC, foreign_pool=True)
    assert vp(Category.OPEN, foreign_pool=True).vcategory == "FRNO"


@given(st.integers(0, 10**9), st.integers(0, 1))
def test_rank_key_round_trip(value, tier):
    r = Rank(tier, value)
    assert Rank.from_key(r.key) == r
    assert Rank.parse_display(r.display()) == r


@given(st.integers(0, 1), st.integers(0, 10**9), st.integers(0, 1), st.integers(0, 10**9))
def test_key_order_matches_tuple_order(t1, v1, t2, v2):
    assert (Rank(t1, v1).key < Rank(t2, v2).key) == ((t1, v1) < (t2, v2))


def test_decimal_ranks_are_exact():
    assert parse_rank_text("12.5") == 125000
    assert format_scaled(125000) == "12.5"
    assert parse_rank_text("0.1") + parse_rank_text("0.2") == parse_rank_text("0.3")
    with pytest.raises(ValueError):
        parse_rank_text("1.00001")
    assert PC_OFFSET > 10**13
