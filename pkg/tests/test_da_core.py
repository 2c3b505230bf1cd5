import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenarios import THREE, three_ranks
from mrda.da_core import INF_KEY, DaEngine, foreign_pass, overflow_reasons, remove_and_reject, run_da
from mrda.columnar import PrefArrays
from mrda.errors import MissingRank, UnknownProgram
from mrda.model import SupReason
from mrda.simgen import small_market
from mrda.validation import is_stable, reference_da


def test_three_candidates_get_first_choices():
    res = run_da(THREE["preferences"], THREE["capacities"], three_ranks())
    assert res.assignment == {"A": "IIT", "B": "ARCH", "C": "NIT"}
    assert res.position == {"A": 1, "B": 1, "C": 1}


def test_empty_list_stays_unassigned():
    res = run_da({"A": [], "B": ["P"]}, {"P": 1}, {("B", "P"): 1})
    assert res.assignment == {"A": None, "B": "P"}


def test_missing_rank_and_unknown_program():
    with pytest.raises(MissingRank):
        run_da({"A": ["P"]}, {"P": 1}, {})
    with pytest.raises(UnknownProgram):
        run_da({"A": ["Q"]}, {"P": 1}, {("A", "Q"): 1})


def test_none_rank_means_ineligible():
    res = run_da({"A": ["P", "Q"]}, {"P": 1, "Q": 1}, {("A", "P"): None, ("A", "Q"): 4})
    assert res.assignment["A"] == "Q"


@pytest.mark.parametrize("order", list(itertools.permutations("wxyz")))
def test_min_cutoff_keeps_last_years_ranks(order):
    # capacity 2, last year's closing 50: rank 60 leaves, the other three stay
    ranks = {("w", "P"): 10, ("x", "P"): 60, ("y", "P"): 40, ("z", "P"): 45}
    res = run_da({c: ["P"] for c in "wxyz"}, {"P": 2}, ranks, min_cutoffs={"P": 50}, queue=list(order))
    assert res.waitlists["P"] == ["w", "y", "z"]
    assert res.supernumerary["P"] == [("z", SupReason.MC)]


def test_tied_block_survives_when_removal_would_underfill():
    res = run_da({c: ["P"] for c in "abc"}, {"P": 2}, {("a", "P"): 1, ("b", "P"): 5, ("c", "P"): 5})
    assert res.waitlists["P"] == ["a", "b", "c"]
    assert res.supernumerary["P"] == [("c", SupReason.EQ)]


def test_remove_and_reject_examples():
    assert remove_and_reject([1, 2, 3], 2) == ([1, 2], [3])
    assert remove_and_reject([1, 3, 3], 2) == ([1, 3, 3], [])
    assert remove_and_reject([1, 2, 3, 3], 2) == ([1, 2], [3, 3])
    assert remove_and_reject([3, 3, 3], 2) == ([3, 3, 3], [])


def test_overflow_labels():
    assert overflow_reasons([1, 2, 3, 3], 2, 0) == [SupReason.NA, SupReason.NA, SupReason.EQ, SupReason.EQ]
    assert overflow_reasons([1, 2, 3], 2, 5) == [SupReason.NA, SupReason.NA, SupReason.MC]
    assert overflow_reasons([1, 2, 3], 2, 5, SupReason.DE, SupReason.DM, SupReason.DS) == [
        SupReason.DS, SupReason.DS, SupReason.DM]


def _market(seed, **kw):
    return small_market(np.random.default_rng(seed), int(np.random.default_rng(seed + 1).integers(1, 12)),
                        int(np.random.default_rng(seed + 2).integers(1, 6)), **kw)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.booleans(), st.booleans())
def test_engine_matches_reference_da(seed, ties, mc):
    prefs, caps, ranks, cuts = _market(seed, ties=ties, min_cutoffs=mc)
    got = run_da(prefs, caps, ranks, min_cutoffs=cuts).assignment
    assert got == reference_da(prefs, caps, ranks, cuts)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_no_justified_envy_and_individual_rationality(seed):
    prefs, caps, ranks, _ = _market(seed)
    res = run_da(prefs, caps, ranks)
    assert is_stable(res.assignment, prefs, caps, ranks)
    for c, p in res.assignment.items():
        assert p is None or (p in prefs[c] and ranks[(c, p)] is not None)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.randoms(use_true_random=False))
def test_warm_start_reaches_the_same_matching(seed, rnd):
    prefs, caps, ranks, cuts = _market(seed, ties=True, min_cutoffs=True)
    first = run_da(prefs, caps, ranks, min_cutoffs=cuts)
    # re-run with everyone already seated at their final position plus a shuffled queue of nobody
    again = run_da(prefs, caps, ranks, min_cutoffs=cuts, queue=[], initial_positions=first.position)
    assert again.assignment == first.assignment
    order = sorted(prefs)
    rnd.shuffle(order)
    assert run_da(prefs, caps, ranks, min_cutoffs=cuts, queue=order).assignment == first.assignment


def _engine(lists, caps, mc=None):
    ptr, vid, key = [0], [], []
    for lst in lists:
        for v, k in lst:
            vid.append(v)
            key.append(k)
        ptr.append(len(vid))
    pref = PrefArrays(np.asarray(ptr, np.int64), np.asarray(vid, np.int64), np.asarray(key, np.int64),
                      np.arange(len(vid), dtype=np.int64))
    return DaEngine(pref, np.asarray(caps, np.int64), np.asarray(mc or [0] * len(caps), np.int64))


def test_foreign_pass_gates_on_last_indian_admit():
    # program 0: Indian OPEN (cap 1); program 1: paired foreign program (cap 2)
    eng = _engine([[(0, 5)], [(1, 3)], [(1, 9)]], [1, 2])
    eng.run(np.asarray([0]))
    foreign_pass(eng, np.asarray([-1, 0]), np.asarray([1, 2]))
    assert eng.assigned_entries().tolist() == [0, 1, -1]
    assert eng.gate[1] == 5


def test_foreign_pass_without_indian_admit_sets_no_bar():
    eng = _engine([[(1, 9)]], [1, 1])
    foreign_pass(eng, np.asarray([-1, 0]), np.asarray([0]))
    assert eng.gate[1] == INF_KEY
    assert eng.assigned_entries().tolist() == [0]


def test_shrink_rejects_worst_and_resumes():
    eng = _engine([[(0, 1)], [(0, 2), (1, 2)]], [2, 1])
    eng.run(np.asarray([0, 1]))
    assert eng.filled().tolist() == [2, 0]
    rejected = eng.shrink(0)
    assert rejected.tolist() == [1]
    assert eng.assigned_entries().tolist() == [0, 2]
