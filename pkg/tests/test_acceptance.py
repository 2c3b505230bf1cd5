"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (``pytest tests/test_acceptance.py -s``) or directly
(``python3 tests/test_acceptance.py``).  Criterion 10 starts a subprocess
that allocates a million candidates; set ``MRDA_SKIP_THROUGHPUT=1`` to skip it.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from scenarios import THREE, dereservation_example, race_example, three_ranks  # noqa: E402
from mrda.da_core import run_da  # noqa: E402
from mrda.model import Pool, Quota  # noqa: E402
from mrda.rounds import leaves_process, preprocess_round, seat_cancelled  # noqa: E402
from mrda.run_pipeline import allocate_round  # noqa: E402
from mrda.simgen import generate_instance, simulate_reporting, small_market  # noqa: E402
from mrda.validation import MUTATIONS, oracle_stable_match, validate_all  # noqa: E402
from mrda.virtualization import KIND_DS, compute_gender_pools  # noqa: E402

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _report(n: int, ok: bool, detail: str) -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}", flush=True)


def _round1(inst, **kw):
    return preprocess_round(1, inst.seat_matrix, inst.foreign_seat_matrix, inst.profiles, inst.candidates,
                            inst.choices, **kw)


# ---------------------------------------------------------------- 1

def criterion_1():
    args = (THREE["preferences"], THREE["capacities"], three_ranks())
    run_da(*args)  # warm the compiled kernel
    times = []
    for _ in range(50):
        t = time.perf_counter()
        res = run_da(*args)
        times.append(time.perf_counter() - t)
    ms = 1000 * float(np.median(times))
    ok = res.assignment == {"A": "IIT", "B": "ARCH", "C": "NIT"} and ms < 1.0
    return ok, f"assignment={res.assignment} median={ms:.3f}ms"


# ---------------------------------------------------------------- 2

def criterion_2():
    res = allocate_round(dereservation_example())
    ids = res.programs.ids
    chain = [[(ids[a].vcategory, ids[b].vcategory, n) for a, b, n in r.moves] for r in res.runs]
    stats = {s.vcategory: s for s in res.stats_rows()
             if s.gender_pool == Pool.GENDER_NEUTRAL and s.quota == Quota.AI and s.br_cd == "B001"}
    op, bc, bph, oph = stats["OPNO"], stats["BCNO"], stats["BCPH"], stats["OPPH"]
    prep = [r for r in res.allotment_rows() if r.allotted_cat == "OPPH"]
    ok = (chain == [[("BCPH", "BCNO", 2)], [("BCNO", "OPNO", 1)], []]
          and (op.new_cap, op.total_allotted) == (21, 18) and op.new_cap - op.total_allotted == 3
          and (bc.new_cap, bc.total_allotted) == (11, 11) and (bph.new_cap, bph.total_allotted) == (0, 0)
          and (oph.new_cap, oph.total_allotted) == (1, 1) and len(prep) == 1 and prep[0].rank.tier == 1)
    return ok, (f"chain={chain} OP {op.new_cap}/{op.total_allotted} OBC {bc.new_cap}/{bc.total_allotted} "
                f"OBC_PwD {bph.new_cap} OP_PwD {oph.new_cap}/{oph.total_allotted}(PC)")


# ---------------------------------------------------------------- 3

def criterion_3(n: int = 1000):
    bad = []
    for seed in range(n):
        rng = np.random.default_rng(seed)
        prefs, caps, ranks, _ = small_market(rng, int(rng.integers(1, 13)), int(rng.integers(1, 7)))
        if run_da(prefs, caps, ranks).assignment != oracle_stable_match(prefs, caps, ranks):
            bad.append(seed)
    return not bad, f"{n - len(bad)}/{n} instances equal the oracle" + (f"; first mismatch seed {bad[0]}" if bad else "")


# ---------------------------------------------------------------- 4

def criterion_4(n: int = 200, shuffles: int = 100):
    bad = []
    for seed in range(n):
        rng = np.random.default_rng(10_000 + seed)
        prefs, caps, ranks, mc = small_market(rng, int(rng.integers(2, 25)), int(rng.integers(1, 7)), ties=True,
                                              min_cutoffs=True, max_capacity=3)
        cands = sorted(prefs)
        base = set(run_da(prefs, caps, ranks, min_cutoffs=mc).assignment.items())
        for _ in range(shuffles):
            order = [cands[i] for i in rng.permutation(len(cands))]
            if set(run_da(prefs, caps, ranks, min_cutoffs=mc, queue=order).assignment.items()) != base:
                bad.append(seed)
                break
    return not bad, f"{n - len(bad)}/{n} instances order-invariant over {shuffles} shuffles"


# ---------------------------------------------------------------- 5

def _better(true_list, p, q) -> bool:
    if p not in true_list:
        return False
    return q is None or true_list.index(p) < true_list.index(q)


def criterion_5(n: int = 200):
    gains, checked = [], 0
    for seed in range(n):
        rng = np.random.default_rng(20_000 + seed)
        prefs, caps, ranks, _ = small_market(rng, int(rng.integers(2, 6)), int(rng.integers(1, 5)), max_list=4)
        truthful = run_da(prefs, caps, ranks).assignment
        progs = list(caps)
        lists = [list(p) for k in range(min(4, len(progs)) + 1) for p in itertools.permutations(progs, k)]
        for c in prefs:
            for lst in lists:
                if any(ranks[(c, p)] is None for p in lst):
                    lst = [p for p in lst if ranks[(c, p)] is not None]
                got = run_da({**prefs, c: lst}, caps, ranks).assignment[c]
                checked += 1
                if _better(prefs[c], got, truthful[c]):
                    gains.append((seed, c, lst))
    return not gains, f"{checked} manipulations tried, {len(gains)} profitable"


# ---------------------------------------------------------------- 6 and 7

def _two_round(seed: int, n_candidates: int = 60):
    inst = generate_instance(seed, n_candidates=n_candidates, tie_rate=0.05, ds_rate=0.03, foreign_rate=0.03,
                             prep_rate=0.05)
    r1 = _round1(inst)
    out1 = allocate_round(r1)
    recs, rows = simulate_reporting(np.random.default_rng(seed), inst.candidates.to_records(),
                                    out1.allotment_rows())
    r2 = preprocess_round(2, inst.seat_matrix, inst.foreign_seat_matrix, inst.profiles, recs, inst.choice_rows(),
                          prev_allotment=rows, programs=r1.programs)
    return r1, out1, recs, rows, r2, allocate_round(r2)


def criterion_6(n_scenarios: int = 40):
    corpus = []
    for seed in range(n_scenarios):
        r1, out1, _, _, r2, out2 = _two_round(30_000 + seed, 120)
        corpus += [(r1, out1.allotment_rows(), out1.stats_rows()), (r2, out2.allotment_rows(), out2.stats_rows())]
    dirty = sum(1 for inp, rows, stats in corpus if validate_all(inp, rows, stats))
    caught = {}
    for name, mutate in MUTATIONS.items():
        applied = missed = 0
        for i, (inp, rows, stats) in enumerate(corpus):
            mutated = mutate(inp, rows, stats, np.random.default_rng(i))
            if mutated is None:
                continue
            applied += 1
            missed += not validate_all(inp, *mutated)
        caught[name] = (applied, missed)
    ok = dirty == 0 and all(a > 0 and m == 0 for a, m in caught.values())
    summary = " ".join(f"{k}={a - m}/{a}" for k, (a, m) in caught.items())
    return ok, f"{len(corpus)} outputs, {dirty} with findings; mutations caught: {summary}"


def criterion_7(n: int = 500):
    worse, mc_findings, compared = [], 0, 0
    for seed in range(n):
        _, _, recs, rows, r2, out2 = _two_round(40_000 + seed)
        now = {r.roll_no: r for r in out2.allotment_rows()}
        by_roll = {c.roll_no: c for c in recs}
        for r in rows:
            c = by_roll[r.roll_no]
            if c.cat_change != 2 or leaves_process(r, c) or seat_cancelled(r, c):
                continue
            compared += 1
            got = now.get(r.roll_no)
            if got is None or got.opt_no > r.opt_no:
                worse.append((seed, r.roll_no))
        mc_findings += sum(1 for f in validate_all(r2, out2.allotment_rows(), out2.stats_rows())
                           if f.check_id == "MIN_CUTOFF")
    ok = not worse and mc_findings == 0
    return ok, f"{compared} continuing seats compared, {len(worse)} worse; Min-Cutoff findings {mc_findings}"


# ---------------------------------------------------------------- 8

def _pools_by_search(C: int, f: int, t: Fraction) -> tuple:
    if f < t * C:
        x = 0
        while f + x < t * (C + x):
            x += 1
        return f + x, C - f
    if f <= Fraction(1, 5) * C:
        return f, C - f
    top = max(k for k in range(C + 1) if k <= Fraction(1, 5) * C)
    return top, C - top


def criterion_8(n_instances: int = 500):
    mismatches = cells = 0
    for target in ("0.14", "0.17", "0.20"):
        t = Fraction(target)
        for C in range(1, 201):
            for f in range(C + 1):
                cells += 1
                if compute_gender_pools(C, f, float(target)) != _pools_by_search(C, f, t):
                    mismatches += 1
    gender_checks = {"NONFEMALE", "NONFEMALE_VACANCY", "FEMALE"}
    bad = 0
    for seed in range(n_instances):
        inst = generate_instance(50_000 + seed, n_candidates=60, female_pools=True, female_rate=0.4,
                                 tie_rate=0.05)
        inp = _round1(inst)
        res = allocate_round(inp)
        bad += any(f.check_id in gender_checks for f in validate_all(inp, res.allotment_rows(), res.stats_rows()))
    ok = mismatches == 0 and bad == 0
    return ok, f"{cells - mismatches}/{cells} grid cells match; {bad}/{n_instances} instances with gender findings"


# ---------------------------------------------------------------- 9

def criterion_9():
    res = allocate_round(race_example(), supernumerary_ok=True)
    sup = [s for lst in res.ds.seats.values() for s in lst if s.supernumerary]
    final = Counter(s.program for lst in res.ds.seats.values() for s in lst
                    if s.is_processed and not s.supernumerary)
    # programs behind the DS admits straight after DA, from an allocation without charging
    plain = allocate_round(race_example(ds_rule=2016))
    pref, progs = plain.pref, plain.programs
    initial = Counter()
    for x, e in enumerate(plain.entry):
        if e >= 0 and progs.kind[pref.vid[e]] == KIND_DS:
            initial[int(progs.open_vid_of_prog[pref.choice_prog[pref.choice[e]]])] += 1
    expected = initial - Counter(s.program for s in sup)
    ok = res.ds.races == 1 and len(sup) == 1 and final == expected
    return ok, f"races={res.ds.races} supernumerary={len(sup)} multisets preserved={final == expected}"


# ---------------------------------------------------------------- 10

def criterion_10():
    if os.environ.get("MRDA_SKIP_THROUGHPUT"):
        return None, "skipped by MRDA_SKIP_THROUGHPUT"
    out = subprocess.run([sys.executable, os.path.join(ROOT, "scripts", "throughput.py"), "--candidates",
                          "1000000", "--choices", "20"], capture_output=True, text=True, check=True)
    m = json.loads(out.stdout.strip().splitlines()[-1])
    ok = m["round_s"] < 60 and m["peak_rss_mb"] < 8192
    expansion = m["virtual_entries"] / m["raw_choices"]
    return ok, (f"round {m['round_s']}s, peak RSS {m['peak_rss_mb']} MB, {m['virtual_entries']} virtual entries "
                f"({expansion:.2f}x of {m['raw_choices']} raw), {m['runs']} runs")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8,
            criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        if ok is None:
            print(f"\ncriterion {n}: SKIP {detail}", flush=True)
        else:
            print()
            _report(n, ok, detail)
    if ok is None:
        pytest.skip(detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        if ok is None:
            print(f"criterion {i}: SKIP {detail}")
            continue
        _report(i, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
