"""Command line entry point: ``mrda allocate | validate | compare | gen | counterfactual``.

Exit codes: 0 success, 2 validation findings or allotment differences, 1 bad input.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from .errors import InputError
from .rounds import preprocess_round
from .run_pipeline import allocate_round
from .simgen import counterfactual_separate, generate_instance
from .tables_io import (emit_findings, emit_min_cutoff, emit_programs, parse_baseline, parse_candidates,
                        parse_choices, parse_min_cutoff, parse_prev_allotment, parse_profiles,
                        parse_program_stats, parse_seat_matrix, read_text, write_text)
from .validation import compare_allotments, validate_all

log = logging.getLogger("mrda")


def _round_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--round", type=int, default=1, dest="round_no")
    p.add_argument("--seat-matrix", required=True)
    p.add_argument("--foreign-seat-matrix")
    p.add_argument("--institutes", required=True, help="institute profile table")
    p.add_argument("--candidates", required=True)
    p.add_argument("--choices", required=True)
    p.add_argument("--prev-allotment")
    p.add_argument("--min-cutoff", help="overrides the table derived from --prev-allotment")
    p.add_argument("--ds-rule", type=int, choices=(2015, 2016), default=2016)
    p.add_argument("--female-baseline")


def _load(args):
    seat = parse_seat_matrix(read_text(args.seat_matrix))
    foreign = parse_seat_matrix(read_text(args.foreign_seat_matrix)) if args.foreign_seat_matrix else []
    profiles = parse_profiles(read_text(args.institutes))
    cands = parse_candidates(read_text(args.candidates))
    choices = parse_choices(read_text(args.choices), cands)
    prev = parse_prev_allotment(read_text(args.prev_allotment)) if args.prev_allotment else None
    mc = parse_min_cutoff(read_text(args.min_cutoff)) if args.min_cutoff else None
    baseline = parse_baseline(read_text(args.female_baseline)) if args.female_baseline else None
    return preprocess_round(args.round_no, seat, foreign, profiles, cands, choices, prev_allotment=prev,
                            min_cutoff=mc, baseline=baseline, ds_rule=args.ds_rule)


def cmd_allocate(args) -> int:
    inp = _load(args)
    res = allocate_round(inp)
    os.makedirs(args.out_dir, exist_ok=True)
    write_text(os.path.join(args.out_dir, "allotment.csv"), res.allotment_csv())
    write_text(os.path.join(args.out_dir, "program_stats.csv"), res.stats_csv())
    write_text(os.path.join(args.out_dir, "min_cutoff.csv"), emit_min_cutoff(inp.min_cutoff))
    stained = res.stained_programs()
    if stained:
        write_text(os.path.join(args.out_dir, "stained_programs.csv"), emit_programs(stained))
        log.warning("%d programs stained by DS races", len(stained))
    log.info("round %d: %d seated after %d runs", inp.round_no, int((res.entry >= 0).sum()), len(res.runs))
    return 0


def cmd_validate(args) -> int:
    inp = _load(args)
    rows = parse_prev_allotment(read_text(args.allotment))
    stats = parse_program_stats(read_text(args.stats))
    findings = validate_all(inp, rows, stats)
    text = emit_findings(findings)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 2 if findings else 0


def cmd_compare(args) -> int:
    cmp = compare_allotments(parse_prev_allotment(read_text(args.a)), parse_prev_allotment(read_text(args.b)))
    for roll, x, y in cmp.diffs:
        fmt = lambda r: "-" if r is None else f"{r.inst_cd}/{r.br_cd}/{r.allotted_quota.value}/{r.allotted_cat}/{r.gender_pool.value}"
        print(f"{roll}: {fmt(x)} -> {fmt(y)}")
    for roll, x, y in cmp.label_diffs:
        print(f"{roll}: label {x.supnum_reason.value} -> {y.supnum_reason.value}")
    return 2 if cmp.diffs else 0


def cmd_gen(args) -> int:
    n_inst = args.institutes_count or max(1, math.ceil(args.programs / 4))
    inst = generate_instance(args.seed, n_candidates=args.candidates, n_programs=args.programs,
                             n_institutes=n_inst, tie_rate=args.tie_rate)
    for name, path in inst.write(args.out_dir).items():
        log.info("wrote %s", path)
    return 0


def cmd_counterfactual(args) -> int:
    m = counterfactual_separate(_load(args))
    text = f"metric,value\niit_vacancies_saved,{m.iit_vacancies_saved}\ncandidates_benefited,{m.candidates_benefited}\n"
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    ap = argparse.ArgumentParser(prog="mrda", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("allocate", parents=[common], help="allocate one round")
    _round_inputs(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("validate", parents=[common], help="check an allotment against its inputs")
    _round_inputs(p)
    p.add_argument("--allotment", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--out", help="findings CSV (stdout when omitted)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compare", parents=[common], help="diff two allotment tables")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", parents=[common], help="write a seeded synthetic instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--candidates", type=int, required=True)
    p.add_argument("--programs", type=int, required=True)
    p.add_argument("--institutes-count", type=int)
    p.add_argument("--tie-rate", type=float, default=0.0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("counterfactual", parents=[common], help="joint versus separate IIT/non-IIT allocation")
    _round_inputs(p)
    p.add_argument("--out", help="metrics CSV (stdout when omitted)")
    p.set_defaults(func=cmd_counterfactual)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for findings here
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"mrda: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
