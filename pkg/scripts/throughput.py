"""Time one round on a large synthetic instance and report peak memory.

Usage: python3 scripts/throughput.py [--candidates 1000000] [--choices 20] [--seed 7]
Prints one JSON line: generation, preprocessing and allocation seconds plus peak RSS.
"""

import argparse
import json
import resource
import time

from mrda.rounds import preprocess_round
from mrda.run_pipeline import allocate_round
from mrda.simgen import generate_instance


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--candidates", type=int, default=1_000_000)
    ap.add_argument("--choices", type=int, default=20)
    ap.add_argument("--institutes", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    # compile the kernels on a toy instance so timings exclude JIT work
    small = generate_instance(0, n_candidates=50)
    allocate_round(preprocess_round(1, small.seat_matrix, small.foreign_seat_matrix, small.profiles,
                                    small.candidates, small.choices))

    t0 = time.perf_counter()
    inst = generate_instance(args.seed, n_candidates=args.candidates, n_institutes=args.institutes,
                             branches=(5, 15), seats=(5, 40), list_length=(args.choices, args.choices),
                             tie_rate=0.01, ds_rate=0.001, foreign_rate=0.001)
    t1 = time.perf_counter()
    inp = preprocess_round(1, inst.seat_matrix, inst.foreign_seat_matrix, inst.profiles, inst.candidates,
                           inst.choices)
    t2 = time.perf_counter()
    res = allocate_round(inp)
    t3 = time.perf_counter()
    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    print(json.dumps({
        "candidates": args.candidates, "raw_choices": int(inst.choices.ptr[-1]),
        "virtual_entries": int(res.pref.ptr[-1]), "runs": len(res.runs),
        "seated": int((res.entry >= 0).sum()), "generate_s": round(t1 - t0, 2),
        "preprocess_s": round(t2 - t1, 2), "allocate_s": round(t3 - t2, 2),
        "round_s": round(t3 - t1, 2), "peak_rss_mb": round(peak_kb / 1024, 1)}))


if __name__ == "__main__":
    main()
