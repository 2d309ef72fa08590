"""Realization check: combinator machines against isPowerOf2, with timings.

    python3 scripts/combinator_equivalence.py --max-n 256 --sample 4096
"""
import argparse
import time

from decider_lab.combinators import MACHINE_NAMES, build_appendix_c, realize, state_count


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=256)
    ap.add_argument("--sample", type=int, nargs="*", default=[4095, 4096])
    args = ap.parse_args()
    ms = build_appendix_c()
    for name in MACHINE_NAMES:
        print(f"{name:<18} {state_count(ms[name]):>3} states")
    t0 = time.perf_counter()
    failed = []
    prims = 0
    for n in list(range(args.max_n + 1)) + args.sample:
        r = realize(n, machine=ms["MSipserM2"])
        prims += r.stats.primitives if r.stats else 0
        if not r.passed:
            failed.append(n)
    print(f"failures={failed} primitives={prims} time={time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
