"""Monitor sweep of M2 over 0^n, with optional large samples.

    python3 scripts/sweep_m2.py --max-n 512 --sample 4096 16384
"""
import argparse
import time

from decider_lab.verify import verify_m2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=512)
    ap.add_argument("--sample", type=int, nargs="*", default=[])
    ap.add_argument("--reference", action="store_true", help="literal O(n) checker (small n only)")
    args = ap.parse_args()
    t0 = time.perf_counter()
    r = verify_m2(args.max_n, args.sample, reference=args.reference)
    dt = time.perf_counter() - t0
    print(f"runs={r.runs} configs={r.configs} accepted={r.accepted} rejected={r.rejected}")
    print(f"lemma firings: {dict(r.lemmas)}")
    print(f"runs firing each lemma: {dict(r.lemma_runs)}")
    print(f"violations={len(r.violations)} engine_errors={len(r.engine_errors)} time={dt:.1f}s")


if __name__ == "__main__":
    main()
