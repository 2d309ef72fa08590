"""Exhaustive harness sweep of the parentheses machine.

    python3 scripts/sweep_paren.py --max-len 12
"""
import argparse
import time

from decider_lab.verify import verify_paren


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-len", type=int, default=12)
    args = ap.parse_args()
    t0 = time.perf_counter()
    r = verify_paren(args.max_len)
    dt = time.perf_counter() - t0
    print(f"words={r.runs} configs={r.configs} accepted={r.accepted} rejected={r.rejected}")
    print(f"reject routes: {dict(r.reject_routes)}")
    print(f"violations={len(r.violations)} engine_errors={len(r.engine_errors)} time={dt:.1f}s")
    for w, v in r.violations[:10]:
        print(f"  {w!r}: {v}")


if __name__ == "__main__":
    main()
