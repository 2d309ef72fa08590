"""Step counts of M2 on 0^n against n, printed as a table.

Powers of two are the slow inputs; for them steps / (n log2 n) settles near 2.
Odd n > 1 rejects after one sweep.
"""
import argparse
import math

from decider_lab.machines import sipser_m2_machine
from decider_lab.tm import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-exp", type=int, default=14)
    args = ap.parse_args()
    m = sipser_m2_machine()
    print(f"{'n':>8} {'steps':>10} {'steps/(n lg n)':>15} decision")
    for e in range(1, args.max_exp + 1):
        for n in (2 ** e - 1, 2 ** e):
            r = run(m, "0" * n)
            ratio = r.steps / (n * math.log2(n)) if n > 1 else float("nan")
            print(f"{n:>8} {r.steps:>10} {ratio:>15.3f} {r.decision}")


if __name__ == "__main__":
    main()
