#!/usr/bin/env python3
"""Tree census ladder: growth constant and primality thinning.

Counts fundamental triples below T = 10^3, 10^6, ..., 10^30 and prints
N(T)/(log T)^2, which should level off, next to the fraction of tree
maxima that are prime, which should fall.
"""

import argparse
import math

from markoff_forge import enumerate_triples, is_probable_prime, zagier_fit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exponent", type=int, default=30)
    ap.add_argument("--step", type=int, default=3)
    args = ap.parse_args()

    thresholds = [10**e for e in range(3, args.max_exponent + 1, args.step)]
    rows = zagier_fit(thresholds)
    triples = enumerate_triples(thresholds[-1])

    print(f"{'T':>7} {'N(T)':>6} {'distinct':>9} {'c_hat':>9} {'prime/total':>12}")
    prev = None
    for row in rows:
        maxima = {t.x3 for t in triples if t.x3 <= row.limit}
        n_prime = sum(1 for m in maxima if is_probable_prime(m))
        ratio = n_prime / row.n_triples
        drift = "" if prev is None else f"  ({100 * (row.c_hat / prev - 1):+.2f}%)"
        print(
            f"10^{int(math.log10(row.limit)):<4} {row.n_triples:>6} {row.n_distinct:>9} "
            f"{row.c_hat:>9.5f} {n_prime:>5}/{row.n_triples:<6}{drift}"
        )
        prev = row.c_hat
    last, second = rows[-1].c_hat, rows[-2].c_hat
    print(f"\nc_hat drift over the last rung: {100 * abs(last - second) / second:.3f}%")


if __name__ == "__main__":
    main()
