#!/usr/bin/env python3
"""Census of conic rotation orders: how often is a level maximal?

Walks primes up to a bound, classifies every level's rotation (split /
nonsplit / parabolic), checks the order always divides p(p-1)(p+1),
and tallies how many levels reach a full cycle around their conic.
"""

import sys

from markoff_forge import SurfaceSpec, level_census, primes_upto

STOP = int(sys.argv[1]) if len(sys.argv) > 1 else 500


def main() -> None:
    spec = SurfaceSpec.markoff(0)
    print(f"{'p':>5} {'levels':>7} {'maximal':>8} {'split':>6} {'nonsplit':>9} {'parab':>6}")
    worst = (0.0, None)
    for p in primes_upto(STOP):
        if p < 5:
            continue
        census = level_census(spec, p)
        bound = p * (p - 1) * (p + 1)
        kinds = {"split": 0, "nonsplit": 0, "parabolic": 0}
        n_max = 0
        for desc, maximal in census:
            assert bound % desc.matrix_order == 0, (p, desc)
            kinds[desc.kind] += 1
            n_max += maximal
        frac = n_max / len(census)
        if worst[1] is None or frac < worst[0]:
            worst = (frac, p)
        print(
            f"{p:>5} {len(census):>7} {n_max:>8} "
            f"{kinds['split']:>6} {kinds['nonsplit']:>9} {kinds['parabolic']:>6}"
        )
    print(f"\norder | p(p-1)(p+1) held at every level of every prime <= {STOP}")
    print(f"lowest maximal fraction: {worst[0]:.3f} at p={worst[1]}")


if __name__ == "__main__":
    main()
