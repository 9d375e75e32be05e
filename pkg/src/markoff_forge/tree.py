"""Markoff triples over Z: tree enumeration and the classical checks.

The tree is walked non-backtracking from (1, 1, 1): above the first two
levels every sorted triple has distinct entries and exactly two forward
moves (replace the smallest or the middle coordinate), so each triple is
produced once.  Everything downstream -- the number census, growth fit,
uniqueness and congruence checks, reduction cover, primality census --
consumes that enumeration.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations

from .modmath import is_probable_prime
from .surface import SurfaceSpec, enumerate_points

__all__ = [
    "BadPrime",
    "TripleZ",
    "CensusRow",
    "enumerate_triples",
    "markoff_numbers",
    "zagier_fit",
    "check_uniqueness",
    "congruence_check",
    "reduction_cover",
    "primality_census",
]

SIGN_PATTERNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))


class BadPrime(ValueError):
    """Raised when a congruence check is asked for an excluded prime."""


@dataclass(frozen=True)
class TripleZ:
    """A sorted positive Markoff triple with its tree parentage."""

    x1: int
    x2: int
    x3: int
    parent_move: str = field(default="root", compare=False)

    def __post_init__(self):
        if not 0 < self.x1 <= self.x2 <= self.x3:
            raise ValueError(f"triple must be sorted positive, got {self.as_tuple()}")
        a, b, c = self.x1, self.x2, self.x3
        if a * a + b * b + c * c != 3 * a * b * c:
            raise ValueError(f"{self.as_tuple()} is not a Markoff triple")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x1, self.x2, self.x3)


def enumerate_triples(limit: int) -> list[TripleZ]:
    """All Markoff triples with max coordinate <= limit, each once, sorted.

    The first two levels are special-cased: (1,1,1) has a single distinct
    child and (1,1,2)'s two forward moves coincide.  From (1,2,5) on the
    tree is strictly binary and never revisits a sorted triple.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    out = []
    if limit >= 1:
        out.append(TripleZ(1, 1, 1, "root"))
    if limit >= 2:
        out.append(TripleZ(1, 1, 2, "lo"))
    if limit >= 5:
        stack = [(1, 2, 5, "lo")]
        while stack:
            a, b, c, move = stack.pop()
            out.append(TripleZ(a, b, c, move))
            lo = 3 * b * c - a  # replace the smallest coordinate
            if lo <= limit:
                stack.append((b, c, lo, "lo"))
            mid = 3 * a * c - b  # replace the middle coordinate
            if mid <= limit:
                stack.append((a, c, mid, "mid"))
    out.sort(key=TripleZ.as_tuple)
    return out


def markoff_numbers(limit: int) -> tuple[set[int], Counter]:
    """(members <= limit, multiset of largest coordinates <= limit).

    Members are collected from every coordinate of triples enumerated out
    to 3*limit^2 -- overkill, since each member is already the maximum of
    the triple that created it, but the margin makes correctness obvious
    at negligible cost (the tree's size is quadratic in log).
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    members: set[int] = set()
    sequence: Counter = Counter()
    for t in enumerate_triples(3 * limit * limit):
        for c in (t.x1, t.x2, t.x3):
            if c <= limit:
                members.add(c)
        if t.x3 <= limit:
            sequence[t.x3] += 1
    return members, sequence


@dataclass(frozen=True)
class CensusRow:
    """One threshold's worth of counting: triples, members, primes, growth."""

    limit: int
    n_triples: int
    n_distinct: int
    n_prime: int | None
    c_hat: float


def _census(limit: int, triples: list[TripleZ]) -> CensusRow:
    sel = [t for t in triples if t.x3 <= limit]
    distinct = {c for t in sel for c in (t.x1, t.x2, t.x3)}
    return CensusRow(
        limit=limit,
        n_triples=len(sel),
        n_distinct=len(distinct),
        n_prime=None,
        c_hat=len(sel) / math.log(limit) ** 2,
    )


def zagier_fit(thresholds: list[int]) -> list[CensusRow]:
    """Census rows at increasing thresholds; c_hat should stabilize."""
    ts = [int(t) for t in thresholds]
    if not ts or any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
        raise ValueError("thresholds must be strictly increasing")
    if ts[0] < 2:
        raise ValueError("thresholds start at 2 (log must be positive)")
    if ts[-1] > 10**300:
        raise ValueError("thresholds capped at 1e300")
    triples = enumerate_triples(ts[-1])
    return [_census(t, triples) for t in ts]


def check_uniqueness(limit: int) -> list[int]:
    """Numbers appearing as the largest coordinate of two or more triples.

    The Frobenius uniqueness conjecture says this list is empty; any
    entry would be a discovery and is returned verbatim.
    """
    counts = Counter(t.x3 for t in enumerate_triples(limit))
    return sorted(m for m, c in counts.items() if c > 1)


def congruence_check(limit: int, p: int) -> list[int]:
    """Members <= limit falling in the forbidden classes {0, +-2/3} mod p.

    Defined for primes p = 3 (mod 4), p != 3; expected empty.
    """
    if p == 3 or p % 4 != 3 or not is_probable_prime(p):
        raise BadPrime(f"need a prime p = 3 (mod 4), p != 3; got {p}")
    inv3 = pow(3, -1, p)
    forbidden = {0, 2 * inv3 % p, -2 * inv3 % p}
    members, _ = markoff_numbers(limit)
    return sorted(m for m in members if m % p in forbidden)


def reduction_cover(limit: int, q: int) -> float:
    """Fraction of nonzero mod-q surface points hit by reduced triples.

    Each enumerated triple contributes its 6 coordinate orders times the
    4 even sign patterns (epsilon_1*epsilon_2*epsilon_3 = 1), all of
    which stay on the surface.  Full cover (fraction 1.0) is the strong
    approximation statement at this threshold.
    """
    spec = SurfaceSpec.markoff(0)
    points = enumerate_points(spec, q)
    n_star = len(points) - 1  # the origin is always on this surface
    hit: set[int] = set()
    for t in enumerate_triples(limit):
        reduced = (t.x1 % q, t.x2 % q, t.x3 % q)
        for perm in permutations(reduced):
            for signs in SIGN_PATTERNS:
                y1 = signs[0] * perm[0] % q
                y2 = signs[1] * perm[1] % q
                y3 = signs[2] * perm[2] % q
                key = y1 + q * (y2 + q * y3)
                if key:
                    hit.add(key)
    return len(hit) / n_star


def primality_census(limit: int) -> CensusRow:
    """The member census with the prime count filled in."""
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    members, sequence = markoff_numbers(limit)
    return CensusRow(
        limit=limit,
        n_triples=sum(sequence.values()),
        n_distinct=len(members),
        n_prime=sum(1 for m in members if is_probable_prime(m)),
        c_hat=sum(sequence.values()) / math.log(limit) ** 2,
    )
