"""Subgroup solution counting and the root-of-unity equation search.

Two jobs live here.  First, exact counts of pairs (x, y) in H1 x H2
solving x + b/x = y + 1/y over F_p, audited against the trivial bound
2|H2| and the 20*max((d1*d2)^(1/3), d1*d2/p) benchmark.  Second, the
search for triples of roots of unity t_j whose values X_j = t_j + 1/t_j
satisfy the scaled surface relation X1^2 + X2^2 + X3^2 - X1*X2*X3 = 9k,
screened in floats and confirmed in exact cyclotomic arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cyclo import cos_minimal_poly, vanishes_at_primitive_root
from .modmath import factorize, is_probable_prime
from .surface import SurfaceSpec

__all__ = [
    "BadParameter",
    "SubgroupSpec",
    "subgroup",
    "count_eq5",
    "cz_bound",
    "Eq5Violation",
    "eq5_audit",
    "UnitySolution",
    "UnityAudit",
    "unity_search",
    "unity_audit",
    "FiniteOrbitCandidate",
    "finite_orbit_candidates",
]

SCREEN_TOL = 1e-9
MAX_UNITY_ORDER = 120


class BadParameter(ValueError):
    """Raised for parameter values the counting operations exclude."""


@dataclass(frozen=True)
class SubgroupSpec:
    """A cyclic subgroup of F_p*: its order and a generator of that order."""

    p: int
    d: int
    generator: int

    def elements(self) -> list[int]:
        out = [1]
        g = self.generator
        for _ in range(self.d - 1):
            out.append(out[-1] * g % self.p)
        return out


@lru_cache(maxsize=256)
def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    cofactors = [(p - 1) // prime for prime, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, c, p) != 1 for c in cofactors):
            return g
    raise ArithmeticError(f"no primitive root found mod {p}")


def subgroup(p: int, d: int) -> SubgroupSpec:
    """The unique subgroup of F_p* of order d (d must divide p-1)."""
    if not is_probable_prime(p):
        raise BadParameter(f"{p} is not prime")
    if d < 1 or (p - 1) % d != 0:
        raise BadParameter(f"order {d} does not divide {p - 1}")
    return SubgroupSpec(p, d, pow(_primitive_root(p), (p - 1) // d, p))


def count_eq5(p: int, b: int, h1: SubgroupSpec, h2: SubgroupSpec) -> int:
    """Exact number of (x, y) in H1 x H2 with x + b/x = y + 1/y mod p.

    Tabulates the multiset of y-side values once, then probes it with
    each x-side value: O(|H1| + |H2|) work instead of the double loop.
    """
    b %= p
    if b in (0, 1):
        raise BadParameter("b must avoid {0, 1} mod p")
    if h1.p != p or h2.p != p:
        raise BadParameter("subgroup prime does not match p")
    table = [0] * p
    for y in h2.elements():
        table[(y + pow(y, -1, p)) % p] += 1
    total = 0
    for x in h1.elements():
        total += table[(x + b * pow(x, -1, p)) % p]
    return total


def cz_bound(d1: int, d2: int, p: int) -> float:
    """The benchmark bound 20*max((d1*d2)^(1/3), d1*d2/p)."""
    prod = d1 * d2
    return 20.0 * max(prod ** (1.0 / 3.0), prod / p)


@dataclass(frozen=True)
class Eq5Violation:
    p: int
    b: int
    d1: int
    d2: int
    count: int
    bound: float
    kind: str  # "trivial" (count > 2|H2|) or "cz" (count > benchmark)


def eq5_audit(p: int) -> list[Eq5Violation]:
    """Exhaustive audit over all subgroup pairs and all b outside {0,1}.

    Returns every breach of the trivial bound count <= 2|H2| (expected
    none: a fixed y admits at most two x roots) together with any
    exceedance of the benchmark bound, which is recorded for study
    rather than asserted -- its constant regime is asymptotic.
    """
    if not is_probable_prime(p) or p < 3:
        raise BadParameter(f"audit needs an odd prime, got {p}")
    if p > 500:
        raise BadParameter(f"exhaustive audit capped at p <= 500, got {p}")
    divs = [d for d in range(1, p) if (p - 1) % d == 0]
    groups = {d: subgroup(p, d) for d in divs}
    out = []
    for d1 in divs:
        for d2 in divs:
            if d2 > d1:
                continue
            h1, h2 = groups[d1], groups[d2]
            bench = cz_bound(d1, d2, p)
            for b in range(2, p):
                c = count_eq5(p, b, h1, h2)
                if c > 2 * d2:
                    out.append(Eq5Violation(p, b, d1, d2, c, 2 * d2, "trivial"))
                if c > bench:
                    out.append(Eq5Violation(p, b, d1, d2, c, bench, "cz"))
    return out


# --- root-of-unity search -------------------------------------------------


@dataclass(frozen=True)
class UnitySolution:
    """An ordered triple of roots of unity solving the scaled relation.

    t_j is the k_j-th power of a primitive n_j-th root; exponents are
    normalized so gcd(k_j, n_j) = 1 and k_j <= n_j - k_j (inversion
    leaves the value t + 1/t alone).  minimal_polys hold the exact
    algebraic identity of each value; values are float approximations.
    """

    orders: tuple[int, int, int]
    exponents: tuple[int, int, int]
    minimal_polys: tuple[tuple[int, ...], ...]
    values: tuple[float, float, float]
    trivial: bool


@dataclass(frozen=True)
class UnityAudit:
    solutions: tuple[UnitySolution, ...]
    n_values: int
    n_candidates: int
    disagreements: tuple[tuple[tuple[int, int], ...], ...]


@lru_cache(maxsize=8)
def _value_grid(max_order: int):
    """All distinct values 2*cos(2*pi*k/n) for n <= max_order, sorted.

    Canonical (n, k): gcd(k, n) = 1 and 2k <= n, plus the rational
    endpoints (1, 0) -> 2 and (2, 1) -> -2.  Distinct pairs give
    distinct values, so the grid doubles as a value -> pair lookup.
    """
    pairs = [(1, 0), (2, 1)]
    for n in range(3, max_order + 1):
        for k in range(1, n // 2 + 1):
            if 2 * k <= n and math.gcd(k, n) == 1:
                pairs.append((n, k))
    vals = np.array([2.0 * math.cos(2.0 * math.pi * k / n) for n, k in pairs])
    snapped = np.rint(vals)
    vals = np.where(np.abs(vals - snapped) < 1e-12, snapped, vals)
    order = np.argsort(vals, kind="stable")
    return vals[order], [pairs[i] for i in order]


def _surface_constant(family) -> int:
    if isinstance(family, str):
        if family != "markoff":
            raise ValueError(f"unknown family label {family!r}")
        return 0
    if isinstance(family, SurfaceSpec):
        if not family.is_markoff_family():
            raise ValueError(
                "root-of-unity search is defined for the markoff family "
                "(identity quadratic part, zero linear part, delta 3)"
            )
        return 9 * family.markoff_level()
    raise TypeError(f"family must be 'markoff' or a SurfaceSpec, got {family!r}")


def _unity_terms(orders, exponents, constant):
    """Sparse Z[x] exponent->coefficient form of the relation at the triple."""
    n = math.lcm(*orders)
    es = [k * (n // m) % n for m, k in zip(orders, exponents)]
    terms: dict[int, int] = {0: -constant}
    for e in es:
        terms[2 * e % n] = terms.get(2 * e % n, 0) + 1
        terms[-2 * e % n] = terms.get(-2 * e % n, 0) + 1
        terms[0] = terms.get(0, 0) + 2
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                e = (s1 * es[0] + s2 * es[1] + s3 * es[2]) % n
                terms[e] = terms.get(e, 0) - 1
    return terms, n


def unity_audit(family, max_order: int) -> UnityAudit:
    """Search all value triples of root-of-unity orders <= max_order.

    Ordered pairs of grid values determine the third value by a
    quadratic; roots are matched back onto the grid within 1e-9, each
    hit is confirmed exactly in Z[x] mod the lcm-order cyclotomic
    polynomial, and any screen/exact disagreement is reported verbatim.
    """
    if not 1 <= max_order <= MAX_UNITY_ORDER:
        raise ValueError(f"max_order must lie in [1, {MAX_UNITY_ORDER}]")
    c_const = _surface_constant(family)
    vals, pairs = _value_grid(max_order)
    m = len(vals)
    candidates: list[tuple[int, int, int]] = []
    for i in range(m):
        x1 = vals[i]
        prod = x1 * vals
        disc = prod * prod - 4.0 * (x1 * x1 + vals * vals - c_const)
        ok = disc >= -SCREEN_TOL
        sq = np.sqrt(np.maximum(disc, 0.0))
        seen: set[tuple[int, int]] = set()
        for root in ((prod + sq) / 2.0, (prod - sq) / 2.0):
            idx = np.clip(np.searchsorted(vals, root), 0, m - 1)
            for cand in (idx, np.maximum(idx - 1, 0)):
                hit = ok & (np.abs(vals[cand] - root) <= SCREEN_TOL)
                for j in np.flatnonzero(hit):
                    key = (j, int(cand[j]))
                    if key not in seen:
                        seen.add(key)
                        candidates.append((i, j, int(cand[j])))
    solutions = []
    disagreements = []
    for i, j, l in sorted(candidates):
        triple = (pairs[i], pairs[j], pairs[l])
        x1, x2, x3 = vals[i], vals[j], vals[l]
        resid = x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3 - c_const
        screen_ok = abs(resid) <= SCREEN_TOL
        orders = tuple(n for n, _ in triple)
        exponents = tuple(k for _, k in triple)
        terms, lcm_order = _unity_terms(orders, exponents, c_const)
        exact_ok = vanishes_at_primitive_root(terms, lcm_order)
        if screen_ok != exact_ok:
            disagreements.append(triple)
        if exact_ok:
            solutions.append(
                UnitySolution(
                    orders=orders,
                    exponents=exponents,
                    minimal_polys=tuple(cos_minimal_poly(n) for n in orders),
                    values=(float(x1), float(x2), float(x3)),
                    trivial=all(pair == (4, 1) for pair in triple),
                )
            )
    solutions.sort(key=lambda s: (s.orders, s.exponents))
    return UnityAudit(
        solutions=tuple(solutions),
        n_values=m,
        n_candidates=len(candidates),
        disagreements=tuple(disagreements),
    )


def unity_search(family, max_order: int) -> list[UnitySolution]:
    """Exactly-confirmed solutions; see unity_audit for the bookkeeping."""
    return list(unity_audit(family, max_order).solutions)


@dataclass(frozen=True)
class FiniteOrbitCandidate:
    """A fixed-structure surface point built from a unity solution.

    Coordinates are x_j = (t_j + 1/t_j)/3, reported as floats alongside
    the integer minimal polynomial of each coordinate (primitive, the
    scaled image of the value's cosine polynomial).
    """

    point: tuple[float, float, float]
    minimal_polys: tuple[tuple[int, ...], ...]
    solution: UnitySolution

    @property
    def is_origin(self) -> bool:
        return self.solution.trivial


def _scale_root_poly(coeffs: tuple[int, ...], m: int) -> tuple[int, ...]:
    """Minimal polynomial of r/m given that of r: substitute m*y, primitivize."""
    scaled = [c * m**i for i, c in enumerate(coeffs)]
    g = 0
    for c in scaled:
        g = math.gcd(g, c)
    return tuple(c // g for c in scaled)


def finite_orbit_candidates(spec: SurfaceSpec, max_order: int) -> list[FiniteOrbitCandidate]:
    """Surface points over Qbar with all 2*cos coordinates, exactly verified.

    Each unity solution divides by 3 back to the surface's own chart.
    Surface membership is re-checked in exact cyclotomic arithmetic (a
    second pass over the very identity the search confirmed).
    """
    if not isinstance(spec, SurfaceSpec) or not spec.is_markoff_family():
        raise ValueError("finite-orbit candidates need a markoff-family surface")
    out = []
    for sol in unity_search(spec, max_order):
        terms, lcm_order = _unity_terms(sol.orders, sol.exponents, 9 * spec.markoff_level())
        if not vanishes_at_primitive_root(terms, lcm_order):
            raise ArithmeticError(f"candidate {sol} failed exact re-verification")
        out.append(
            FiniteOrbitCandidate(
                point=tuple(v / 3.0 for v in sol.values),
                minimal_polys=tuple(_scale_root_poly(mp, 3) for mp in sol.minimal_polys),
                solution=sol,
            )
        )
    return out
