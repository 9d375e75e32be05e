"""Orbit decomposition of surface point sets under the generator action.

The primary route is a breadth-first sweep over packed keys with all
generator images computed as vectorized array maps; a dict-based
union-find provides an independent second route for cross-checking on
small moduli.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .modmath import modulus
from .surface import (
    OffSurface,
    PointSet,
    ResiduePoint,
    SurfaceSpec,
    _SpecModQ,
    _apply_generator_arrays,
    admissible_generators,
    enumerate_points,
    pack_keys,
    unpack_keys,
)


@dataclass
class OrbitReport:
    """Result of one orbit decomposition.

    orbit_sizes is descending; representatives[i] is the smallest-key
    point of the orbit counted by orbit_sizes[i].  conjecture1 records
    whether the decomposition matches the expected two-orbit picture
    (fixed origin plus one giant orbit) when the origin is on the
    surface, or a single orbit when it is not.
    """

    q: int
    surface: str
    generator_set: str
    n_points: int
    orbit_sizes: list[int]
    representatives: list[tuple[int, int, int]]
    conjecture1: bool
    giant_fraction: float
    min_orbit: int
    points: PointSet | None = field(default=None, repr=False, compare=False)
    labels: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def n_orbits(self) -> int:
        return len(self.orbit_sizes)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "surface": self.surface,
            "generator_set": self.generator_set,
            "n_points": self.n_points,
            "n_orbits": self.n_orbits,
            "orbit_sizes": self.orbit_sizes,
            "representatives": [list(r) for r in self.representatives],
            "conjecture1": self.conjecture1,
            "giant_fraction": self.giant_fraction,
            "min_orbit": self.min_orbit,
        }

    def summary_row(self) -> dict:
        return {
            "q": self.q,
            "n_points": self.n_points,
            "n_orbits": self.n_orbits,
            "largest": max(self.orbit_sizes) if self.orbit_sizes else 0,
            "smallest": min(self.orbit_sizes) if self.orbit_sizes else 0,
            "conjecture1": self.conjecture1,
        }


def _bfs_labels(points: PointSet, sm: _SpecModQ, gens: tuple[str, ...]) -> tuple[np.ndarray, list[int]]:
    """Label every point with its orbit id; also return seed indices.

    Seeds are scanned in key order, so each orbit id's seed is the
    smallest packed key in that orbit.
    """
    n = len(points)
    labels = np.full(n, -1, dtype=np.int32)
    seeds: list[int] = []
    cursor = 0
    while True:
        while cursor < n and labels[cursor] >= 0:
            cursor += 1
        if cursor >= n:
            break
        oid = len(seeds)
        seeds.append(cursor)
        labels[cursor] = oid
        frontier = np.array([cursor], dtype=np.int64)
        while len(frontier):
            x1, x2, x3 = unpack_keys(points.keys[frontier], points.q)
            images = []
            for g in gens:
                y1, y2, y3 = _apply_generator_arrays(sm, g, x1, x2, x3)
                images.append(pack_keys(y1, y2, y3, points.q))
            idx = points.index_of_keys(np.unique(np.concatenate(images)))
            fresh = idx[labels[idx] < 0]
            labels[fresh] = oid
            frontier = fresh
    return labels, seeds


def decompose(spec: SurfaceSpec, q: int, generators: tuple[str, ...] | None = None) -> OrbitReport:
    """Orbit decomposition of the surface point set mod q.

    generators defaults to every admissible generator; passing a
    permutation of them changes nothing but the work order.
    """
    points = enumerate_points(spec, q)
    gens = generators if generators is not None else admissible_generators(spec, q)
    sm = _SpecModQ(spec, q)
    labels, seeds = _bfs_labels(points, sm, gens)
    counts = np.bincount(labels, minlength=len(seeds)).astype(np.int64)
    order = sorted(range(len(seeds)), key=lambda i: (-int(counts[i]), int(points.keys[seeds[i]])))
    sizes = [int(counts[i]) for i in order]
    reps = [ResiduePoint.from_key(int(points.keys[seeds[i]]), q).as_tuple() for i in order]

    # The origin packs to key 0, so when present it is orbit seed material:
    # its orbit's representative is (0, 0, 0).
    origin_on = (0, 0, 0) in points
    origin_singleton = origin_on and sizes[reps.index((0, 0, 0))] == 1 if origin_on else False
    if origin_singleton:
        rest = [s for s, r in zip(sizes, reps) if r != (0, 0, 0)]
        denom = len(points) - 1
    else:
        rest = list(sizes)
        denom = len(points)
    if origin_on:
        conjecture1 = origin_singleton and len(sizes) == 2
    else:
        conjecture1 = len(sizes) == 1
    report = OrbitReport(
        q=q,
        surface=spec.label,
        generator_set=",".join(gens),
        n_points=len(points),
        orbit_sizes=sizes,
        representatives=reps,
        conjecture1=conjecture1,
        giant_fraction=(max(rest) / denom) if rest and denom else 0.0,
        min_orbit=min(rest) if rest else 0,
        points=points,
        labels=labels,
    )
    return report


class _UnionFind:
    """Plain dict-backed union-find (union by rank, path compression)."""

    def __init__(self):
        self.parent = {}
        self.rank = {}

    def find(self, x):
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        self.rank.setdefault(ra, 0)
        self.rank.setdefault(rb, 0)
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def decompose_union_find(spec: SurfaceSpec, q: int) -> list[int]:
    """Orbit sizes (descending) by union-find over all generator edges.

    Independent of the BFS route; meant for cross-checks on small q.
    """
    points = enumerate_points(spec, q)
    gens = admissible_generators(spec, q)
    sm = _SpecModQ(spec, q)
    uf = _UnionFind()
    x1, x2, x3 = unpack_keys(points.keys, q)
    for g in gens:
        y1, y2, y3 = _apply_generator_arrays(sm, g, x1, x2, x3)
        for a, b in zip(points.keys.tolist(), pack_keys(y1, y2, y3, q).tolist()):
            uf.union(a, b)
    sizes: dict[int, int] = {}
    for k in points.keys.tolist():
        root = uf.find(k)
        sizes[root] = sizes.get(root, 0) + 1
    return sorted(sizes.values(), reverse=True)


@functools.lru_cache(maxsize=8)
def _cached_decompose(spec: SurfaceSpec, q: int) -> OrbitReport:
    return decompose(spec, q)


def orbit_of(spec: SurfaceSpec, q: int, pt: ResiduePoint) -> tuple[int, int]:
    """(orbit id, orbit size) of a surface point, from a cached decomposition.

    Orbit ids follow the descending-size order of the cached report.
    """
    report = _cached_decompose(spec, q)
    points, labels = report.points, report.labels
    if pt not in points:
        raise OffSurface(f"{pt.as_tuple()} is not on the surface mod {q}")
    idx = int(np.searchsorted(points.keys, pt.key()))
    raw = int(labels[idx])
    # keys are sorted, so the first index carrying this label is the seed,
    # i.e. the orbit's representative
    first = int(np.argmax(labels == raw))
    rep = ResiduePoint.from_key(int(points.keys[first]), q).as_tuple()
    rank = report.representatives.index(rep)
    return rank, report.orbit_sizes[rank]


@dataclass(frozen=True)
class Theorem1Stats:
    giant_deficit: int
    min_over_logp: float


def theorem1_stats(report: OrbitReport, p: int) -> Theorem1Stats:
    """Giant-orbit deficit and the smallest orbit scaled by log p.

    Requires a prime modulus p >= 5 matching the report.
    """
    if p != report.q:
        raise ValueError("p does not match the report's modulus")
    if p < 5 or not modulus(p).is_prime:
        raise ValueError(f"theorem1_stats needs a prime p >= 5, got {p}")
    pairs = list(zip(report.orbit_sizes, [tuple(r) for r in report.representatives]))
    origin_singleton = (1, (0, 0, 0)) in pairs
    if origin_singleton:
        rest = [s for s, r in pairs if r != (0, 0, 0)]
        n_star = report.n_points - 1
    else:
        rest = [s for s, _ in pairs]
        n_star = report.n_points
    largest = max(rest) if rest else 0
    smallest = min(rest) if rest else 0
    return Theorem1Stats(
        giant_deficit=n_star - largest,
        min_over_logp=smallest / math.log(p),
    )
