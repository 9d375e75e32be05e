"""Conic sections of markoff-family surfaces and their rotations.

Fixing one coordinate x_k = a cuts the surface in a conic, and the
composite move "transpose then reflect" acts on the remaining pair as
the linear map (u, v) -> (v, 3a v - u), the companion matrix of
z^2 - 3a z + 1.  Cycle lengths of that map classify by the discriminant
9a^2 - 4 mod p, which gives constant-time order lookups; the cascade
search below exploits that to certify that a point connects, through
conics of strictly growing rotation order, to a conic covered by a
single rotation cycle.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .modmath import eigen_order, is_probable_prime, order_context
from .surface import (
    OffSurface,
    ResiduePoint,
    SurfaceSpec,
    _sqrt_table,
    enumerate_points,
    evaluate,
)


@dataclass(frozen=True)
class RotationDescriptor:
    """Rotation data for one conic x_fixed = level of a markoff-family surface."""

    fixed_index: int
    level: int
    trace: int
    kind: str
    matrix_order: int
    conic_size: int
    surface_k: int = 0


@dataclass(frozen=True)
class CascadeStep:
    point: tuple[int, int, int]
    fixed_index: int
    level: int
    order: int


def _require_markoff_family(spec: SurfaceSpec) -> int:
    if not spec.is_markoff_family():
        raise ValueError("conic rotations are defined for markoff-family surfaces only")
    return spec.markoff_level()


def conic_points(spec: SurfaceSpec, p: int, k: int, a: int) -> list[ResiduePoint]:
    """All surface points mod p with coordinate k pinned to the level a."""
    kk = _require_markoff_family(spec)
    if k not in (1, 2, 3):
        raise ValueError("fixed coordinate index must be 1, 2 or 3")
    a %= p
    rt = _sqrt_table(p)
    inv2 = pow(2, -1, p)
    u = np.arange(p, dtype=np.int64)
    # quadratic in v: v^2 - 3a u v + (u^2 + a^2 - kk) = 0
    b = (-3 * a % p) * u % p
    c = (u * u + (a * a - kk)) % p
    disc = (b * b - 4 * c) % p
    r = rt[disc]
    out = []
    ii, jj = [i for i in (1, 2, 3) if i != k]
    for uu, bb, rr in zip(u.tolist(), b.tolist(), r.tolist()):
        if rr < 0:
            continue
        roots = {(-bb + rr) * inv2 % p, (-bb - rr) * inv2 % p}
        for v in sorted(roots):
            coords = {k: a, ii: uu, jj: v}
            out.append(ResiduePoint(coords[1], coords[2], coords[3], p))
    return sorted(out, key=lambda pt: pt.key())


class _RotationTables:
    """Per-(surface, prime) tables: rotation kind/order and conic size by level."""

    def __init__(self, spec: SurfaceSpec, p: int):
        self.spec = spec
        self.p = p
        self.k = _require_markoff_family(spec)
        ctx = order_context(p)
        self.kinds: list[str] = []
        self.orders: list[int] = []
        for a in range(p):
            kind, order = eigen_order(3 * a, p, ctx)
            self.kinds.append(kind)
            self.orders.append(order)
        # conic sizes are the same for each of the three axes by symmetry
        self.sizes = enumerate_points(spec, p).coordinate_counts(3)

    def cycle_length(self, u: int, v: int, a: int) -> int:
        """Cycle length of conic point (u, v) under (u, v) -> (v, 3a v - u)."""
        p = self.p
        if u == 0 and v == 0:
            return 1
        kind = self.kinds[a]
        if kind != "parabolic":
            return self.orders[a]
        s = 3 * a % p
        if s == 2:
            return 1 if (v == u and (s * v - u) % p == v) else p
        # s = -2: order 2 on the flip line, 2p off it
        u2, v2 = v, (s * v - u) % p
        u3, v3 = v2, (s * v2 - u2) % p
        return 2 if (u3, v3) == (u, v) else 2 * p


@functools.lru_cache(maxsize=64)
def rotation_tables(spec: SurfaceSpec, p: int) -> _RotationTables:
    if p < 5 or not is_probable_prime(p):
        raise ValueError(f"rotations need a prime p >= 5, got {p}")
    return _RotationTables(spec, p)


def rotation_order(p: int, a: int, spec: SurfaceSpec | None = None, fixed_index: int = 3) -> RotationDescriptor:
    """Descriptor of the rotation on the conic x_fixed = a mod p.

    spec defaults to the classical Markoff surface.  matrix_order is the
    exact order of [[0, 1], [-1, 3a]] mod p; the induced permutation of
    the conic has order dividing it.
    """
    if spec is None:
        spec = SurfaceSpec.markoff(0)
    tables = rotation_tables(spec, p)
    a %= p
    return RotationDescriptor(
        fixed_index=fixed_index,
        level=a,
        trace=3 * a % p,
        kind=tables.kinds[a],
        matrix_order=tables.orders[a],
        conic_size=int(tables.sizes[a]),
        surface_k=tables.k,
    )


def _rotation_cycle(u: int, v: int, a: int, p: int) -> list[tuple[int, int]]:
    """The forward cycle of (u, v) under (u, v) -> (v, 3a v - u)."""
    s = 3 * a % p
    cycle = [(u, v)]
    cu, cv = v, (s * v - u) % p
    while (cu, cv) != (u, v):
        cycle.append((cu, cv))
        cu, cv = cv, (s * cv - cu) % p
        if len(cycle) > 2 * p + 2:
            raise RuntimeError("rotation cycle failed to close")
    return cycle


def is_maximal(desc: RotationDescriptor, p: int) -> bool:
    """True when one rotation cycle covers the whole conic.

    Checked directly: iterate the map from the smallest-key conic point
    and compare the cycle length with conic_size.
    """
    spec = SurfaceSpec.markoff(desc.surface_k)
    pts = conic_points(spec, p, desc.fixed_index, desc.level)
    if not pts:
        return False
    first = pts[0]
    others = [i for i in (1, 2, 3) if i != desc.fixed_index]
    coords = first.as_tuple()
    u, v = coords[others[0] - 1], coords[others[1] - 1]
    return len(_rotation_cycle(u, v, desc.level, p)) == desc.conic_size


def level_census(spec: SurfaceSpec, p: int) -> list[tuple[RotationDescriptor, bool]]:
    """Rotation descriptor and maximality flag for every level mod p."""
    return [(d, is_maximal(d, p)) for d in (rotation_order(p, a, spec) for a in range(p))]


def _moving_pair(xyz: tuple[int, int, int], k: int) -> tuple[int, int]:
    others = [i for i in (1, 2, 3) if i != k]
    return xyz[others[0] - 1], xyz[others[1] - 1]


def _assemble(xyz: tuple[int, int, int], k: int, pair: tuple[int, int]) -> tuple[int, int, int]:
    others = [i for i in (1, 2, 3) if i != k]
    coords = {k: xyz[k - 1], others[0]: pair[0], others[1]: pair[1]}
    return (coords[1], coords[2], coords[3])


def cascade_certify(
    spec: SurfaceSpec, p: int, start: ResiduePoint, depth_limit: int = 24
) -> list[CascadeStep] | None:
    """Chain from start to a maximal conic through strictly growing orders.

    Search policy: breadth-first over the current rotation's cycle (the
    two neighbours at each distance visited smallest packed key first),
    evaluating the two other rotations at every visited point and moving
    greedily to the first strict improvement, ties to the larger order
    and then the smaller coordinate index.  Each chain element records
    the point where the rotation was adopted, the fixed coordinate, its
    level and the cycle length there.  Returns None when depth_limit
    moves pass without reaching a cycle that covers its whole conic.
    """
    tables = rotation_tables(spec, p)
    if evaluate(spec, start) != 0:
        raise OffSurface(f"{start.as_tuple()} is not on {spec.label} mod {p}")
    if start.is_origin():
        raise ValueError("cascade starts must be nonzero points")

    def order_at(xyz: tuple[int, int, int], k: int) -> int:
        u, v = _moving_pair(xyz, k)
        return tables.cycle_length(u, v, xyz[k - 1])

    def best_other(xyz: tuple[int, int, int], exclude: int, floor: int):
        best = None
        for k in (1, 2, 3):
            if k == exclude:
                continue
            t = order_at(xyz, k)
            if t > floor and (best is None or t > best[0]):
                best = (t, k)
        return best

    xyz = start.as_tuple()
    first = max(((order_at(xyz, k), -k) for k in (1, 2, 3)))
    t, k = first[0], -first[1]
    chain = [CascadeStep(point=xyz, fixed_index=k, level=xyz[k - 1], order=t)]
    for _ in range(depth_limit + 1):
        step = chain[-1]
        if step.order == int(tables.sizes[step.level]):
            return chain
        if len(chain) - 1 >= depth_limit:
            return None
        # breadth-first over the current cycle, nearest points first
        a = step.level
        u, v = _moving_pair(step.point, step.fixed_index)
        cycle = _rotation_cycle(u, v, a, p)
        n = len(cycle)
        visit = [cycle[0]]
        for d in range(1, n // 2 + 1):
            pair = {cycle[d], cycle[n - d]}
            visit.extend(
                sorted(pair, key=lambda uv: _pair_key(step.point, step.fixed_index, uv, p))
            )
        moved = False
        for uv in visit:
            cand_xyz = _assemble(step.point, step.fixed_index, uv)
            found = best_other(cand_xyz, step.fixed_index, step.order)
            if found:
                t2, k2 = found
                chain.append(
                    CascadeStep(point=cand_xyz, fixed_index=k2, level=cand_xyz[k2 - 1], order=t2)
                )
                moved = True
                break
        if not moved:
            return None
    return None


def _pair_key(xyz: tuple[int, int, int], k: int, pair: tuple[int, int], p: int) -> int:
    c = _assemble(xyz, k, pair)
    return c[0] + p * (c[1] + p * c[2])
