import numpy as np
import pytest

from markoff_forge.conics import (
    cascade_certify,
    conic_points,
    is_maximal,
    level_census,
    rotation_order,
)
from markoff_forge.modmath import primes_upto
from markoff_forge.orbits import decompose
from markoff_forge.surface import (
    OffSurface,
    ResiduePoint,
    SurfaceSpec,
    enumerate_points,
    point,
)

M0 = SurfaceSpec.markoff(0)


def conic_oracle(p, k, a):
    """All surface points with x_k = a, by looping the two free coordinates."""
    out = set()
    for u in range(p):
        for v in range(p):
            xyz = [0, 0, 0]
            xyz[k - 1] = a
            free = [i for i in range(3) if i != k - 1]
            xyz[free[0]], xyz[free[1]] = u, v
            x1, x2, x3 = xyz
            if (x1 * x1 + x2 * x2 + x3 * x3 - 3 * x1 * x2 * x3) % p == 0:
                out.add((x1, x2, x3))
    return out


def rotate_about_x3(pt, a, p):
    x1, x2, x3 = pt
    return (x2, (3 * a * x2 - x1) % p, x3)


class TestConicPoints:
    def test_level_zero_mod_five(self):
        pts = {q.as_tuple() for q in conic_points(M0, 5, 3, 0)}
        assert pts == conic_oracle(5, 3, 0)

    def test_size_near_p(self):
        n = len(conic_points(M0, 7, 3, 1))
        assert n in (6, 7, 8)
        assert n == 8  # recorded exact value

    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_matches_oracle_everywhere(self, p):
        for k in (1, 2, 3):
            for a in range(p):
                got = {q.as_tuple() for q in conic_points(M0, p, k, a)}
                assert got == conic_oracle(p, k, a), (p, k, a)

    def test_requires_markoff_family(self):
        sphere = SurfaceSpec.make(
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]], (0, 0, 0), -1, 0
        )
        with pytest.raises(ValueError):
            conic_points(sphere, 7, 3, 1)


class TestRotationOrder:
    def test_unipotent_trace_two(self):
        desc = rotation_order(7, 3)  # 3a = 9 = 2 (mod 7)
        assert (desc.kind, desc.matrix_order) == ("parabolic", 7)

    def test_split_example(self):
        desc = rotation_order(7, 2)  # trace 6
        assert (desc.kind, desc.matrix_order) == ("split", 3)

    def test_negated_unipotent(self):
        desc = rotation_order(5, 1)  # trace 3 = -2 (mod 5)
        assert (desc.kind, desc.matrix_order) == ("parabolic", 10)

    def test_census_mod_13(self):
        rows = [
            (desc.level, desc.trace, desc.kind, desc.matrix_order, desc.conic_size, m)
            for desc, m in level_census(M0, 13)
        ]
        assert rows == [
            (0, 0, "split", 4, 25, False),
            (1, 3, "nonsplit", 14, 14, True),
            (2, 6, "nonsplit", 14, 14, True),
            (3, 9, "split", 12, 12, True),
            (4, 12, "split", 3, 12, False),
            (5, 2, "parabolic", 13, 26, False),
            (6, 5, "nonsplit", 14, 14, True),
            (7, 8, "nonsplit", 7, 14, False),
            (8, 11, "parabolic", 26, 26, True),
            (9, 1, "split", 6, 12, False),
            (10, 4, "split", 12, 12, True),
            (11, 7, "nonsplit", 7, 14, False),
            (12, 10, "nonsplit", 7, 14, False),
        ]

    @pytest.mark.parametrize("p", [p for p in primes_upto(97) if p >= 5])
    def test_kinds_partition_levels(self, p):
        census = level_census(M0, p)
        assert len(census) == p
        kinds = [desc.kind for desc, _ in census]
        assert kinds.count("split") + kinds.count("nonsplit") + kinds.count(
            "parabolic"
        ) == p

    @pytest.mark.parametrize("p", [p for p in primes_upto(97) if p >= 5])
    def test_order_divisibility(self, p):
        for desc, _ in level_census(M0, p):
            n = desc.matrix_order
            assert (p * (p - 1) * (p + 1)) % n == 0
            if desc.kind == "split":
                assert (p - 1) % n == 0
            elif desc.kind == "nonsplit":
                assert (p + 1) % n == 0
            else:
                assert n in (p, 2 * p)

    def test_degenerate_levels_flagged_parabolic(self):
        for p in (13, 61):
            for a in range(p):
                if (9 * a * a - 4) % p == 0:
                    assert rotation_order(p, a).kind == "parabolic"

    @pytest.mark.parametrize("p,a", [(13, 1), (13, 4), (29, 7), (61, 11)])
    def test_rotation_permutes_conic(self, p, a):
        conic = {q.as_tuple() for q in conic_points(M0, p, 3, a)}
        assert {rotate_about_x3(t, a, p) for t in conic} == conic


class TestIsMaximal:
    def test_against_direct_cycle_walk(self):
        # spec-level check: maximal iff one cycle covers the whole conic
        for p, a in [(13, 1), (13, 4), (13, 5), (13, 8), (7, 2)]:
            desc = rotation_order(p, a, M0)
            start = next(
                q.as_tuple() for q in conic_points(M0, p, 3, a) if not q.is_origin()
            )
            seen = {start}
            cur = rotate_about_x3(start, a, p)
            while cur != start:
                seen.add(cur)
                cur = rotate_about_x3(cur, a, p)
            assert is_maximal(desc, p) == (len(seen) == desc.conic_size), (p, a)

    def test_unipotent_full_cycle(self):
        # trace -2 level at p=13: matrix order 26 on a conic of 26 points
        assert is_maximal(rotation_order(13, 8), 13)

    def test_short_split_cycle(self):
        # order-3 rotation on a 12-point conic cannot cover it
        assert not is_maximal(rotation_order(13, 4), 13)


class TestCascade:
    def test_maximal_start_single_step(self):
        start = next(
            q for q in conic_points(M0, 13, 3, 1) if not q.is_origin()
        )
        steps = cascade_certify(M0, 13, start)
        assert len(steps) == 1
        assert steps[0].order == 14

    def test_depth_zero_fails_off_maximal(self):
        assert cascade_certify(M0, 13, point(7, 4, 0, 13), 0) is None

    def test_frozen_chain(self):
        steps = cascade_certify(M0, 13, point(7, 4, 0, 13))
        assert [(s.point, s.fixed_index, s.level, s.order) for s in steps] == [
            ((7, 4, 0), 1, 7, 7),
            ((7, 6, 4), 2, 6, 14),
        ]

    def test_orders_strictly_increase(self):
        rng = np.random.default_rng(11)
        pts = enumerate_points(M0, 61)
        keys = pts.keys[pts.keys != 0]
        for key in rng.choice(keys, size=60, replace=False):
            steps = cascade_certify(M0, 61, ResiduePoint.from_key(int(key), 61))
            assert steps is not None
            orders = [s.order for s in steps]
            assert orders == sorted(set(orders))

    def test_endpoints_reach_giant_orbit(self):
        rep = decompose(M0, 61)
        labels = dict(zip(rep.points.keys.tolist(), rep.labels.tolist()))
        giant_label = labels[
            point(*rep.representatives[0], 61).key()
        ]
        rng = np.random.default_rng(3)
        keys = rep.points.keys[rep.points.keys != 0]
        for key in rng.choice(keys, size=80, replace=False):
            steps = cascade_certify(M0, 61, ResiduePoint.from_key(int(key), 61))
            end = point(*steps[-1].point, 61)
            assert labels[end.key()] == giant_label

    def test_off_surface_rejected(self):
        with pytest.raises(OffSurface):
            cascade_certify(M0, 13, point(1, 1, 3, 13))

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            cascade_certify(M0, 13, point(0, 0, 0, 13))
