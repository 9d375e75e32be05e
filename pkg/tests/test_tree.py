import math

import pytest
from hypothesis import given, settings, strategies as st

from markoff_forge.modmath import is_probable_prime
from markoff_forge.tree import (
    SIGN_PATTERNS,
    BadPrime,
    TripleZ,
    check_uniqueness,
    congruence_check,
    enumerate_triples,
    markoff_numbers,
    primality_census,
    reduction_cover,
    zagier_fit,
)

TRIPLES_200 = [
    (1, 1, 1),
    (1, 1, 2),
    (1, 2, 5),
    (1, 5, 13),
    (1, 13, 34),
    (1, 34, 89),
    (2, 5, 29),
    (2, 29, 169),
    (5, 13, 194),
]


def brute_force_triples(limit):
    """Solve c^2 - 3ab c + (a^2 + b^2) = 0 over all sorted pairs a <= b."""
    found = set()
    for a in range(1, limit + 1):
        for b in range(a, limit + 1):
            disc = 9 * a * a * b * b - 4 * (a * a + b * b)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for c2 in (3 * a * b - r, 3 * a * b + r):
                if c2 % 2 == 0 and b <= c2 // 2 <= limit:
                    found.add((a, b, c2 // 2))
    return sorted(found)


class TestTripleZ:
    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            TripleZ(2, 1, 1)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            TripleZ(0, 0, 0)

    def test_rejects_off_equation(self):
        with pytest.raises(ValueError):
            TripleZ(1, 1, 3)

    def test_parent_move_ignored_in_equality(self):
        assert TripleZ(1, 2, 5, "lo") == TripleZ(1, 2, 5, "mid")


class TestEnumeration:
    def test_first_three(self):
        assert [t.as_tuple() for t in enumerate_triples(10)] == [
            (1, 1, 1),
            (1, 1, 2),
            (1, 2, 5),
        ]

    def test_up_to_200(self):
        assert [t.as_tuple() for t in enumerate_triples(200)] == TRIPLES_200

    def test_matches_quadratic_solver(self):
        assert [t.as_tuple() for t in enumerate_triples(200)] == brute_force_triples(
            200
        )

    def test_rejects_zero_limit(self):
        with pytest.raises(ValueError):
            enumerate_triples(0)

    def test_count_at_million(self):
        assert len(enumerate_triples(10**6)) == 40

    def test_no_duplicates_deep(self):
        triples = [t.as_tuple() for t in enumerate_triples(10**9)]
        assert len(triples) == len(set(triples))

    @settings(max_examples=25)
    @given(st.integers(min_value=1, max_value=2000))
    def test_prefix_of_larger_enumeration(self, limit):
        big = enumerate_triples(4000)
        assert enumerate_triples(limit) == [t for t in big if t.x3 <= limit]

    def test_parent_moves_labelled(self):
        moves = {t.parent_move for t in enumerate_triples(1000)}
        assert moves == {"root", "lo", "mid"}


class TestMarkoffNumbers:
    def test_members_to_200(self):
        members, _ = markoff_numbers(200)
        assert sorted(members) == [1, 2, 5, 13, 29, 34, 89, 169, 194]

    def test_one_has_multiplicity_one(self):
        _, seq = markoff_numbers(200)
        assert seq[1] == 1

    def test_sequence_counts_max_coordinates(self):
        _, seq = markoff_numbers(200)
        assert sum(seq.values()) == len(TRIPLES_200)
        assert seq[5] == 1 and seq[13] == 1

    def test_every_member_is_some_maximum(self):
        members, seq = markoff_numbers(10**4)
        assert members == set(seq)


class TestZagierFit:
    def test_rejects_bad_thresholds(self):
        with pytest.raises(ValueError):
            zagier_fit([])
        with pytest.raises(ValueError):
            zagier_fit([10, 10])
        with pytest.raises(ValueError):
            zagier_fit([100, 10])
        with pytest.raises(ValueError):
            zagier_fit([1, 10])
        with pytest.raises(ValueError):
            zagier_fit([10**301])

    def test_c_hat_at_ten(self):
        (row,) = zagier_fit([10])
        assert row.n_triples == 3
        assert math.isclose(row.c_hat, 3.0 / math.log(10) ** 2, rel_tol=1e-12)

    def test_row_invariants(self):
        rows = zagier_fit([10, 10**3, 10**6, 10**9])
        assert [r.limit for r in rows] == [10, 10**3, 10**6, 10**9]
        for row in rows:
            assert row.n_distinct <= row.n_triples
            assert row.n_prime is None
        assert [r.n_triples for r in rows] == sorted(r.n_triples for r in rows)


class TestUniqueness:
    def test_no_repeats_to_200(self):
        assert check_uniqueness(200) == []

    def test_no_repeats_to_1e12(self):
        assert check_uniqueness(10**12) == []

    def test_five_appears_once(self):
        _, seq = markoff_numbers(10**12)
        assert seq[5] == 1


class TestCongruence:
    @pytest.mark.parametrize("p", [2, 3, 5, 13, 49])
    def test_rejects_excluded_moduli(self, p):
        with pytest.raises(BadPrime):
            congruence_check(100, p)

    @pytest.mark.parametrize("p", [7, 11, 23])
    def test_no_forbidden_members(self, p):
        assert congruence_check(10**6, p) == []

    def test_forbidden_classes_mod_seven(self):
        # 1/3 = 5 mod 7, so the excluded classes are {0, 3, 4}.
        members, _ = markoff_numbers(10**6)
        assert {m % 7 for m in members} <= {1, 2, 5, 6}


class TestReductionCover:
    def test_tiny_threshold_mod_three(self):
        assert reduction_cover(10, 3) == 1.0

    def test_million_mod_five(self):
        assert reduction_cover(10**6, 5) == 1.0

    def test_root_triple_only(self):
        # (1,1,1) under the 4 sign patterns gives 4 of the 40 nonzero points.
        assert reduction_cover(1, 5) == pytest.approx(0.1)

    def test_million_mod_29_partial(self):
        assert reduction_cover(10**6, 29) == pytest.approx(0.23706896551724138)

    def test_monotone_in_threshold(self):
        covers = [reduction_cover(t, 29) for t in (10, 10**3, 10**6)]
        assert covers == sorted(covers)

    def test_fraction_in_unit_interval(self):
        for q in (2, 3, 7, 11):
            c = reduction_cover(100, q)
            assert 0.0 < c <= 1.0


class TestPrimalityCensus:
    def test_thousand(self):
        row = primality_census(10**3)
        assert row.n_distinct == 13
        assert row.n_prime == 7

    def test_small_region_primes(self):
        members, _ = markoff_numbers(200)
        assert {m for m in members if is_probable_prime(m)} == {2, 5, 13, 29, 89}

    def test_rejects_unit_limit(self):
        with pytest.raises(ValueError):
            primality_census(1)

    def test_counts_nest(self):
        row = primality_census(10**6)
        assert row.n_prime <= row.n_distinct <= row.n_triples


class TestSignPatterns:
    def test_even_patterns(self):
        assert len(SIGN_PATTERNS) == 4
        for s in SIGN_PATTERNS:
            assert s[0] * s[1] * s[2] == 1

    def test_patterns_preserve_equation(self):
        for s in SIGN_PATTERNS:
            a, b, c = 2 * s[0], 5 * s[1], 29 * s[2]
            assert a * a + b * b + c * c == 3 * a * b * c
