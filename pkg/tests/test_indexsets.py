"""Tests for multi-indices, index-set families and the prime bijection."""

import math

import pytest
from hypothesis import given, strategies as st

from projlab.errors import (
    DimensionMismatch, EnumerationTooLarge, MixedDegrees, OutOfRange, ParseError
)
from projlab.lab.indexsets import (
    IndexKind, IndexSet, MultiIndex, closed_count, enumerate_indices, even_indices,
    is_b2_set, omega, parse_index_set, prime_map, prime_pi, prime_unmap, reduced_set,
    tetra_even_decompose,
)

multi_indices = st.lists(st.integers(0, 6), min_size=1, max_size=6).map(lambda e: MultiIndex(tuple(e)))


class TestMultiIndex:
    def test_degree_and_multiplicity(self):
        alpha = MultiIndex((2, 1, 0))
        assert alpha.degree == 3
        assert alpha.multiplicity() == 3
        assert alpha.factorial() == 2

    def test_rejects_negative_entries(self):
        with pytest.raises(OutOfRange):
            MultiIndex((1, -1))

    def test_add_needs_equal_length(self):
        with pytest.raises(DimensionMismatch):
            MultiIndex((1,)) + MultiIndex((1, 0))

    def test_power_uses_zero_to_the_zero_as_one(self):
        assert MultiIndex((0, 2)).power([0.0, 3.0]) == 9.0

    @given(multi_indices)
    def test_tetra_even_decomposition_is_unique(self, alpha):
        tetra, even = tetra_even_decompose(alpha)
        assert tetra.is_tetrahedral()
        assert even.is_even()
        assert tetra + even == alpha


class TestEnumeration:
    @pytest.mark.parametrize("m", range(0, 9))
    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_full_and_tetrahedral_counts(self, m, n):
        full = enumerate_indices(IndexKind.FULL, m, n)
        tetra = enumerate_indices(IndexKind.TETRAHEDRAL, m, n)
        assert len(full) == math.comb(n + m - 1, m) == closed_count(IndexKind.FULL, m, n)
        assert len(tetra) == math.comb(n, m)
        assert all(a.degree == m for a in full)
        assert all(a.is_tetrahedral() for a in tetra)

    def test_up_to_counts(self):
        assert len(enumerate_indices(IndexKind.FULL_UP_TO, 3, 4)) == math.comb(7, 3)
        assert len(enumerate_indices(IndexKind.TETRAHEDRAL_UP_TO, 2, 4)) == 1 + 4 + 6

    def test_degree_zero_is_the_zero_index(self):
        J = enumerate_indices(IndexKind.FULL, 0, 3)
        assert J.members == (MultiIndex.zero(3),)

    def test_cap_is_enforced(self):
        with pytest.raises(EnumerationTooLarge):
            enumerate_indices(IndexKind.FULL, 8, 10, cap=100)

    def test_prime_generated_has_floor_x_members(self):
        J = enumerate_indices(IndexKind.PRIME_GENERATED, x=30)
        assert len(J) == 30
        assert J.dimension == prime_pi(30) == 10
        assert [prime_unmap(a) for a in J] == list(range(1, 31))

    def test_prime_homog_degree_one_are_the_primes(self):
        J = enumerate_indices(IndexKind.PRIME_HOMOG, m=1, x=30)
        assert len(J) == 10

    def test_homogeneous_part_keeps_kind(self):
        J = enumerate_indices(IndexKind.FULL_UP_TO, 3, 2)
        part = J.homogeneous_part(2)
        assert part.kind is IndexKind.FULL
        assert len(part) == 3


class TestPrimes:
    @given(st.integers(1, 5000))
    def test_bijection_round_trips(self, n):
        assert prime_unmap(prime_map(n)) == n

    def test_omega(self):
        assert omega(1) == 0
        assert omega(12) == 3
        assert omega(97) == 1


class TestDerivedSets:
    def test_reduced_set_of_full_is_full(self):
        J = enumerate_indices(IndexKind.FULL, 3, 3)
        flat = reduced_set(J)
        assert set(flat.members) == set(enumerate_indices(IndexKind.FULL, 2, 3).members)

    def test_reduced_set_needs_homogeneous(self):
        with pytest.raises(MixedDegrees):
            reduced_set(enumerate_indices(IndexKind.FULL_UP_TO, 2, 2))

    def test_even_indices(self):
        assert len(even_indices(4, 3)) == math.comb(4, 2)
        assert len(even_indices(3, 3)) == 0

    def test_b2_sets(self):
        assert is_b2_set(IndexSet.custom([(1, 0), (0, 1)]))
        assert not is_b2_set(IndexSet.custom([(0,), (1,), (2,)]))

    def test_membership_is_a_hash_lookup(self):
        J = enumerate_indices(IndexKind.FULL, 2, 3)
        assert MultiIndex((1, 1, 0)) in J
        assert MultiIndex((3, 0, 0)) not in J
        assert J._lookup == frozenset(J.members)
        assert all(alpha in IndexSet.custom(reversed(J.members)) for alpha in J)

    def test_set_algebra(self):
        full = enumerate_indices(IndexKind.FULL, 2, 3)
        tetra = enumerate_indices(IndexKind.TETRAHEDRAL, 2, 3)
        assert set(full.tetrahedral_part().members) == set(tetra.members)
        assert tetra.issubset(full) and not full.issubset(tetra)
        linear = enumerate_indices(IndexKind.FULL, 1, 3)
        assert len(full.union(linear)) == len(full) + 3
        assert len(full.union(tetra)) == len(full)
        with pytest.raises(DimensionMismatch):
            full.union(enumerate_indices(IndexKind.FULL, 1, 2))


class TestParsing:
    def test_named_families(self):
        assert len(parse_index_set("full:2", n=3)) == 6
        assert len(parse_index_set("tetra:2", n=4)) == 6
        assert len(parse_index_set("prime:10")) == 10

    def test_json_list(self):
        J = parse_index_set("[[1, 0], [0, 2]]")
        assert J.dimension == 2 and len(J) == 2

    def test_dict_round_trip(self):
        J = enumerate_indices(IndexKind.TETRAHEDRAL, 2, 4)
        assert IndexSet.from_dict(J.to_dict()) == J

    @pytest.mark.parametrize("text", ["bogus:2", "full:x", "full:2.5", "[[1, -1]]", "{\"x\": 1}"])
    def test_bad_descriptors(self, text):
        with pytest.raises((ParseError, OutOfRange)):
            parse_index_set(text, n=2)

    def test_named_family_needs_dimension(self):
        with pytest.raises(ParseError):
            parse_index_set("full:2")
