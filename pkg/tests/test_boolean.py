"""Tests for Walsh sums on the Boolean cube and their Gaussian limits."""

import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.special import gammaln

from projlab.errors import BudgetExceeded, EnumerationTooLarge, OutOfRange, ParseError
from projlab.lab.boolean import (
    FamilyKind, SubsetFamily, boolean_exact_sums, boolean_limit, boolean_proj,
    boolean_proj_exact, boolean_proj_exact_fraction, boolean_proj_mc,
    boolean_second_moment_exact, boolean_symmetric_exact, cdkn_exact, cdkn_main_term,
    convergence_table, gray_flips, klimek_check, krawtchouk, pd_fractions, pd_polynomial,
)
from projlab.lab.closedforms import gaussian_abs_moment, real_roots
from projlab.lab.montecarlo import MCEstimate


def brute_force_mean_abs(family: SubsetFamily) -> Fraction:
    total = 0
    for signs in product((1, -1), repeat=family.N):
        value = 0
        for mask in family.sets:
            chi = 1
            for k in range(family.N):
                if mask >> k & 1:
                    chi *= signs[k]
            value += chi
        total += abs(value)
    return Fraction(total, 2 ** family.N)


class TestFamilies:
    def test_sizes(self):
        assert len(SubsetFamily.homog(2, 5)) == 10
        assert len(SubsetFamily.upto(2, 5)) == 1 + 5 + 10
        assert SubsetFamily.homog(3, 6).degree == 3

    def test_parse(self):
        assert SubsetFamily.parse("homog:2", 4) == SubsetFamily.homog(2, 4)
        fam = SubsetFamily.parse("[3, 5]", 3)
        assert fam.kind is FamilyKind.CUSTOM and fam.sets == (3, 5)
        with pytest.raises(ParseError):
            SubsetFamily.parse("cubes:2", 4)
        with pytest.raises(ParseError):
            SubsetFamily.parse("homog:x", 4)

    def test_masks_must_fit(self):
        with pytest.raises(OutOfRange):
            SubsetFamily.custom(2, [4])

    def test_incidence(self):
        inc = SubsetFamily.custom(3, [1, 6]).incidence()
        assert inc.tolist() == [[1, 0], [0, 1], [0, 1]]


def test_gray_code_visits_every_vertex_once():
    state, seen = 0, {0}
    for bit in gray_flips(5):
        state ^= 1 << bit
        seen.add(state)
    assert len(seen) == 32


class TestExactEnumeration:
    @given(N=st.integers(1, 7), data=st.data())
    @settings(max_examples=30, deadline=None)
    def test_matches_brute_force(self, N, data):
        masks = data.draw(st.lists(st.integers(0, (1 << N) - 1), min_size=1, max_size=6))
        family = SubsetFamily.custom(N, masks)
        assert boolean_proj_exact_fraction(family) == brute_force_mean_abs(family)

    def test_crosses_the_dense_table_boundary(self):
        # more than twelve bits exercises the Gray walk over the middle bits
        family = SubsetFamily.homog(1, 15)
        assert boolean_proj_exact(family) == pytest.approx(
            2 / math.sqrt(math.pi) * math.exp(gammaln(8.5) - gammaln(8.0)), abs=1e-10)

    @pytest.mark.parametrize("N", [1, 3, 5, 7, 9, 11, 13, 15])
    def test_linear_family_is_the_real_l2_constant(self, N):
        expected = 2 / math.sqrt(math.pi) * math.exp(gammaln((N + 2) / 2) - gammaln((N + 1) / 2))
        assert boolean_proj_exact(SubsetFamily.homog(1, N)) == pytest.approx(expected, abs=1e-10)

    def test_parseval(self):
        family = SubsetFamily.upto(2, 8)
        assert boolean_second_moment_exact(family) == len(family)

    def test_workers_do_not_change_sums(self):
        family = SubsetFamily.homog(2, 14)
        assert boolean_exact_sums(family, workers=1) == boolean_exact_sums(family, workers=4)

    def test_symmetric_formula_agrees_with_enumeration(self):
        for d, N in ((2, 10), (3, 9), (4, 13)):
            assert boolean_proj_exact_fraction(SubsetFamily.homog(d, N)) == boolean_symmetric_exact(d, N)
        assert boolean_proj_exact_fraction(SubsetFamily.upto(2, 9)) == boolean_symmetric_exact(2, 9, up_to=True)

    def test_cap(self):
        with pytest.raises(EnumerationTooLarge):
            boolean_exact_sums(SubsetFamily.homog(1, 30), cap=26)

    def test_empty_family(self):
        assert boolean_exact_sums(SubsetFamily.custom(3, [])) == (0, 0)


class TestMonteCarloPath:
    def test_mc_agrees_with_exact(self):
        family = SubsetFamily.homog(2, 10)
        est = boolean_proj_mc(family, 100_000, seed=3)
        exact = boolean_proj_exact(family)
        assert abs(est.mean - exact) <= 3 * est.stderr

    def test_dispatch(self):
        assert isinstance(boolean_proj(SubsetFamily.homog(1, 5)), float)
        assert isinstance(boolean_proj(SubsetFamily.homog(1, 30), samples=1000, seed=1), MCEstimate)


class TestLimits:
    def test_krawtchouk(self):
        assert krawtchouk(1, 0, 5) == 5
        assert krawtchouk(2, 1, 4) == 0
        assert krawtchouk(0, 3, 6) == 1

    def test_pd_recursion(self):
        assert pd_fractions(0) == (Fraction(1),)
        assert pd_fractions(2) == (Fraction(-1, 2), Fraction(0), Fraction(1, 2))
        assert pd_polynomial(5).coeffs == pytest.approx((0, 15 / 120, 0, -10 / 120, 0, 1 / 120))

    def test_closed_limits(self):
        assert boolean_limit(1) == pytest.approx(math.sqrt(2 / math.pi), abs=1e-12)
        assert boolean_limit(2) == pytest.approx(math.sqrt(2 / (math.pi * math.e)), abs=1e-8)
        assert boolean_limit(3) == pytest.approx(
            (1 + 4 * math.exp(-1.5)) / (3 * math.sqrt(2 * math.pi)), abs=1e-8)

    def test_quintic_limit_matches_direct_quadrature(self):
        poly = pd_polynomial(5)
        roots = [-math.inf] + real_roots(poly.coeffs) + [math.inf]

        def integrand(t):
            return abs(poly(t)) * math.exp(-t * t / 2) / math.sqrt(2 * math.pi)

        direct = sum(integrate.quad(integrand, a, b, epsabs=1e-13)[0] for a, b in zip(roots, roots[1:]))
        assert boolean_limit(5) == pytest.approx(direct, abs=1e-8)

    def test_thirty_coefficient_quintic_moment(self):
        poly = [0, 30 / 120, 0, -10 / 120, 0, 1 / 120]
        assert gaussian_abs_moment(poly) == pytest.approx(3 / (10 * math.sqrt(2 * math.pi)), abs=1e-8)

    def test_limit_range(self):
        with pytest.raises(OutOfRange):
            boolean_limit(0)
        with pytest.raises(OutOfRange):
            boolean_limit(21)

    def test_normalized_values_approach_the_limit(self):
        rows = convergence_table(2, [24, 200, 1000])
        assert abs(rows[0]["normalized"] - rows[0]["limit"]) / rows[0]["limit"] <= 0.05
        assert abs(rows[-1]["normalized"] - rows[-1]["limit"]) <= abs(rows[0]["normalized"] - rows[0]["limit"])

    def test_limits_are_positive_and_finite(self):
        values = [boolean_limit(d) for d in range(1, 9)]
        assert all(0 < v < 1 for v in values)


class TestCoefficientCounts:
    def test_known_value(self):
        assert cdkn_exact(4, 1, 10) == 104
        assert cdkn_main_term(4, 1, 10) == 96

    @pytest.mark.parametrize("d,k,N", [(4, 1, 10), (4, 2, 10), (6, 2, 12)])
    def test_excess_bounds(self, d, k, N):
        excess = cdkn_exact(d, k, N) - cdkn_main_term(d, k, N)
        assert 0 <= excess <= N ** (k - 1) * 2 * d * math.factorial(d)

    def test_pure_even_degree(self):
        # every e_j doubled has multiplicity one
        assert cdkn_exact(2, 1, 5) == 5

    def test_growth_ratio(self):
        assert abs(cdkn_exact(4, 1, 14) / 14 / 12 - 1) <= 0.10

    def test_limits(self):
        with pytest.raises(BudgetExceeded):
            cdkn_exact(4, 1, 15)
        with pytest.raises(OutOfRange):
            cdkn_exact(4, 3, 10)


@pytest.mark.parametrize("d,N", [(2, 6), (3, 9), (4, 10)])
def test_klimek_inequality(d, N):
    assert klimek_check(d, N)["passed"]
