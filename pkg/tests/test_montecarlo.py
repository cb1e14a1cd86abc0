"""Tests for the seeded samplers and Monte Carlo estimators."""

import math

import numpy as np
import pytest
from scipy.stats import ks_2samp, kstest

from projlab.errors import OutOfRange
from projlab.lab import closedforms
from projlab.lab.indexsets import IndexKind, IndexSet, enumerate_indices
from projlab.lab.montecarlo import (
    MCEstimate, dirichlet_index_set, dirichlet_projection, dirichlet_time_average, estimate,
    harper_shape, harper_shape_table, sample, sphere_invariant, split_samples, streams,
    torus_exp_sum, trace_abs_moment, trace_class,
)


def inside(est: MCEstimate, target: float, sigmas: float = 3.0) -> bool:
    lo, hi = est.interval(sigmas)
    return lo - 1e-12 <= target <= hi + 1e-12


class TestSamplers:
    def test_shapes(self):
        rng = np.random.default_rng(0)
        assert sample("torus", 3, rng, 5).shape == (5, 3)
        assert sample("sphere_complex", 4, rng).shape == (4,)
        assert sample("haar_unitary", 3, rng, 2).shape == (2, 3, 3)
        assert set(np.unique(sample("boolean", 6, rng, 50))) <= {-1, 1}

    def test_unitaries_are_unitary(self):
        u = sample("haar_unitary", 4, np.random.default_rng(1), 10)
        eye = np.eye(4)
        for m in u:
            assert np.allclose(m.conj().T @ m, eye, atol=1e-12)

    def test_torus_and_sphere_have_unit_modulus(self):
        rng = np.random.default_rng(2)
        assert np.allclose(np.abs(sample("torus", 3, rng, 100)), 1.0)
        assert np.allclose(np.linalg.norm(sample("sphere_complex", 3, rng, 100), axis=1), 1.0)

    def test_unknown_group(self):
        with pytest.raises(OutOfRange):
            sample("lattice", 2, np.random.default_rng(0))

    def test_haar_dimension_cap(self):
        with pytest.raises(OutOfRange):
            sample("haar_unitary", 65, np.random.default_rng(0))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_trace_law_is_invariant_under_translation(self, n):
        rng = np.random.default_rng(100 + n)
        v = sample("haar_unitary", n, rng)
        plain = np.trace(sample("haar_unitary", n, rng, 4000), axis1=1, axis2=2)
        moved = np.trace(v @ sample("haar_unitary", n, rng, 4000), axis1=1, axis2=2)
        assert ks_2samp(plain.real, moved.real).pvalue > 0.01
        assert ks_2samp(plain.imag, moved.imag).pvalue > 0.01

    def test_uncorrected_qr_breaks_phase_symmetry(self):
        fixed_rng, raw_rng = streams(7, 2)
        fixed = sample("haar_unitary", 3, fixed_rng, 4000)[:, 0, 0]
        raw = sample("haar_unitary", 3, raw_rng, 4000, corrected=False)[:, 0, 0]
        uniform = (-np.pi, 2 * np.pi)
        assert kstest(np.angle(fixed), "uniform", args=uniform).pvalue > 0.01
        assert abs(fixed.mean()) < 4 * math.sqrt(np.mean(np.abs(fixed) ** 2) / fixed.size)
        # R_11 comes back real, so arg u_11 only covers half the circle
        assert kstest(np.angle(raw), "uniform", args=uniform).pvalue < 1e-6
        assert abs(raw.mean()) > 0.1


class TestEstimator:
    def test_split_samples(self):
        assert split_samples(10, 3) == [4, 3, 3]
        assert sum(split_samples(1_000_003, 8)) == 1_000_003

    def test_streams_are_independent(self):
        a, b = streams(5, 2)
        assert a.random() != b.random()

    def test_constant_sampler_has_zero_stderr(self):
        est = estimate(lambda rng, k: np.full(k, 2.5), 1000, seed=1, workers=3)
        assert est.mean == pytest.approx(2.5)
        assert est.stderr == pytest.approx(0.0, abs=1e-15)

    def test_merged_chunks_match_one_pass(self):
        def uniform(rng, k):
            return rng.random(k)
        small = estimate(uniform, 10_000, seed=3, chunk=7)
        big = estimate(uniform, 10_000, seed=3, chunk=10_000)
        assert small.mean == pytest.approx(big.mean, rel=1e-12)
        assert small.stderr == pytest.approx(big.stderr, rel=1e-9)

    def test_same_seed_same_workers_is_bitwise_reproducible(self):
        J = enumerate_indices(IndexKind.FULL, 2, 3)
        a = torus_exp_sum(J, 20_000, seed=11, workers=4)
        b = torus_exp_sum(J, 20_000, seed=11, workers=4)
        assert (a.mean, a.stderr) == (b.mean, b.stderr)

    def test_rejects_zero_samples(self):
        with pytest.raises(OutOfRange):
            estimate(lambda rng, k: rng.random(k), 0, seed=1)

    def test_scaled_and_serialized(self):
        est = MCEstimate(2.0, 0.1, 100, 7, 1, "q", {"n": 2}).scaled(-3.0)
        assert (est.mean, est.stderr) == (-6.0, pytest.approx(0.3))
        assert est.to_dict()["params"] == {"n": 2}


class TestTorus:
    def test_single_monomial_is_exact(self):
        est = torus_exp_sum(IndexSet.custom([(3, 1)]), 10, seed=1)
        assert (est.mean, est.stderr) == (1.0, 0.0)

    @pytest.mark.parametrize("n", [2, 4])
    def test_linear_sets_match_bessel_quadrature(self, n):
        est = torus_exp_sum(enumerate_indices(IndexKind.FULL, 1, n), 100_000, seed=20240601)
        assert inside(est, closedforms.proj_l1_complex(n))

    def test_second_moment_is_cardinality(self):
        J = enumerate_indices(IndexKind.FULL_UP_TO, 2, 2)
        est = torus_exp_sum(J, 100_000, seed=5, power=2)
        assert inside(est, float(len(J)))

    def test_empty_set(self):
        with pytest.raises(OutOfRange):
            torus_exp_sum(IndexSet(2, ()), 10, seed=1)


class TestUnitaryGroup:
    def test_trace_second_moment_is_one(self):
        est = trace_abs_moment(3, 50_000, seed=9, power=2)
        assert inside(est, 1.0)

    def test_two_by_two(self):
        est = trace_abs_moment(2, 100_000, seed=20240601)
        assert inside(est, 8.0 / (3.0 * math.pi))

    def test_trace_class_scales_by_n(self):
        est = trace_class(1, 100, seed=1)
        assert (est.mean, est.stderr) == (1.0, 0.0)
        assert est.quantity == "trace_class"


class TestSphere:
    def test_constant_degree_set_is_exact(self):
        est = sphere_invariant(3, [0], 10, seed=1)
        assert est.mean == 1.0 and est.stderr == 0.0

    def test_homogeneous_matches_rw(self):
        est = sphere_invariant(2, [2], 200_000, seed=20240601)
        assert inside(est, closedforms.proj_hilbert_homog(2, 2))

    def test_mixed_degrees_match_radial_integral(self):
        est = sphere_invariant(2, [0, 1], 200_000, seed=4)
        assert inside(est, closedforms.proj_hilbert_invariant(2, [0, 1]))

    def test_needs_unit_vector(self):
        with pytest.raises(OutOfRange):
            sphere_invariant(2, [1], 10, seed=1, z=np.array([1.0, 1.0]))


class TestDirichlet:
    def test_index_sets(self):
        assert len(dirichlet_index_set(30)) == 30
        assert len(dirichlet_index_set(30, m=1)) == 10
        with pytest.raises(OutOfRange):
            dirichlet_index_set(1.5)

    def test_length_two_is_four_over_pi(self):
        est = dirichlet_projection(2.0, samples=100_000, seed=20240601)
        assert inside(est, 4.0 / math.pi)

    def test_linear_part_is_l1_of_the_primes(self):
        est = dirichlet_projection(30.0, m=1, samples=100_000, seed=20240601)
        assert inside(est, closedforms.proj_l1_complex(10))

    @pytest.mark.parametrize("x", [10.0, 50.0])
    def test_below_kadets_snobar(self, x):
        est = dirichlet_projection(x, samples=20_000, seed=1)
        assert est.mean <= math.sqrt(x) + 3 * est.stderr

    def test_time_average_is_near_torus_value(self):
        torus = dirichlet_projection(10.0, samples=50_000, seed=2)
        timed = dirichlet_time_average(10.0, T=1e7, samples=50_000, seed=2)
        assert abs(torus.mean - timed.mean) <= 0.1

    def test_harper_shape(self):
        assert harper_shape(100.0) == pytest.approx(10.0 / math.log(math.log(100.0)) ** 0.25)
        with pytest.raises(OutOfRange):
            harper_shape(2.0)

    def test_harper_table_rows(self):
        rows = harper_shape_table([30.0], samples=5_000, seed=1)
        assert rows[0]["ratio"] == pytest.approx(rows[0]["estimate"] / rows[0]["shape"])
