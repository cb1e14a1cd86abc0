"""Tests for sequence lattices, their norms and duals."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projlab.errors import DimensionMismatch, DualNotImplemented, OutOfRange, ParseError
from projlab.lab.spaces import (
    INF, Family, SequenceSpace, calderon_exponent, conjugate, dual_fundamental,
    fundamental_function, is_symmetric, is_two_convex, kothe_dual, norm, parse_space,
    pointwise_product_exponent,
)

vectors = st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3).map(np.array)

SPACES = [
    SequenceSpace.lr(1.0, 3),
    SequenceSpace.lr(1.5, 3),
    SequenceSpace.lr(2.0, 3),
    SequenceSpace.linf(3),
    SequenceSpace.lorentz(2.0, 1.0, 3),
    SequenceSpace.lorentz(3.0, INF, 3),
    SequenceSpace.nakano([1.5, 2.0, 3.0]),
    SequenceSpace.nakano_dual([1.5, 2.0, 3.0]),
    SequenceSpace.mixed(1.5, 3.0, 1, 3),
]


def test_conjugate_exponents():
    assert conjugate(1) == INF
    assert conjugate(INF) == 1.0
    assert conjugate(2.0) == 2.0
    assert conjugate(3.0) == pytest.approx(1.5)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.describe())
@given(x=vectors, y=vectors)
@settings(max_examples=40, deadline=None)
def test_triangle_inequality(space, x, y):
    assert norm(space, x + y) <= norm(space, x) + norm(space, y) + 1e-9 * (1 + norm(space, x) + norm(space, y))


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.describe())
@given(x=vectors, t=st.floats(0.01, 100))
@settings(max_examples=40, deadline=None)
def test_homogeneity(space, x, t):
    assert norm(space, t * x) == pytest.approx(t * norm(space, x), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.describe())
def test_lattice_property_ignores_phases(space):
    z = np.array([1.0 + 1.0j, -2.0, 0.5j])
    assert norm(space, z) == pytest.approx(norm(space, np.abs(z)))


def test_known_norms():
    x = np.array([3.0, -4.0, 0.0])
    assert norm(SequenceSpace.lr(2.0, 3), x) == pytest.approx(5.0)
    assert norm(SequenceSpace.lr(1.0, 3), x) == pytest.approx(7.0)
    assert norm(SequenceSpace.linf(3), x) == 4.0
    # Lorentz l_{r,r} is l_r
    assert norm(SequenceSpace.lorentz(2.0, 2.0, 3), x) == pytest.approx(5.0)


def test_nakano_with_constant_exponent_is_lr():
    x = np.array([0.3, 1.2, 2.0])
    assert norm(SequenceSpace.nakano([2.0] * 3), x) == pytest.approx(norm(SequenceSpace.lr(2.0, 3), x), rel=1e-10)


def test_nakano_dual_with_constant_exponent_is_conjugate_lr():
    # the Amemiya norm of the conjugate Young function is the dual norm exactly
    x = np.array([0.3, 1.2, 2.0])
    assert norm(SequenceSpace.nakano_dual([3.0] * 3), x) == pytest.approx(
        norm(SequenceSpace.lr(1.5, 3), x), rel=1e-8)


def test_norm_rejects_wrong_length():
    with pytest.raises(DimensionMismatch):
        norm(SequenceSpace.lr(2.0, 3), [1.0, 2.0])


def test_lorentz_must_be_normed():
    with pytest.raises(OutOfRange):
        SequenceSpace.lorentz(2.0, 3.0, 3)


def test_fundamental_functions():
    assert fundamental_function(SequenceSpace.lr(2.0, 9), 4) == pytest.approx(2.0)
    assert fundamental_function(SequenceSpace.lorentz(3.0, 1.0, 9), 8) == pytest.approx(2.0)
    assert fundamental_function(SequenceSpace.linf(5), 5) == 1.0
    assert dual_fundamental(SequenceSpace.lr(2.0, 9), 9) == pytest.approx(3.0)
    assert dual_fundamental(SequenceSpace.linf(4), 4) == pytest.approx(4.0)


def test_structure_predicates():
    assert is_symmetric(SequenceSpace.lr(3.0, 2))
    assert not is_symmetric(SequenceSpace.nakano([1.5, 2.0]))
    assert is_two_convex(SequenceSpace.lr(2.0, 2))
    assert not is_two_convex(SequenceSpace.lr(1.5, 2))
    assert is_two_convex(SequenceSpace.mixed(2.0, 4.0, 1, 2))


def test_kothe_duals():
    assert kothe_dual(SequenceSpace.lr(3.0, 2)).r == pytest.approx(1.5)
    assert kothe_dual(SequenceSpace.linf(2)) == SequenceSpace.lr(1.0, 2)
    assert kothe_dual(SequenceSpace.nakano([2.0, 3.0])).family is Family.NAKANO_DUAL
    with pytest.raises(DualNotImplemented):
        kothe_dual(SequenceSpace.lorentz(2.0, 1.0, 2))


def test_exponent_arithmetic():
    assert pointwise_product_exponent(2.0, 2.0) == pytest.approx(1.0)
    assert pointwise_product_exponent(INF, INF) == INF
    with pytest.raises(OutOfRange):
        pointwise_product_exponent(1.0, 2.0)
    assert calderon_exponent(1.0, INF, 0.5) == pytest.approx(2.0)
    with pytest.raises(OutOfRange):
        calderon_exponent(1.0, 2.0, 1.0)


class TestParseSpace:
    def test_descriptors(self):
        assert parse_space("lr:2", 3) == SequenceSpace.lr(2.0, 3)
        assert parse_space("linf", 2) == SequenceSpace.linf(2)
        assert parse_space("lr:inf", 2) == SequenceSpace.linf(2)
        assert parse_space("lorentz:2,1", 4).s == 1.0
        assert parse_space("nakano:2", 3).exponents == (2.0, 2.0, 2.0)
        assert parse_space("mixed:1,2,2x3").dimension == 6

    def test_describe_round_trips(self):
        for space in SPACES:
            assert parse_space(space.describe(), space.dimension) == space

    @pytest.mark.parametrize("text", ["banana:2", "lr:x", "lr:1,2", "lorentz:2", "mixed:1,2", "lorentz:2,3"])
    def test_bad_descriptors(self, text):
        with pytest.raises(ParseError):
            parse_space(text, 3)
