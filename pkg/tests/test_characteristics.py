"""Tests for monomial characteristics c_X(alpha)."""

import itertools
import math

import pytest

from projlab.errors import NoClosedForm, OutOfRange
from projlab.lab.characteristics import (
    Provenance, characteristic, characteristic_bruteforce, characteristic_closed,
    characteristic_combine, duality_defect, log_ell1_characteristic,
)
from projlab.lab.indexsets import IndexKind, MultiIndex, enumerate_indices
from projlab.lab.spaces import INF, SequenceSpace


def test_ell1_characteristic():
    alpha = MultiIndex((1, 1))
    assert math.exp(log_ell1_characteristic(alpha)) == pytest.approx(4.0)
    assert log_ell1_characteristic(MultiIndex((3, 0))) == pytest.approx(0.0)


def test_lr_tetrahedral_is_m_to_the_m_over_r():
    alpha = MultiIndex((1, 1, 1, 0))
    c = characteristic_closed(SequenceSpace.lr(2.0, 4), alpha)
    assert c.is_exact
    assert c.value == pytest.approx(3.0 ** 1.5)


def test_linf_is_one():
    assert characteristic_closed(SequenceSpace.linf(3), MultiIndex((2, 0, 5))).value == 1.0


def test_zero_index_is_one():
    assert characteristic_closed(SequenceSpace.lr(1.5, 2), MultiIndex((0, 0))).value == 1.0


def test_lorentz_gives_an_interval():
    c = characteristic_closed(SequenceSpace.lorentz(2.0, INF, 3), MultiIndex((2, 1, 0)))
    assert c.provenance is Provenance.BOUNDS
    assert c.lo < c.hi
    assert c.contains(c.value)


@pytest.mark.parametrize("space", [
    SequenceSpace.lr(1.5, 3),
    SequenceSpace.lr(3.0, 3),
    SequenceSpace.nakano([1.5, 2.0, 3.0]),
    SequenceSpace.mixed(1.5, 3.0, 1, 3),
], ids=lambda s: s.describe())
@pytest.mark.parametrize("alpha", [(2, 1, 0), (1, 1, 1), (0, 0, 3)])
def test_closed_matches_bruteforce(space, alpha, fast_optimizer):
    alpha = MultiIndex(alpha)
    closed = characteristic_closed(space, alpha).value
    oracle = characteristic_bruteforce(space, alpha, fast_optimizer).value
    assert oracle == pytest.approx(closed, rel=1e-4)


def test_lorentz_oracle_inside_interval(fast_optimizer):
    space = SequenceSpace.lorentz(2.0, 1.0, 3)
    alpha = MultiIndex((2, 1, 0))
    interval = characteristic_closed(space, alpha)
    oracle = characteristic_bruteforce(space, alpha, fast_optimizer).value
    assert interval.contains(oracle, rel_tol=1e-4)


def test_characteristic_falls_back_to_bruteforce(fast_optimizer):
    space = SequenceSpace.lorentz(3.0, 2.0, 2)
    alpha = MultiIndex((2, 1))
    with pytest.raises(NoClosedForm):
        characteristic_closed(space, alpha)
    assert characteristic(space, alpha, fast_optimizer).provenance is Provenance.BRUTE_FORCE


@pytest.mark.parametrize("r", [1.5, 2.0, 3.0])
def test_duality_identity_closed(r):
    for alpha in enumerate_indices(IndexKind.FULL, 3, 3):
        assert duality_defect(SequenceSpace.lr(r, 3), alpha) <= 1e-12


def test_duality_identity_nakano():
    space = SequenceSpace.nakano([1.5, 2.0, 4.0])
    for alpha in enumerate_indices(IndexKind.FULL, 2, 3):
        assert duality_defect(space, alpha) <= 1e-12


def test_duality_identity_mixed_by_oracle(fast_optimizer):
    space = SequenceSpace.mixed(1.5, 3.0, 2, 2)
    assert duality_defect(space, MultiIndex((1, 0, 1, 0)), "bruteforce", fast_optimizer) <= 1e-4


def test_duality_defect_rejects_unknown_method():
    with pytest.raises(OutOfRange):
        duality_defect(SequenceSpace.lr(2.0, 2), MultiIndex((1, 1)), "guess")


def test_combine_product_and_interpolation():
    alpha = MultiIndex((1, 1))
    c1 = characteristic_closed(SequenceSpace.lr(1.0, 2), alpha)
    cinf = characteristic_closed(SequenceSpace.linf(2), alpha)
    mid = characteristic_combine("interpolate", c1, cinf, theta=0.5)
    assert mid.value == pytest.approx(characteristic_closed(SequenceSpace.lr(2.0, 2), alpha).value)
    prod = characteristic_combine("product", c1, c1)
    assert prod.value == pytest.approx(16.0)
    with pytest.raises(OutOfRange):
        characteristic_combine("interpolate", c1, cinf, theta=1.5)


@pytest.mark.parametrize("space", [
    SequenceSpace.lr(1.5, 3),
    SequenceSpace.lr(4.0, 3),
    SequenceSpace.linf(3),
    SequenceSpace.nakano([2.0, 2.0, 2.0]),
    SequenceSpace.lorentz(2.0, INF, 3),
    SequenceSpace.lorentz(2.0, 1.0, 3),
], ids=lambda s: s.describe())
def test_symmetric_families_see_only_the_rearrangement(space):
    for alpha in enumerate_indices(IndexKind.FULL, 3, 3):
        star = characteristic_closed(space, MultiIndex(alpha.decreasing()))
        for entries in set(itertools.permutations(alpha.entries)):
            c = characteristic_closed(space, MultiIndex(entries))
            assert (c.lo, c.hi) == pytest.approx((star.lo, star.hi), rel=1e-12)


def test_lorentz_one_characteristic_dominates_lr(fast_optimizer):
    # the l_{r,1} ball sits inside the l_r ball
    alpha = MultiIndex((3, 1, 1))
    lr = characteristic_closed(SequenceSpace.lr(2.0, 3), alpha).value
    lorentz = characteristic_bruteforce(SequenceSpace.lorentz(2.0, 1.0, 3), alpha, fast_optimizer).value
    assert lorentz >= lr * (1 - 1e-4)
