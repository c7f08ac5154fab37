from fractions import Fraction

import numpy as np
import pytest

from cotsum.distribution import (
    cdf_query,
    find_density_witness,
    histogram,
    is_unimodal,
    random_reals,
    s_tail_probe,
    sample_distribution,
    verify_witness,
)
from cotsum.errors import BudgetExhausted, DomainError
from cotsum.estermann import d1_cf, d1_rational
from cotsum.rationals import ReducedFraction as R


@pytest.fixture(scope="module")
def small_dist():
    return sample_distribution(2000, 10**4, seed=3)


def test_sampling_is_deterministic(small_dist):
    again = sample_distribution(2000, 10**4, seed=3)
    assert np.array_equal(small_dist.samples, again.samples)
    other = sample_distribution(2000, 10**4, seed=4)
    assert not np.array_equal(small_dist.samples, other.samples)


def test_samples_sorted_and_frozen(small_dist):
    s = small_dist.samples
    assert np.all(np.diff(s) >= 0)
    with pytest.raises(ValueError):
        s[0] = 1.0


def test_cdf_properties(small_dist):
    xs = np.linspace(-5, 5, 1001)
    F = cdf_query(small_dist, xs)
    assert np.all(np.diff(F) >= 0)
    assert F[0] == 0.0 and F[-1] == 1.0
    assert small_dist.cdf(small_dist.samples[-1]) == 1.0
    assert abs(float(cdf_query(small_dist, 0.0)) - 0.5) < 0.05


def test_histogram_accounts_for_every_sample(small_dist):
    h = histogram(small_dist, 40)
    assert h.total == small_dist.sample_count
    assert len(h.centers) == 40 and len(h.edges) == 41
    assert h.centers[0] == pytest.approx(-1.95)
    assert h.bin_contains(20, 0.0) and h.bin_contains(19, 0.0)
    with pytest.raises(DomainError):
        histogram(small_dist, 0)
    with pytest.raises(DomainError):
        histogram(small_dist, 10, (1.0, -1.0))


def test_is_unimodal():
    assert is_unimodal([1, 5, 20, 50, 20, 4, 1])
    assert not is_unimodal([1, 50, 2, 50, 1])
    # a dip of one count in a 10^4-sized bin is noise
    assert is_unimodal([100, 9000, 10000, 9999, 10000, 9000, 50])
    assert not is_unimodal([100, 9000, 10000, 9000, 10000, 9000, 50], noise_sigmas=3)


def test_sample_count_validated():
    with pytest.raises(DomainError):
        sample_distribution(0, 100, 0)


def test_random_reals_reproducible():
    a = random_reals(5, 10)
    assert a == random_reals(5, 10)
    assert all(isinstance(x, Fraction) and 0 <= x < 1 for x in a)
    assert all(x.denominator <= 2**128 for x in a)


def test_tail_probe_decreasing():
    rows = s_tail_probe(2000, [2, 4, 6], seed=1)
    fr = [f for _, f in rows]
    assert fr[0] > fr[1] > fr[2]
    assert [K for K, _ in rows] == [2, 4, 6]


@pytest.mark.parametrize("z", [-1.0, -0.3, 0.3, 1.0, -2.5, 2.0])
def test_witness_in_window_and_verified(z):
    w = find_density_witness(z, 0.05)
    assert z < w.value <= z + 0.05
    assert w.in_window
    check = verify_witness(w)
    assert z < check <= z + 0.05
    assert abs(check - w.value) < 1e-10
    # the all-ones tail moved the value by less than its bound
    assert abs(w.value - w.core_value) <= w.tail_bound
    assert w.cf.value() == w.x_found.as_fraction()


def test_witness_reflection():
    w = find_density_witness(0.3, 0.05)
    x = w.x_found
    mirrored = d1_rational(R(x.den - x.num, x.den)).value
    assert -0.35 <= mirrored < -0.3


def test_witness_shortcut_when_zero_in_window():
    w = find_density_witness(-0.01, 0.05)
    assert w.x_found == R(1, 2) and w.value == 0.0


def test_witness_budget_and_domain():
    with pytest.raises(BudgetExhausted) as info:
        find_density_witness(1.0, 0.05, budget=3)
    assert info.value.best is None or not info.value.best.in_window
    with pytest.raises(DomainError):
        find_density_witness(0.3, 0.0)


def test_witness_core_uses_cf_evaluator():
    w = find_density_witness(-1.0, 0.05)
    assert w.value == d1_cf(w.cf).value
