import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotsum.errors import DomainError, PrecisionExhausted
from cotsum.rationals import (
    ContinuedFraction,
    ReducedFraction,
    cf_alternate,
    cf_expand,
    cf_of_real,
    growth_violations,
    mod_inverse,
)
from strategies import unit_fractions


def test_reduced_fraction_rejects_common_factor():
    with pytest.raises(DomainError):
        ReducedFraction(2, 4)
    with pytest.raises(DomainError):
        ReducedFraction(1, 0)
    assert ReducedFraction.reduce(2, 4) == ReducedFraction(1, 2)
    assert ReducedFraction.reduce(3, -6) == ReducedFraction(-1, 2)


def test_parse_and_mod1():
    x = ReducedFraction.parse("7/3")
    assert (x.num, x.den) == (7, 3)
    assert x.mod1() == ReducedFraction(1, 3)
    assert ReducedFraction.parse("-1/3").mod1() == ReducedFraction(2, 3)
    with pytest.raises(DomainError):
        ReducedFraction.parse("6/9")
    with pytest.raises(DomainError):
        ReducedFraction.parse("a/b")


def test_mod_inverse_examples():
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(1, 1) == 1
    assert mod_inverse(1, 2) == 1
    assert mod_inverse(-1, 5) == 4
    with pytest.raises(DomainError):
        mod_inverse(2, 4)
    with pytest.raises(DomainError):
        mod_inverse(1, 0)


@given(st.integers(1, 10**6), st.integers(-10**6, 10**6))
def test_mod_inverse_property(q, a):
    if math.gcd(a, q) != 1:
        with pytest.raises(DomainError):
            mod_inverse(a, q)
        return
    b = mod_inverse(a, q)
    assert 1 <= b <= q
    assert (a * b - 1) % q == 0


def test_cf_expand_examples():
    assert cf_expand(ReducedFraction(13, 7)).quotients == (1, 1, 6)
    assert cf_expand(ReducedFraction(1, 2)).quotients == (0, 2)
    assert cf_expand(ReducedFraction(5, 1)).quotients == (5,)
    cf = cf_expand(ReducedFraction(13, 7))
    assert cf.convergent_den == (1, 1, 7)
    assert cf.value() == Fraction(13, 7)


def test_cf_alternate_examples():
    cf = cf_expand(ReducedFraction(13, 7))
    alt = cf_alternate(cf)
    assert alt.quotients == (1, 1, 5, 1)
    assert alt.value() == Fraction(13, 7)
    assert cf_alternate(alt).quotients == cf.quotients


@given(unit_fractions(q_max=10**6))
def test_cf_round_trip(x):
    cf = cf_expand(x)
    assert cf.value() == x.as_fraction()
    assert cf.depth == 0 or cf.quotients[-1] >= 2
    alt = cf_alternate(cf)
    assert alt.value() == x.as_fraction()
    assert alt.depth == cf.depth + 1
    assert cf_alternate(alt) == cf
    # neighbouring convergents are unimodular
    u, v = cf.convergent_num, cf.convergent_den
    for n in range(1, len(v)):
        assert u[n] * v[n - 1] - u[n - 1] * v[n] == (-1) ** (n - 1)


def test_golden_ratio_expansion_is_fibonacci():
    phi = (1 + 5**0.5) / 2
    cf = cf_of_real(phi, 20, digits=30)
    assert cf.quotients[:21] == (1,) * 21
    fib = [1, 1]
    while len(fib) < 21:
        fib.append(fib[-1] + fib[-2])
    assert list(cf.convergent_den[:21]) == fib[:21]


def test_sqrt2_expansion_and_approximation_bound():
    from decimal import Decimal, getcontext

    getcontext().prec = 50
    root2 = Decimal(2).sqrt()
    cf = cf_of_real(str(root2), 15, digits=45)
    assert cf.quotients[:16] == (1,) + (2,) * 15
    x = Fraction(root2)
    u, v = cf.convergent_num, cf.convergent_den
    for n in range(15):
        assert abs(x - Fraction(u[n], v[n])) <= Fraction(1, v[n] * v[n + 1])


def test_cf_of_real_short_when_precision_runs_out():
    cf = cf_of_real(0.1234567, 60)
    assert not cf.exact
    assert cf.depth < 60
    with pytest.raises(PrecisionExhausted) as info:
        cf_of_real(0.1234567, 60, strict=True)
    assert info.value.achieved_depth == cf.depth


def test_cf_of_real_exact_rational_terminates():
    cf = cf_of_real(Fraction(13, 7), 10, digits=None)
    assert cf.exact and cf.quotients == (1, 1, 6)


@given(st.fractions(min_value=0, max_value=1, max_denominator=10**12))
def test_growth_bound_on_exact_expansions(x):
    cf = cf_of_real(x, 40, digits=None)
    assert growth_violations(cf) == []


def test_growth_bound_all_ones_and_counterexample():
    cf = ContinuedFraction.from_quotients([0] + [1] * 60)
    assert growth_violations(cf) == []
    # a sequence that is not a continued fraction can violate it
    fake = ContinuedFraction(cf.quotients, cf.convergent_num, (1,) + (1,) * 10, True)
    assert growth_violations(fake) == [4, 5, 6, 7, 8, 9, 10]  # 2^((n-3)/2) > 1 from n = 4


def test_from_quotients_rejects_zero_quotient():
    with pytest.raises(DomainError):
        ContinuedFraction.from_quotients([0, 2, 0, 3])
