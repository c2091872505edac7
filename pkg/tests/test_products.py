import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exact_partial, trial_primes
from sqfdensity.density import SIX_OVER_PI2, ConstraintError, PrimeConstraint, density_factor
from sqfdensity.primes import ResidueClass
from sqfdensity.products import (
    EXACT_FACTORS,
    TruncationCapError,
    ap_reciprocal_sum,
    log_partial_product,
    log_product_bound,
    partial_product,
    telescoping_check,
    truncation_for_epsilon,
)

CLASS_41 = ResidueClass(4, 1)
CLASS_43 = ResidueClass(4, 3)
COPRIME_CLASSES = [
    ResidueClass(m, r) for m in range(1, 13) for r in range(m) if math.gcd(r, m) == 1
]


def test_partial_product_examples():
    assert partial_product([2], 10).final_partial == Fraction(2, 3)
    assert partial_product([2, 3, 5], 10).final_partial == Fraction(5, 12)
    tr = partial_product(CLASS_41, 13)
    assert tr.primes == [5, 13]
    assert tr.final_partial == Fraction(65, 84)


def test_partial_product_empty():
    tr = partial_product([2, 3], 1)
    assert len(tr) == 0 and tr.final_partial == 1 and tr.final_log == 0.0


def test_partial_product_rejects_noncoprime_class():
    with pytest.raises(ConstraintError):
        partial_product(ResidueClass(6, 2), 100)
    with pytest.raises(ConstraintError):
        partial_product([2, 4], 10)


@pytest.mark.parametrize("cls", [CLASS_41, CLASS_43, ResidueClass(3, 1), ResidueClass(10, 7)])
def test_trace_invariants(cls):
    tr = partial_product(cls, 20000)
    oracle_primes = [p for p in trial_primes(20000) if p % cls.modulus == cls.residue]
    assert tr.primes == oracle_primes
    partials = [e.partial for e in tr.entries]
    assert all(0 < f < 1 for f in partials)
    assert all(b < a for a, b in zip(partials, partials[1:]))
    assert partials[-1] == exact_partial(oracle_primes)
    with mpmath.workdps(50):
        for e in tr.entries[:: max(1, len(tr) // 200)]:
            exact_log = float(mpmath.log(mpmath.mpf(e.partial.numerator) / e.partial.denominator))
            assert e.log_partial == pytest.approx(exact_log, rel=1e-12)


def test_log_partial_accuracy_from_exact_rational():
    # partials representable as doubles: compare with log(float(Fraction))
    tr = partial_product(CLASS_41, 5000)
    for e in tr.entries:
        assert e.log_partial == pytest.approx(math.log(float(e.partial)), rel=1e-12)


def test_trace_switches_to_log_space():
    tr = partial_product(ResidueClass(1, 0), 200000)
    assert len(tr) > EXACT_FACTORS
    assert tr.entries[EXACT_FACTORS - 1].partial is not None
    assert tr.entries[EXACT_FACTORS].partial is None
    logs = [e.log_partial for e in tr.entries]
    assert all(b < a for a, b in zip(logs, logs[1:]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(trial_primes(200)), unique=True, max_size=10))
def test_consistency_with_density(P):
    assert partial_product(P, 10**6).final_partial == density_factor(PrimeConstraint(P=P))


@pytest.mark.parametrize("cls", [CLASS_41, CLASS_43, ResidueClass(3, 1), ResidueClass(5, 2)])
def test_decay_across_decades(cls):
    logs = [log_partial_product(cls, 10**k) for k in (3, 4, 5, 6)]
    assert all(b < a for a, b in zip(logs, logs[1:]))


def test_telescoping_examples():
    assert telescoping_check([2, 3], 0) == (0, 0)
    assert telescoping_check([2, 3], 2) == (Fraction(1, 2), Fraction(1, 2))
    a, b = telescoping_check(CLASS_41, 3)
    oracle = 1 - exact_partial([5, 13, 17])
    assert a == b == oracle


def test_telescoping_rejects_short_selector():
    with pytest.raises(ValueError):
        telescoping_check([2, 3], 3)


@pytest.mark.parametrize("cls", COPRIME_CLASSES[::3])
def test_telescoping_property(cls):
    for L in (1, 7, 50, 200):
        a, b = telescoping_check(cls, L)
        assert a == b


def test_log_product_bound_examples():
    neg, half = log_product_bound([2], 2)
    assert neg == pytest.approx(math.log(1.5), abs=1e-15)
    assert half == 0.25
    assert log_product_bound([], 100) == (0.0, 0.0)
    neg, half = log_product_bound(CLASS_41, 100)
    oracle = [p for p in trial_primes(100) if p % 4 == 1]
    assert half == pytest.approx(0.5 * sum(1 / p for p in oracle), rel=1e-15)
    assert neg > half


@pytest.mark.parametrize("cls", COPRIME_CLASSES)
def test_log_bound_holds_for_every_prefix(cls):
    tr = partial_product(cls, 3000)
    half = 0.0
    for e in tr.entries:
        half += 0.5 / e.prime
        assert -e.log_partial > half


def test_truncation_examples():
    eps = SIX_OVER_PI2 * 5 / 6 + 1e-12
    M, bound = truncation_for_epsilon(CLASS_41, eps)
    assert M == 5
    assert bound == pytest.approx(SIX_OVER_PI2 * 5 / 6, rel=1e-14)
    M, bound = truncation_for_epsilon(CLASS_43, 0.3)
    assert bound <= 0.3
    # least such M: the previous class prime does not satisfy the bound
    prev = [p for p in trial_primes(M - 1) if p % 4 == 3]
    assert SIX_OVER_PI2 * float(exact_partial(prev)) > 0.3
    assert SIX_OVER_PI2 * float(exact_partial(prev + [M])) <= 0.3


@pytest.mark.parametrize("eps", [SIX_OVER_PI2, 1.0, 0.0, -0.1])
def test_truncation_rejects_bad_eps(eps):
    with pytest.raises(ValueError):
        truncation_for_epsilon(CLASS_41, eps)


def test_truncation_cap():
    with pytest.raises(TruncationCapError, match="no cutoff"):
        truncation_for_epsilon(CLASS_41, 0.05, cap=10**5)


def test_ap_reciprocal_sum_examples():
    s, ref, dev = ap_reciprocal_sum(CLASS_41, 5)
    assert s == 0.2
    s, _, _ = ap_reciprocal_sum(CLASS_41, 100)
    expected = math.fsum(1 / p for p in (5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97))
    assert s == pytest.approx(expected, rel=1e-15)
    s, ref, dev = ap_reciprocal_sum(ResidueClass(1, 0), 10)
    assert s == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7, rel=1e-15)
    assert ref == pytest.approx(math.log(math.log(10)), rel=1e-15)
    assert dev == pytest.approx(s - ref)


def test_ap_reciprocal_sum_preconditions():
    with pytest.raises(ValueError):
        ap_reciprocal_sum(CLASS_41, 2)
    with pytest.raises(ConstraintError):
        ap_reciprocal_sum(ResidueClass(4, 2), 100)


@pytest.mark.parametrize("cls", [CLASS_41, CLASS_43])
def test_norton_deviation_stability(cls):
    devs = [ap_reciprocal_sum(cls, 10**k)[2] for k in (4, 5, 6, 7)]
    assert all(abs(b - a) < 0.05 for a, b in zip(devs, devs[1:]))
