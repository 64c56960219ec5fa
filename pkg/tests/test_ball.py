from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothdiv.ball import BallReal, PrecisionPolicy, Status, certify, check_inequality, hull, pi_ball
from conftest import ORACLE_DPS, encloses

small = st.builds(Fraction, st.integers(-10**6, 10**6), st.integers(1, 10**4))
positive = st.builds(Fraction, st.integers(1, 10**8), st.integers(1, 10**4))


@given(small, small)
def test_sum_product_difference_enclose_exact_rationals(a, b):
    A, B = BallReal.exact(a), BallReal.exact(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b:
        assert (A / B).contains(a / b)


@given(positive)
@settings(max_examples=80)
def test_transcendental_kernels_enclose_mpmath_reference(q):
    X = BallReal.exact(q)
    with mpmath.workdps(ORACLE_DPS):
        v = mpmath.mpf(q.numerator) / q.denominator
        assert encloses(X.sqrt(), mpmath.sqrt(v))
        assert encloses(X.log(), mpmath.log(v))
        assert encloses(X.rpow(Fraction(3, 4)), v ** (mpmath.mpf(3) / 4))


def test_cos_sin_enclose_reference(hp):
    c, s = BallReal.exact(Fraction(7, 3)).cos_sin()
    assert encloses(c, mpmath.cos(mpmath.mpf(7) / 3))
    assert encloses(s, mpmath.sin(mpmath.mpf(7) / 3))


def test_pi_ball_is_tight(hp):
    p = pi_ball(128)
    assert encloses(p, mpmath.pi)
    assert p.upper_fraction() - p.lower_fraction() < Fraction(1, 2**120)


def test_radius_shrinks_with_precision():
    lo = BallReal.exact(Fraction(2), 64).log()
    hi = BallReal.exact(Fraction(2), 256).log()
    assert hi.upper_fraction() - hi.lower_fraction() < lo.upper_fraction() - lo.lower_fraction()


def test_strict_and_weak_inequality_on_equal_exact_values():
    one = BallReal.exact(1)
    assert check_inequality(one, one) is Status.PASS
    assert check_inequality(one, one, strict=True) is Status.FAIL


def test_overlapping_balls_are_inconclusive():
    a = BallReal.from_rational_bounds(Fraction(0), Fraction(2))
    b = BallReal.exact(1)
    assert check_inequality(a, b) is Status.INCONCLUSIVE


def test_certify_escalates_precision_until_decided():
    seen = []

    def evaluate(bits):
        seen.append(bits)
        width = Fraction(1, 2 ** (bits // 2))
        return BallReal.from_rational_bounds(1 - width, 1 + width), BallReal.exact(1 + Fraction(1, 2**100))

    status, _, _ = certify(evaluate, PrecisionPolicy(working_bits=64, max_retries=4))
    assert status is Status.PASS
    assert seen == [64, 128, 256]


def test_certify_keeps_inconclusive_when_undecidable():
    wide = BallReal.from_rational_bounds(Fraction(0), Fraction(2))
    status, _, _ = certify(lambda bits: (wide, BallReal.exact(1)), PrecisionPolicy(64, 2))
    assert status is Status.INCONCLUSIVE


def test_from_ratio_matches_reduced_fraction():
    b = BallReal.from_ratio(-6, 4)
    assert b.contains(Fraction(-3, 2))


def test_hull_covers_both_balls():
    h = hull(BallReal.exact(1), BallReal.exact(3))
    assert h.contains(1) and h.contains(3)


def test_log_of_nonpositive_ball_rejected():
    with pytest.raises(ValueError):
        BallReal.exact(-1).log()


def test_policy_rejects_tiny_precision():
    with pytest.raises(ValueError):
        PrecisionPolicy(working_bits=10)
