from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothdiv.ball import BallReal, Status
from smoothdiv.divisor_theorem import (
    DomainError,
    check_lemma4,
    check_lemma5,
    check_lemma6,
    check_lemma14,
    cor2_large_sides,
    delta_large,
    delta_small,
    delta_triple,
    intro_display_as_printed,
    lemma5_rearranged,
    lemma6_hyperbola_exact,
    q_line,
    r_value,
    r_via_remainders,
    recomposed_constants,
    smooth_gap,
    smooth_polynomial,
    theorem1_bound,
    transfer_bbr,
    transfer_scaled_slack,
    verify_corollary2,
    verify_theorem1,
)
from smoothdiv.rational_core import divisor_harmonic_sum, divisor_sum
from conftest import ORACLE_DPS, encloses

rationals = st.builds(Fraction, st.integers(1, 10**6), st.integers(1, 100)).filter(lambda q: q >= 1)


def ref_r(x: Fraction):
    """r(x) = Delta(x) - x delta(x) - 1/4 from exact D, S and mpmath constants."""
    v = mpmath.mpf(x.numerator) / x.denominator
    g, g1, L = mpmath.euler, mpmath.stieltjes(1), mpmath.log(v)
    Delta = divisor_sum(x) - v * (L + 2 * g - 1)
    S = divisor_harmonic_sum(x)
    delta = mpmath.mpf(S.numerator) / S.denominator - (L**2 / 2 + 2 * g * L + g**2 - 2 * g1)
    return Delta - v * delta - mpmath.mpf(1) / 4


def test_error_terms_at_one(hp):
    g, g1 = mpmath.euler, mpmath.stieltjes(1)
    assert encloses(delta_large(1), 2 - 2 * g)
    assert encloses(delta_small(1), 1 - g**2 + 2 * g1)
    assert encloses(r_value(1), mpmath.mpf(3) / 4 - 2 * g + g**2 - 2 * g1)
    assert abs(float(r_value(1)) - 0.0744) < 1e-4


@given(st.builds(Fraction, st.integers(1, 3000), st.integers(1, 20)).filter(lambda q: q >= 1))
@settings(max_examples=40, deadline=None)
def test_r_encloses_reference_built_from_definitions(x):
    with mpmath.workdps(ORACLE_DPS):
        assert encloses(r_value(x), ref_r(x))


@pytest.mark.parametrize("x", [Fraction(1), Fraction(10, 3), Fraction(250), Fraction(70001, 3)])
def test_triple_is_self_consistent(x):
    assert delta_triple(x).consistent()


@pytest.mark.parametrize("x", [Fraction(2), Fraction(17, 2), Fraction(1000), Fraction(99999, 7)])
def test_remainder_decomposition_of_r_agrees_with_definition(x):
    assert (r_value(x) - r_via_remainders(x)).contains_zero()


def test_rearrangement_at_small_points():
    assert lemma5_rearranged(4) == (8, 8)
    assert lemma5_rearranged(1) == (1, 1)
    assert lemma5_rearranged(10) == (27, 27)


@given(rationals)
@settings(max_examples=200, deadline=None)
def test_rearrangement_is_exact_at_rationals(x):
    d, rhs = lemma5_rearranged(x)
    assert d == rhs


def test_introductory_display_is_off_by_twice_floor_sqrt():
    assert intro_display_as_printed(4) == 12 != divisor_sum(4)
    for x in (Fraction(10), Fraction(101, 3), Fraction(5000)):
        m = int(x ** 0.5)
        assert intro_display_as_printed(x) - divisor_sum(x) == 2 * m


@pytest.mark.parametrize("x", [Fraction(1), Fraction(4), Fraction(10), Fraction(10, 3), Fraction(100), Fraction(99999, 7)])
def test_rearranged_divisor_sum_record_passes(x):
    assert check_lemma5(x).status is Status.PASS


@pytest.mark.parametrize("x", [Fraction(1), Fraction(4), Fraction(100), Fraction(1001, 3), Fraction(6000)])
def test_log_version_identity_record_passes(x):
    assert check_lemma6(x).status is Status.PASS


def test_hyperbola_form_of_x_times_s_at_four():
    lhs, rhs = lemma6_hyperbola_exact(4)
    assert lhs == rhs == Fraction(41, 3)


def test_weighted_r1_sum_at_four_and_large_regime():
    assert check_lemma4(4).status is Status.PASS
    assert check_lemma14(300).status is Status.PASS


def test_main_bound_plug_in_values(hp):
    assert theorem1_bound(1, "general").contains(Fraction(1, 8) + Fraction(316, 1000) + Fraction(1, 64))
    ref = mpmath.log(300) / mpmath.mpf(300) ** 0.25 + mpmath.mpf("0.236") / mpmath.sqrt(300) + mpmath.mpf(1) / 19200
    assert encloses(theorem1_bound(300, "large", large_constant=Fraction(236, 1000)), ref)


def test_recomposed_coefficients_match_stated_bounds():
    c = recomposed_constants()
    assert c.constant == Fraction(1, 8)
    assert c.sqrt_coeff == Fraction(316, 1000)
    assert c.inv_coeff == Fraction(1, 64)


def test_recomposed_large_coefficient_is_0_238_not_0_236():
    assert recomposed_constants().large_sqrt_coeff == Fraction(238, 1000)


def test_large_regime_rejects_x_below_300():
    with pytest.raises(DomainError):
        verify_theorem1([10], "large")


def test_main_bound_general_regime_on_small_integers():
    recs = verify_theorem1(range(1, 300), "general")
    assert all(r.status is Status.PASS for r in recs)


def test_q_lines_five_and_six():
    assert q_line(5) == (Fraction(-229, 60), Fraction(10))
    assert q_line(6) == (Fraction(-269, 60), Fraction(14))


def test_smooth_gap_at_five_and_a_half_is_positive():
    x = Fraction(11, 2)
    gap = smooth_gap(x, 5, smooth_polynomial())
    assert gap.is_positive()
    # it equals Delta - x delta there, computed from the definitions
    assert (gap - r_value(x) - Fraction(1, 4)).contains_zero()


def test_smoothed_difference_at_100_has_margin():
    lo, value = cor2_large_sides(100, 128)
    assert value.lower_fraction() > lo.upper_fraction()


def test_smoothed_difference_small_cells_all_certified():
    recs = verify_corollary2([], include_small=True, small_step=Fraction(1, 200))
    assert len(recs) == 1200 and all(r.status is Status.PASS for r in recs)


def test_transfer_plug_in_at_5560():
    slack = transfer_scaled_slack(5560)
    assert slack.is_positive()
    derived = transfer_bbr(Fraction(397, 1000), 5560)
    x = Fraction(5560)
    assert derived.upper_fraction() <= Fraction(397, 1000) / 74 + Fraction(38, 100) / x
