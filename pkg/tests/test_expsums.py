import cmath
import math
import random
from fractions import Fraction

import mpmath
import pytest

from smoothdiv.ball import Status
from smoothdiv.expsums import (
    HypothesisError,
    constant_phase,
    exp_sum,
    hyperbolic_phase,
    kusmin_landau_bound,
    kusmin_landau_sweep,
    linear_phase,
    second_derivative_lemma_bound,
    second_derivative_sweep,
    van_der_corput_bound,
    vdc_sweep,
)
from conftest import encloses


def test_half_phase_on_two_to_four_cancels():
    assert exp_sum(linear_phase(Fraction(1, 2)), 2, 4).modulus.contains(0)


def test_constant_phase_sums_to_term_count():
    r = exp_sum(constant_phase(), 0, 4)
    assert r.term_count == 4 and r.modulus.contains(4)


def test_geometric_sum_matches_closed_form(hp):
    # |sum_{n=4}^{9} e(n/3)| = |sin(6 pi/3) / sin(pi/3)| = 0
    r = exp_sum(linear_phase(Fraction(1, 3)), 3, 9)
    assert r.modulus.contains(0) and r.modulus.upper_fraction() <= 1


@pytest.mark.parametrize("seed", range(5))
def test_hyperbolic_sum_matches_floating_reference(seed):
    rng = random.Random(seed)
    m, x, N = rng.randint(1, 9), Fraction(rng.randint(10, 10**5), rng.randint(1, 50)), rng.randint(1, 300)
    N1 = rng.randint(N + 1, 2 * N)
    ref = abs(sum(cmath.exp(2j * math.pi * float(m * x / n)) for n in range(N + 1, N1 + 1)))
    got = exp_sum(hyperbolic_phase(m, x), N, N1).modulus
    assert abs(float(got) - ref) < 1e-6 * max(1, N1 - N)


def test_hyperbolic_sum_encloses_high_precision_reference(hp):
    m, x, N, N1 = 3, Fraction(1001, 7), 40, 77
    ref = abs(mpmath.fsum(mpmath.expjpi(2 * mpmath.mpf(m * x.numerator) / (x.denominator * n)) for n in range(N + 1, N1 + 1)))
    assert encloses(exp_sum(hyperbolic_phase(m, x), N, N1).modulus, ref)


def test_kusmin_landau_constants(hp):
    assert encloses(kusmin_landau_bound(Fraction(1, 3)), 6 / mpmath.pi)
    assert encloses(kusmin_landau_bound(Fraction(1, 2)), 4 / mpmath.pi)


def test_second_derivative_bound_constants(hp):
    assert encloses(second_derivative_lemma_bound(Fraction(1, 100)), 4 / mpmath.sqrt(mpmath.pi / 100))


def test_van_der_corput_example(hp):
    ref = 4 / mpmath.sqrt(mpmath.pi) * 208
    assert encloses(van_der_corput_bound(100, Fraction(1, 10**4), 8), ref)


def test_block_metadata_for_hyperbolic_phase():
    ph = hyperbolic_phase(1, 8, block=2)
    assert ph.f2(Fraction(2), 64).contains(2)
    assert ph.second_derivative_range == (Fraction(1, 4), Fraction(2))


@pytest.mark.parametrize("call", [lambda: kusmin_landau_bound(0), lambda: kusmin_landau_bound(1),
                                  lambda: second_derivative_lemma_bound(Fraction(1, 3)),
                                  lambda: van_der_corput_bound(10, Fraction(1, 10), Fraction(1, 2))])
def test_bounds_refuse_outside_their_hypotheses(call):
    with pytest.raises(HypothesisError):
        call()


def test_small_sweeps_have_no_violations():
    for sweep in (vdc_sweep(150, seed=11), kusmin_landau_sweep(150, seed=11), second_derivative_sweep(100, seed=11)):
        c = sweep.counts()
        assert c[Status.FAIL] == 0 and c[Status.INCONCLUSIVE] == 0 and c[Status.PASS] > 0
