"""Low-order Bernoulli polynomials, their periodic versions and sup-norm constants.

The second Bernoulli polynomial is the standard ``t^2 - t + 1/6``.  A printed
variant with constant ``-1/6`` circulates; it contradicts the identity
``int_1^x psi = psi(x)^2/2 - 1/8``, the Fourier expansion of ``B_2({t})`` and
the bound ``|B_2({t})| <= 1/6``, so it is not used.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .ball import DEFAULT_BITS, BallReal, pi_ball
from .constants import sqrt_ball, zeta_ball
from .rational_core import as_rational, frac

_HALF = Fraction(1, 2)


def psi(x) -> Fraction:
    """psi(x) = {x} - 1/2, in [-1/2, 1/2)."""
    return frac(x) - _HALF


def psi2(x) -> Fraction:
    """Antiderivative int_1^x psi(t) dt = psi(x)^2/2 - 1/8, in [-1/8, 0]."""
    x = as_rational(x)
    if x < 1:
        raise ValueError("psi2 is defined for x >= 1")
    p = psi(x)
    return p * p / 2 - Fraction(1, 8)


def bernoulli_poly(j: int, t) -> Fraction:
    t = as_rational(t)
    if j == 1:
        return t - _HALF
    if j == 2:
        return t * t - t + Fraction(1, 6)
    if j == 3:
        return t * t * t - Fraction(3, 2) * t * t + t / 2
    raise ValueError(f"exact Bernoulli polynomials are available for j in 1..3, got {j}")


def periodic_bernoulli(j: int, x) -> Fraction:
    """B_j({x}) for j in {1, 2, 3}."""
    return bernoulli_poly(j, frac(x))


def gamma_j(j: int, prec: int = DEFAULT_BITS) -> BallReal:
    """Gamma_j = 2 eta(j) j! / (2 pi)^j, eta(j) = zeta(j) for even j and 1 for odd j."""
    if j < 2:
        raise ValueError("Gamma_j is defined for j >= 2")
    two_pi = pi_ball(prec) * 2
    eta = zeta_ball(Fraction(j), prec) if j % 2 == 0 else BallReal.exact(1, prec)
    return eta * (2 * factorial(j)) / two_pi**j


def sup_b3(prec: int = DEFAULT_BITS) -> BallReal:
    """sup_z |B_3({z})| = sqrt(3)/36, attained at z = 1/2 -+ sqrt(3)/6."""
    return sqrt_ball(3, prec) / 36
