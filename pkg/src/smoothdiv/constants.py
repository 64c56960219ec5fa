"""Certified enclosures of gamma, gamma_1 and zeta at rational points.

All three come from Euler-Maclaurin summation with an explicit remainder:
for f with f^(2m) of constant sign on [N, oo) and f^(2m-1) -> 0,

    sum_{j >= N} f(j) = int_N^oo f + f(N)/2 - sum_{s=1}^{m} B_2s/(2s)! f^(2s-1)(N) + R,
    |R| <= |B_2m|/(2m)! * |f^(2m-1)(N)|.

The divergent cases (f = 1/t and f = log t / t) are handled by taking the
limit of the same identity over [N, M].
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt

from .ball import DEFAULT_BITS, GUARD_BITS, BallReal, PrecisionPolicy, hull, pi_ball
from .rational_core import bernoulli_number

_POLICY = PrecisionPolicy()


def _em_terms(N: int, target_bits: int, term_bound) -> int:
    """Smallest m whose Euler-Maclaurin remainder bound drops below 2**-target_bits."""
    eps = Fraction(1, 1 << target_bits)
    m = 1
    while term_bound(m) > eps:
        m += 1
        if m > 4 * target_bits:
            raise RuntimeError("Euler-Maclaurin remainder does not converge; increase N")
    return m


def _harmonic_numbers(n: int) -> list[Fraction]:
    H = [Fraction(0)]
    for k in range(1, n + 1):
        H.append(H[-1] + Fraction(1, k))
    return H


def _cutoff(prec: int) -> int:
    return max(256, 4 * prec)


@lru_cache(maxsize=32)
def euler_gamma(prec: int = DEFAULT_BITS) -> BallReal:
    wp = prec + GUARD_BITS
    N = _cutoff(prec)
    bound = lambda m: abs(bernoulli_number(2 * m)) / (2 * m * Fraction(N) ** (2 * m))
    m = _em_terms(N, wp, bound)
    series = Fraction(0)
    for s in range(1, m + 1):
        series += bernoulli_number(2 * s) / (2 * s * Fraction(N) ** (2 * s))
    H = sum(Fraction(1, j) for j in range(1, N))
    exact_part = H + Fraction(1, 2 * N) + series
    err = bound(m)
    logN = BallReal.exact(N, wp).log()
    core = BallReal.from_rational_bounds(exact_part - err, exact_part + err, wp)
    return (core - logN).with_prec(prec)


@lru_cache(maxsize=32)
def stieltjes_gamma1(prec: int = DEFAULT_BITS) -> BallReal:
    wp = prec + GUARD_BITS
    N = _cutoff(prec)
    # log N < N turns |B_2m|/(2m) (log N - H_{2m-1}) / N^{2m} into a rational bound
    bound = lambda m: abs(bernoulli_number(2 * m)) / (2 * m * Fraction(N) ** (2 * m - 1))
    m = _em_terms(N, wp, bound)
    Hk = _harmonic_numbers(2 * m)
    logN = BallReal.exact(N, wp).log()
    # f^(2m) = (2m)! (log t - H_2m) / t^(2m+1) must keep its sign on [N, oo)
    if not (logN - Hk[2 * m]).is_positive():
        raise RuntimeError("cutoff too small for the gamma_1 remainder estimate")
    acc = BallReal.exact(0, wp)
    for j in range(2, N):
        acc = acc + BallReal.exact(j, wp).log() / j
    acc = acc - logN.square() / 2 + logN / (2 * N)
    for s in range(1, m + 1):
        c = bernoulli_number(2 * s) / (2 * s * Fraction(N) ** (2 * s))
        acc = acc + (logN - Hk[2 * s - 1]) * c
    err = bound(m)
    acc = acc + BallReal.from_rational_bounds(-err, err, wp)
    return acc.with_prec(prec)


def const_gamma(policy: PrecisionPolicy = _POLICY) -> BallReal:
    return euler_gamma(policy.working_bits)


def const_gamma1(policy: PrecisionPolicy = _POLICY) -> BallReal:
    return stieltjes_gamma1(policy.working_bits)


@lru_cache(maxsize=32)
def log2_ball(prec: int = DEFAULT_BITS) -> BallReal:
    return BallReal.exact(2, prec + GUARD_BITS).log().with_prec(prec)


# --- zeta -------------------------------------------------------------------


def _check_zeta_arg(s: Fraction) -> None:
    if s <= 1 or s.denominator not in (1, 2):
        raise ValueError(f"zeta evaluation supports integers and half-integers > 1, got {s}")


def _neg_power(n: int, s: Fraction, wp: int) -> BallReal:
    """n ** -s for integer or half-integer s."""
    whole = s.numerator // s.denominator
    v = BallReal.exact(Fraction(1, n**whole), wp)
    if s.denominator == 2:
        v = v / BallReal.exact(n, wp).sqrt()
    return v


def _rising(s: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= s + i
    return out


@lru_cache(maxsize=64)
def zeta_ball(s: Fraction, prec: int = DEFAULT_BITS) -> BallReal:
    """Certified zeta(s) for integer or half-integer s > 1."""
    s = Fraction(s)
    _check_zeta_arg(s)
    wp = prec + GUARD_BITS
    N = max(64, prec)
    whole = s.numerator // s.denominator
    # N^{-s-2m+1} <= N^{-whole-2m+1}
    bound = lambda m: (
        abs(bernoulli_number(2 * m)) * _rising(s, 2 * m - 1)
        / (factorial(2 * m) * Fraction(N) ** (whole + 2 * m - 1))
    )
    m = _em_terms(N, wp, bound)
    acc = BallReal.exact(0, wp)
    for n in range(1, N):
        acc = acc + _neg_power(n, s, wp)
    Ns = _neg_power(N, s, wp)
    acc = acc + Ns * Fraction(N) / (s - 1) + Ns / 2
    for i in range(1, m + 1):
        c = bernoulli_number(2 * i) * _rising(s, 2 * i - 1) / (factorial(2 * i) * Fraction(N) ** (2 * i - 1))
        acc = acc + Ns * c
    err = bound(m)
    acc = acc + BallReal.from_rational_bounds(-err, err, wp)
    return acc.with_prec(prec)


def zeta_half_integer(s, policy: PrecisionPolicy = _POLICY) -> BallReal:
    s = Fraction(s)
    if s.denominator != 2 or s <= 1:
        raise ValueError(f"expected a half-integer > 1, got {s}")
    return zeta_ball(s, policy.working_bits)


def zeta_dirichlet_enclosure(s, T: int, prec: int = DEFAULT_BITS) -> BallReal:
    """zeta(s) from sum_{n<=T} n^-s plus the integral tail bounds.

    (T+1)^{1-s}/(s-1) <= sum_{n>T} n^{-s} <= T^{1-s}/(s-1).  Slow but
    independent of the Euler-Maclaurin route.
    """
    s = Fraction(s)
    _check_zeta_arg(s)
    wp = prec + GUARD_BITS
    acc = BallReal.exact(0, wp)
    for n in range(1, T + 1):
        acc = acc + _neg_power(n, s, wp)
    lo = _neg_power(T + 1, s, wp) * Fraction(T + 1) / (s - 1)
    hi = _neg_power(T, s, wp) * Fraction(T) / (s - 1)
    return (acc + hull(lo, hi)).with_prec(prec)


def sqrt_ball(q, prec: int = DEFAULT_BITS) -> BallReal:
    q = Fraction(q)
    a, b = q.numerator, q.denominator
    if isqrt(a) ** 2 == a and isqrt(b) ** 2 == b:
        return BallReal.exact(Fraction(isqrt(a), isqrt(b)), prec)
    return BallReal.exact(q, prec + GUARD_BITS).sqrt().with_prec(prec)


__all__ = [
    "const_gamma",
    "const_gamma1",
    "euler_gamma",
    "log2_ball",
    "pi_ball",
    "sqrt_ball",
    "stieltjes_gamma1",
    "zeta_ball",
    "zeta_dirichlet_enclosure",
    "zeta_half_integer",
]
