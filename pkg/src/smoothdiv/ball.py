"""Midpoint-radius real arithmetic with certified enclosures.

A :class:`BallReal` stores a binary floating midpoint (an mpmath raw ``mpf``
tuple rounded to ``prec`` bits) and a nonnegative radius rounded upward.  The
true value is guaranteed to lie in ``[mid - rad, mid + rad]``.

Field operations propagate radii explicitly and add one ulp of the rounded
midpoint.  Square root, log, exp and cos/sin go through mpmath's outward
rounded interval kernels (``mpmath.libmp.libmpi``) and are converted back to
midpoint-radius form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath.libmp import (
    fone,
    fzero,
    from_int,
    from_man_exp,
    from_rational,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_mul,
    mpf_neg,
    mpf_shift,
    mpf_sub,
    round_ceiling,
    round_floor,
    round_nearest,
    to_str,
)
from mpmath.libmp.libmpi import mpi_cos_sin, mpi_exp, mpi_log, mpi_pi, mpi_sqrt

DEFAULT_BITS = 128
RAD_PREC = 32
GUARD_BITS = 16


def mpf_to_fraction(m) -> Fraction:
    sign, man, exp, _ = m
    if not man:
        if m != fzero:
            raise ValueError("non-finite value")
        return Fraction(0)
    v = int(man)
    if sign:
        v = -v
    return Fraction(v << exp) if exp >= 0 else Fraction(v, 1 << -exp)


def _ulp(m, prec: int):
    """An upper bound for the rounding error of a ``prec``-bit result ``m``."""
    if m == fzero:
        return fzero
    _, _, exp, bc = m
    return mpf_shift(fone, exp + bc - prec)


def _radd(*terms):
    acc = fzero
    for t in terms:
        acc = mpf_add(acc, t, RAD_PREC, round_ceiling)
    return acc


def _rmul(a, b):
    return mpf_mul(mpf_abs(a), mpf_abs(b), RAD_PREC, round_ceiling)


def _fraction_to_mpf_up(q: Fraction):
    return from_rational(q.numerator, q.denominator, RAD_PREC, round_ceiling)


class BallReal:
    """A real number known to lie within ``rad`` of ``mid``."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=fzero, prec: int = DEFAULT_BITS):
        if rad[0]:
            raise ValueError("radius must be nonnegative")
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # -- construction ---------------------------------------------------------

    @classmethod
    def exact(cls, value, prec: int = DEFAULT_BITS) -> "BallReal":
        if isinstance(value, BallReal):
            return value
        if isinstance(value, int):
            if value.bit_length() <= prec:
                return cls(from_int(value), fzero, prec)
            value = Fraction(value)
        q = Fraction(value)
        mid = from_rational(q.numerator, q.denominator, prec, round_nearest)
        err = abs(q - mpf_to_fraction(mid))
        return cls(mid, _fraction_to_mpf_up(err) if err else fzero, prec)

    @classmethod
    def from_bounds(cls, lo, hi, prec: int = DEFAULT_BITS) -> "BallReal":
        """Smallest convenient ball containing the mpf interval [lo, hi]."""
        if mpf_cmp(lo, hi) > 0:
            raise ValueError("empty interval")
        mid = mpf_shift(mpf_add(lo, hi, prec, round_nearest), -1)
        rad = mpf_sub(hi, mid, RAD_PREC, round_ceiling)
        rad2 = mpf_sub(mid, lo, RAD_PREC, round_ceiling)
        if mpf_cmp(rad2, rad) > 0:
            rad = rad2
        if rad[0]:
            rad = fzero
        return cls(mid, rad, prec)

    @classmethod
    def from_rational_bounds(cls, lo: Fraction, hi: Fraction, prec: int = DEFAULT_BITS) -> "BallReal":
        lo_m = from_rational(lo.numerator, lo.denominator, prec + GUARD_BITS, round_floor)
        hi_m = from_rational(hi.numerator, hi.denominator, prec + GUARD_BITS, round_ceiling)
        return cls.from_bounds(lo_m, hi_m, prec)

    @classmethod
    def from_ratio(cls, num: int, den: int, prec: int = DEFAULT_BITS) -> "BallReal":
        """Ball for num/den without reducing the fraction (no gcd on huge operands)."""
        if den <= 0:
            raise ValueError("denominator must be positive")
        lo = from_rational(num, den, prec + GUARD_BITS, round_floor)
        hi = from_rational(num, den, prec + GUARD_BITS, round_ceiling)
        return cls.from_bounds(lo, hi, prec)

    @classmethod
    def from_fixed(cls, value: int, err_below: int, err_above: int, scale_bits: int,
                   prec: int = DEFAULT_BITS) -> "BallReal":
        """Ball for a quantity t with t * 2**scale_bits in [value - err_below, value + err_above]."""
        lo = from_man_exp(value - err_below, -scale_bits)
        hi = from_man_exp(value + err_above, -scale_bits)
        return cls.from_bounds(lo, hi, prec)

    def with_prec(self, prec: int) -> "BallReal":
        return BallReal(self.mid, self.rad, prec)

    # -- inspection -----------------------------------------------------------

    def lower(self):
        return mpf_sub(self.mid, self.rad, self.prec + GUARD_BITS, round_floor)

    def upper(self):
        return mpf_add(self.mid, self.rad, self.prec + GUARD_BITS, round_ceiling)

    def lower_fraction(self) -> Fraction:
        return mpf_to_fraction(self.mid) - mpf_to_fraction(self.rad)

    def upper_fraction(self) -> Fraction:
        return mpf_to_fraction(self.mid) + mpf_to_fraction(self.rad)

    def contains(self, value) -> bool:
        if isinstance(value, BallReal):
            return self.lower_fraction() <= value.lower_fraction() and value.upper_fraction() <= self.upper_fraction()
        q = Fraction(value)
        return self.lower_fraction() <= q <= self.upper_fraction()

    def contains_zero(self) -> bool:
        return mpf_cmp(mpf_abs(self.mid), self.rad) <= 0

    def is_positive(self) -> bool:
        return self.lower()[0] == 0 and self.lower() != fzero

    def is_negative(self) -> bool:
        up = self.upper()
        return up[0] == 1 and up != fzero

    def __float__(self) -> float:
        from mpmath.libmp import to_float

        return to_float(self.mid)

    def __repr__(self) -> str:
        return f"BallReal({to_str(self.mid, 20)} +/- {to_str(self.rad, 3)})"

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "BallReal":
        if isinstance(other, BallReal):
            return other
        if isinstance(other, (int, Fraction)):
            return BallReal.exact(other, self.prec)
        return NotImplemented

    def __neg__(self) -> "BallReal":
        return BallReal(mpf_neg(self.mid), self.rad, self.prec)

    def __pos__(self) -> "BallReal":
        return self

    def __add__(self, other) -> "BallReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        mid = mpf_add(self.mid, other.mid, prec, round_nearest)
        return BallReal(mid, _radd(self.rad, other.rad, _ulp(mid, prec)), prec)

    __radd__ = __add__

    def __sub__(self, other) -> "BallReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        mid = mpf_sub(self.mid, other.mid, prec, round_nearest)
        return BallReal(mid, _radd(self.rad, other.rad, _ulp(mid, prec)), prec)

    def __rsub__(self, other) -> "BallReal":
        return (-self).__add__(other)

    def __mul__(self, other) -> "BallReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        mid = mpf_mul(self.mid, other.mid, prec, round_nearest)
        rad = _radd(
            _rmul(self.mid, other.rad),
            _rmul(other.mid, self.rad),
            _rmul(self.rad, other.rad),
            _ulp(mid, prec),
        )
        return BallReal(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BallReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.contains_zero():
            raise ZeroDivisionError("divisor ball contains zero")
        prec = max(self.prec, other.prec)
        mid = mpf_div(self.mid, other.mid, prec, round_nearest)
        if self.rad == fzero and other.rad == fzero:
            return BallReal(mid, _ulp(mid, prec), prec)
        bm = mpf_abs(other.mid)
        # |a/b - am/bm| <= (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
        num = _radd(_rmul(self.mid, other.rad), _rmul(other.mid, self.rad))
        den = mpf_mul(bm, mpf_sub(bm, other.rad, RAD_PREC, round_floor), RAD_PREC, round_floor)
        rad = _radd(mpf_div(num, den, RAD_PREC, round_ceiling), _ulp(mid, prec))
        return BallReal(mid, rad, prec)

    def __rtruediv__(self, other) -> "BallReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, n: int) -> "BallReal":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = BallReal.exact(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.square()
        return result

    def square(self) -> "BallReal":
        if self.contains_zero():
            m = abs(self)
            return m * m
        return self * self

    def __abs__(self) -> "BallReal":
        if not self.contains_zero():
            return BallReal(mpf_abs(self.mid), self.rad, self.prec)
        hi = mpf_add(mpf_abs(self.mid), self.rad, self.prec + GUARD_BITS, round_ceiling)
        return BallReal.from_bounds(fzero, hi, self.prec)

    # -- interval-kernel functions -------------------------------------------

    def _interval(self, wp: int):
        lo = mpf_sub(self.mid, self.rad, wp, round_floor)
        hi = mpf_add(self.mid, self.rad, wp, round_ceiling)
        return lo, hi

    def _apply(self, kernel) -> "BallReal":
        wp = self.prec + GUARD_BITS
        lo, hi = kernel(self._interval(wp), wp)
        return BallReal.from_bounds(lo, hi, self.prec)

    def sqrt(self) -> "BallReal":
        if self.lower()[0]:
            raise ValueError("sqrt of a ball reaching below zero")
        return self._apply(mpi_sqrt)

    def log(self) -> "BallReal":
        if not self.is_positive():
            raise ValueError("log of a ball that is not strictly positive")
        return self._apply(mpi_log)

    def exp(self) -> "BallReal":
        return self._apply(mpi_exp)

    def cos_sin(self) -> tuple["BallReal", "BallReal"]:
        wp = self.prec + GUARD_BITS
        (clo, chi), (slo, shi) = mpi_cos_sin(self._interval(wp), wp)
        return BallReal.from_bounds(clo, chi, self.prec), BallReal.from_bounds(slo, shi, self.prec)

    def rpow(self, exponent) -> "BallReal":
        """self ** exponent for a rational exponent, self > 0."""
        e = Fraction(exponent)
        if e.denominator == 1 and e >= 0:
            return self ** int(e)
        return (self.log() * e).exp()


def pi_ball(prec: int = DEFAULT_BITS) -> BallReal:
    lo, hi = mpi_pi(prec + GUARD_BITS)
    return BallReal.from_bounds(lo, hi, prec)


def as_ball(value, prec: int = DEFAULT_BITS) -> BallReal:
    if isinstance(value, BallReal):
        return value
    return BallReal.exact(value, prec)


def hull(a: BallReal, b: BallReal) -> BallReal:
    lo = a.lower() if mpf_cmp(a.lower(), b.lower()) <= 0 else b.lower()
    hi = a.upper() if mpf_cmp(a.upper(), b.upper()) >= 0 else b.upper()
    return BallReal.from_bounds(lo, hi, max(a.prec, b.prec))


# --- verdicts ---------------------------------------------------------------


class Status(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


def check_inequality(lhs, rhs, strict: bool = False) -> Status:
    """Certify lhs <= rhs (or lhs < rhs when ``strict``)."""
    lhs = as_ball(lhs)
    rhs = as_ball(rhs)
    c = mpf_cmp(lhs.upper(), rhs.lower())
    if c < 0 or (c == 0 and not strict):
        return Status.PASS
    c = mpf_cmp(lhs.lower(), rhs.upper())
    if c > 0 or (c == 0 and strict):
        return Status.FAIL
    return Status.INCONCLUSIVE


@dataclass(frozen=True)
class PrecisionPolicy:
    working_bits: int = DEFAULT_BITS
    max_retries: int = 4

    def __post_init__(self):
        if self.working_bits < 53:
            raise ValueError("working_bits must be >= 53")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")

    def schedule(self) -> list[int]:
        """Working precisions to try: the base, then doubled on each retry."""
        return [self.working_bits << i for i in range(self.max_retries + 1)]


def certify(
    evaluate: Callable[[int], tuple[BallReal, BallReal]],
    policy: PrecisionPolicy = PrecisionPolicy(),
    strict: bool = False,
) -> tuple[Status, BallReal, BallReal]:
    """Evaluate ``lhs <= rhs`` at increasing precision until it is decided.

    ``evaluate(bits)`` returns the pair (lhs, rhs).  A final Inconclusive is
    returned as such, never converted to Fail.
    """
    status = Status.INCONCLUSIVE
    lhs = rhs = None
    for bits in policy.schedule():
        lhs, rhs = evaluate(bits)
        status = check_inequality(lhs, rhs, strict=strict)
        if status is not Status.INCONCLUSIVE:
            break
    return status, lhs, rhs
