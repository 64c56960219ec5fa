"""Fixed-point prefix sums with certified error, for large summation ranges.

Exact rationals such as H(10^6) have hundreds of thousands of digits, so long
sums are carried as integers scaled by 2**scale_bits.  Every stored value
``v`` comes with a one-sided error count ``e``: the true scaled value lies in
``[v, v + e]``.  Checkpoints every ``STRIDE`` terms keep memory small.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from .ball import GUARD_BITS, BallReal
from .rational_core import DivisorTable, as_rational, floor_q, harmonic, smallest_prime_factor

STRIDE = 32


def scale_for(prec: int) -> int:
    return prec + 64


class HarmonicTable:
    """H(n) * 2**scale_bits, rounded down term by term (error < n units)."""

    def __init__(self, scale_bits: int):
        self.scale_bits = scale_bits
        self._one = 1 << scale_bits
        self._checkpoints = [0]

    def _extend(self, n: int) -> None:
        one = self._one
        cps = self._checkpoints
        while (len(cps) - 1) * STRIDE < n:
            start = (len(cps) - 1) * STRIDE
            cps.append(cps[-1] + sum(one // k for k in range(start + 1, start + STRIDE + 1)))

    def fixed(self, n: int) -> tuple[int, int]:
        """(v, e) with H(n) * 2**scale_bits in [v, v + e]."""
        if n <= 0:
            return 0, 0
        self._extend(n)
        base = n // STRIDE
        one = self._one
        v = self._checkpoints[base] + sum(one // k for k in range(base * STRIDE + 1, n + 1))
        return v, n

    def ball(self, n: int, prec: int) -> BallReal:
        v, e = self.fixed(n)
        return BallReal.from_fixed(v, 0, e, self.scale_bits, prec)


class LogHarmonicTable:
    """sum_{k<=n} log(k)/k * 2**scale_bits with one-sided error counts.

    log k is assembled from certified logs of its prime factors.
    """

    def __init__(self, scale_bits: int):
        self.scale_bits = scale_bits
        self._spf = smallest_prime_factor(1024)
        self._prime_logs: dict[int, tuple[int, int]] = {}
        self._checkpoints = [(0, 0)]

    def _log_prime(self, p: int) -> tuple[int, int]:
        cached = self._prime_logs.get(p)
        if cached is not None:
            return cached
        s = self.scale_bits
        b = BallReal.exact(p, s + GUARD_BITS).log()
        lo = b.lower_fraction() * (1 << s)
        hi = b.upper_fraction() * (1 << s)
        v = floor_q(lo)
        e = -floor_q(-hi) - v
        self._prime_logs[p] = (v, e)
        return v, e

    def log_fixed(self, k: int) -> tuple[int, int]:
        """(v, e) with log(k) * 2**scale_bits in [v, v + e]."""
        if k >= len(self._spf):
            self._spf = smallest_prime_factor(max(k, 2 * (len(self._spf) - 1)))
        spf = self._spf
        v = e = 0
        while k > 1:
            p = int(spf[k])
            vp, ep = self._log_prime(p)
            v += vp
            e += ep
            k //= p
        return v, e

    def _block(self, start: int, stop: int) -> tuple[int, int]:
        v = e = 0
        for k in range(max(start, 2), stop + 1):
            lv, le = self.log_fixed(k)
            v += lv // k
            e += le // k + 2
        return v, e

    def _extend(self, n: int) -> None:
        cps = self._checkpoints
        while (len(cps) - 1) * STRIDE < n:
            start = (len(cps) - 1) * STRIDE
            bv, be = self._block(start + 1, start + STRIDE)
            cv, ce = cps[-1]
            cps.append((cv + bv, ce + be))

    def fixed(self, n: int) -> tuple[int, int]:
        if n <= 1:
            return 0, 0
        self._extend(n)
        base = n // STRIDE
        cv, ce = self._checkpoints[base]
        bv, be = self._block(base * STRIDE + 1, n)
        return cv + bv, ce + be

    def ball(self, n: int, prec: int) -> BallReal:
        v, e = self.fixed(n)
        return BallReal.from_fixed(v, 0, e, self.scale_bits, prec)


@lru_cache(maxsize=8)
def harmonic_table(scale_bits: int) -> HarmonicTable:
    return HarmonicTable(scale_bits)


@lru_cache(maxsize=8)
def log_harmonic_table(scale_bits: int) -> LogHarmonicTable:
    return LogHarmonicTable(scale_bits)


def harmonic_ball(n: int, prec: int) -> BallReal:
    """Certified H(n); exact for small n, table-backed otherwise."""
    if n <= 64:
        return BallReal.exact(harmonic(max(n, 1)) if n >= 1 else 0, prec)
    return harmonic_table(scale_for(prec)).ball(n, prec)


def log_harmonic_ball(n: int, prec: int) -> BallReal:
    """Certified sum_{k<=n} log(k)/k."""
    return log_harmonic_table(scale_for(prec)).ball(n, prec)


def divisor_harmonic_ball(x, prec: int) -> BallReal:
    """Certified S(x) = sum_{n<=x} tau(n)/n by the hyperbola identity.

    S(x) = 2 sum_{k<=sqrt x} H(floor(x/k))/k - H(floor(sqrt x))^2.
    """
    n = floor_q(as_rational(x))
    r = isqrt(n)
    s = scale_for(prec)
    table = harmonic_table(s)
    lo = 0
    err = 0
    for k in range(1, r + 1):
        m = n // k
        v, e = table.fixed(m)
        lo += v // k
        err += e // k + 2
    Hr = harmonic(r)
    return BallReal.from_fixed(2 * lo, 0, 2 * err, s, prec) - BallReal.exact(Hr * Hr, prec)


def divisor_harmonic_direct_ball(x, table: DivisorTable, prec: int) -> BallReal:
    """Certified S(x) summed term by term from a divisor sieve."""
    n = floor_q(as_rational(x))
    if n > table.limit:
        raise ValueError(f"floor(x)={n} exceeds the divisor table limit {table.limit}")
    s = scale_for(prec)
    one = 1 << s
    taus = table.values[: n + 1].tolist()
    v = sum(taus[k] * (one // k) for k in range(1, n + 1))
    e = int(np.sum(table.values[1 : n + 1]))
    return BallReal.from_fixed(v, 0, e, s, prec)


def fixed_to_fraction_bounds(v: int, e: int, scale_bits: int) -> tuple[Fraction, Fraction]:
    d = 1 << scale_bits
    return Fraction(v, d), Fraction(v + e, d)
