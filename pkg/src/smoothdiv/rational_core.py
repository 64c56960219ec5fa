"""Exact integer and rational arithmetic for divisor and Moebius sums.

Everything here is exact: inputs are ``int`` or ``fractions.Fraction`` and no
floating point value is ever consulted.  Sieves are backed by numpy integer
arrays; summatory functions use the hyperbola method by default and the sieve
only as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from numbers import Rational

import numpy as np

DEFAULT_SIEVE_LIMIT = 10**6


class CapacityError(ValueError):
    """A sieve was requested beyond the configured size limit."""


class SieveLimitError(ValueError):
    """A table lookup fell outside the sieved range."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def floor_q(x) -> int:
    x = as_rational(x)
    return x.numerator // x.denominator


def frac(x) -> Fraction:
    """Fractional part {x} in [0, 1)."""
    x = as_rational(x)
    return Fraction(x.numerator % x.denominator, x.denominator)


def floor_sqrt(x) -> int:
    """Exact floor of sqrt(x) for rational x >= 0."""
    # floor(sqrt(x)) == isqrt(floor(x)) for x >= 0
    return isqrt(floor_q(x))


def is_square(x) -> bool:
    x = as_rational(x)
    a, b = x.numerator, x.denominator
    return a >= 0 and isqrt(a) ** 2 == a and isqrt(b) ** 2 == b


def _check_at_least_one(x: Fraction) -> None:
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")


# --- sieves -----------------------------------------------------------------


@dataclass(frozen=True)
class DivisorTable:
    limit: int
    values: np.ndarray  # values[n] = tau(n); values[0] = 0

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise SieveLimitError(f"n={n} outside sieve range [1, {self.limit}]")
        return int(self.values[n])

    def prefix_sums(self) -> np.ndarray:
        """Array whose entry n is D(n) = sum_{k<=n} tau(k)."""
        return np.cumsum(self.values, dtype=np.int64)


@dataclass(frozen=True)
class MobiusTable:
    limit: int
    values: np.ndarray  # values[n] = mu(n) in {-1, 0, 1}; values[0] = 0

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise SieveLimitError(f"n={n} outside sieve range [1, {self.limit}]")
        return int(self.values[n])

    def mertens_prefix(self) -> np.ndarray:
        return np.cumsum(self.values, dtype=np.int64)


def _check_capacity(N: int, max_limit: int) -> None:
    if N < 1:
        raise ValueError("sieve bound must be >= 1")
    if N > max_limit:
        raise CapacityError(f"N={N} exceeds the configured sieve limit {max_limit}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def sieve_tau(N: int, max_limit: int = DEFAULT_SIEVE_LIMIT) -> DivisorTable:
    _check_capacity(N, max_limit)
    tau = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        tau[d::d] += 1
    return DivisorTable(N, _readonly(tau))


def prime_flags(N: int) -> np.ndarray:
    flags = np.ones(N + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(N) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def smallest_prime_factor(N: int) -> np.ndarray:
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = spf == 0
    spf[rest] = np.arange(N + 1)[rest]
    return spf


def sieve_mobius(N: int, max_limit: int = DEFAULT_SIEVE_LIMIT) -> MobiusTable:
    _check_capacity(N, max_limit)
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    flags = prime_flags(N)
    for p in np.flatnonzero(flags):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p :: p * p] = 0
    return MobiusTable(N, _readonly(mu))


def tau_of(n: int) -> int:
    """Divisor count by trial division; independent of the sieves."""
    count = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            count += 1 if d * d == n else 2
    return count


# --- summatory functions ----------------------------------------------------


def divisor_sum(x) -> int:
    """D(x) = sum_{n <= x} tau(n) by the hyperbola method in O(sqrt x)."""
    x = as_rational(x)
    _check_at_least_one(x)
    n = floor_q(x)
    r = isqrt(n)
    return 2 * sum(n // k for k in range(1, r + 1)) - r * r


@lru_cache(maxsize=4096)
def _harmonic_int(n: int) -> Fraction:
    if n <= 0:
        return Fraction(0)
    L = lcm(*range(1, n + 1))
    return Fraction(sum(L // k for k in range(1, n + 1)), L)


def harmonic(x) -> Fraction:
    """Exact H(x) = sum_{n <= x} 1/n."""
    x = as_rational(x)
    _check_at_least_one(x)
    return _harmonic_int(floor_q(x))


@lru_cache(maxsize=256)
def _lcm_upto(n: int) -> int:
    return lcm(*range(1, n + 1)) if n >= 1 else 1


def divisor_harmonic_sum_direct(x, table: DivisorTable | None = None) -> Fraction:
    """S(x) = sum_{n <= x} tau(n)/n summed term by term over one common denominator."""
    x = as_rational(x)
    _check_at_least_one(x)
    n = floor_q(x)
    L = _lcm_upto(n)
    if table is not None and table.limit >= n:
        taus = table.values
        num = sum(int(taus[k]) * (L // k) for k in range(1, n + 1))
    else:
        num = sum(tau_of(k) * (L // k) for k in range(1, n + 1))
    return Fraction(num, L)


def divisor_harmonic_sum_hyperbola(x) -> Fraction:
    """S(x) = 2 sum_{k <= sqrt x} H(x/k)/k - H(sqrt x)^2, exactly.

    Each H(x/k)/k is expanded as sum_{i <= x/k} 1/(ik); every ik <= x divides
    lcm(1..x), so the whole sum is carried as one integer numerator.
    """
    x = as_rational(x)
    _check_at_least_one(x)
    n = floor_q(x)
    r = isqrt(n)
    L = _lcm_upto(n)
    num = 0
    for k in range(1, r + 1):
        Lk = L // k
        num += sum(Lk // i for i in range(1, n // k + 1))
    Hr = _harmonic_int(r)
    return Fraction(2 * num, L) - Hr * Hr


def divisor_harmonic_sum(x) -> Fraction:
    return divisor_harmonic_sum_hyperbola(x)


def psi_sum(x, count: int) -> Fraction:
    """Exact sum_{n <= count} psi(x/n) with psi(t) = {t} - 1/2."""
    x = as_rational(x)
    a, b = x.numerator, x.denominator
    if count <= 0:
        return Fraction(0)
    L = _lcm_upto(count)
    # {a/(b n)} = (a mod bn)/(bn); common denominator b*L
    num = sum((a % (b * k)) * (L // k) for k in range(1, count + 1))
    return Fraction(num, b * L) - Fraction(count, 2)


# --- Moebius ----------------------------------------------------------------


def _mobius_checked(x, table: MobiusTable) -> int:
    x = as_rational(x)
    _check_at_least_one(x)
    n = floor_q(x)
    if n > table.limit:
        raise SieveLimitError(f"floor(x)={n} exceeds Moebius sieve limit {table.limit}")
    return n


def mertens(x, table: MobiusTable) -> int:
    n = _mobius_checked(x, table)
    return int(np.sum(table.values[1 : n + 1]))


def mertens_log(x, table: MobiusTable) -> Fraction:
    """Exact m(x) = sum_{n <= x} mu(n)/n."""
    n = _mobius_checked(x, table)
    L = _lcm_upto(n)
    mu = table.values
    return Fraction(sum(int(mu[k]) * (L // k) for k in range(1, n + 1) if mu[k]), L)


def mobius_of(n: int) -> int:
    """mu(n) by trial division; independent of the sieve."""
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for k in range(1, n + 1):
        # sum_{i=0}^{k} C(k+1, i) B_i = 0
        acc = Fraction(0)
        c = 1
        for i in range(k):
            acc += c * B[i]
            c = c * (k + 1 - i) // (i + 1)
        B.append(-acc / (k + 1))
    return tuple(B)


def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    size = max(n, 64)
    return _bernoulli_table(size)[n]
