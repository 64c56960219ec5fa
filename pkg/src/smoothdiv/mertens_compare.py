"""M(x) - x m(x), its first sign change, and the comparison of the two suprema.

M(x) = sum_{n<=x} mu(n) and m(x) = sum_{n<=x} mu(n)/n.

The sign scan is exact: m is carried as an integer numerator over
lcm(1..limit).  The ratio scan to 10^6 cannot afford that denominator, so m
is carried in fixed point with an explicit error count and each comparison is
decided on the resulting interval; an undecided point triggers a rescan at
doubled scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ball import DEFAULT_BITS, BallReal, Status
from .rational_core import MobiusTable, SieveLimitError, _lcm_upto, mertens, mertens_log, sieve_mobius
from .report import VerificationRecord, make_record

RATIO_THRESHOLD = 94
RATIO_LOW = Fraction(2, 3)
RATIO_HIGH = Fraction(3, 2)
_CENTER = (RATIO_LOW + RATIO_HIGH) / 2
_HALF_WIDTH = (RATIO_HIGH - RATIO_LOW) / 2


def _table(table: MobiusTable | None, n: int) -> MobiusTable:
    if table is None:
        return sieve_mobius(max(n, 2))
    if n > table.limit:
        raise SieveLimitError(f"x={n} exceeds Moebius sieve limit {table.limit}")
    return table


def mertens_gap(x: int, table: MobiusTable | None = None) -> Fraction:
    """Exact M(x) - x m(x)."""
    if x < 1:
        raise ValueError("x must be >= 1")
    t = _table(table, x)
    return mertens(x, t) - x * mertens_log(x, t)


@dataclass(frozen=True)
class SignChangeReport:
    first_nonnegative_x: int | None
    values_before_after: tuple[Fraction, Fraction] | None
    scan_limit: int
    negative_from: int = 2

    @property
    def found(self) -> bool:
        return self.first_nonnegative_x is not None


def find_first_sign_change(limit: int, table: MobiusTable | None = None) -> SignChangeReport:
    """Smallest x in [2, limit] with M(x) - x m(x) >= 0.

    x = 1 gives exactly 0 and is skipped.  The scan is exact integer arithmetic
    with L = lcm(1..limit) and A = L m(x).
    """
    if limit < 2:
        return SignChangeReport(None, None, limit)
    t = _table(table, limit)
    mu = t.values[: limit + 1].tolist()
    L = _lcm_upto(limit)
    # G(n) = L (M(n) - n m(n)) obeys G(n) = G(n-1) - A(n-1), with G(1) = 0
    A = L  # L m(1)
    G = 0
    for n in range(2, limit + 1):
        G_prev = G
        G -= A
        if mu[n]:
            A += mu[n] * (L // n)
        if G >= 0:
            return SignChangeReport(n, (Fraction(G_prev, L), Fraction(G, L)), limit)
    return SignChangeReport(None, None, limit)


# --- ratio of suprema -------------------------------------------------------


@dataclass
class RatioScan:
    """Outcome of the exhaustive ratio scan on [threshold, limit]."""

    limit: int
    scale_bits: int
    checked: int = 0
    counts: dict = field(default_factory=lambda: {s: 0 for s in Status})
    undecided: list[int] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)
    records: list[VerificationRecord] = field(default_factory=list)
    extreme_low: tuple[int, float] | None = None
    extreme_high: tuple[int, float] | None = None

    @property
    def all_pass(self) -> bool:
        return self.counts[Status.PASS] == self.checked and self.checked > 0


def _ratio_record(x: int, a_lo: int, a_hi: int, b: int, scale: int, status: Status) -> VerificationRecord:
    """Record |A/B - 13/12| <= 5/12, which is 2/3 <= A/B <= 3/2."""
    one = 1 << scale
    lo = Fraction(a_lo, one * b)
    hi = Fraction(a_hi, one * b)
    dev_hi = max(abs(lo - _CENTER), abs(hi - _CENTER))
    dev_lo = Fraction(0) if lo <= _CENTER <= hi else min(abs(lo - _CENTER), abs(hi - _CENTER))
    lhs = BallReal.from_rational_bounds(dev_lo, dev_hi, DEFAULT_BITS)
    return make_record("mertens-ratio", x, lhs, BallReal.exact(_HALF_WIDTH), status)


def _scan(limit: int, mu: list[int], scale: int, threshold: int, record_all: bool) -> RatioScan:
    """One pass; A(x) = sup_{t<=x} |m(t)| t, B(x) = max_{n<=x} |M(n)|.

    m is constant on [n, n+1), so the supremum over real t <= x is
    max(max_{n<x} |m(n)| (n+1), |m(x)| x) for integer x.
    Fixed point: V = sum mu(k) floor(2^s/k).  Each floor loses less than one
    unit, upward in the true value when mu(k) = 1 and downward when mu(k) = -1,
    so 2^s m(n) lies in [V - e_minus, V + e_plus].
    """
    out = RatioScan(limit, scale)
    one = 1 << scale
    V = 0
    e_plus = e_minus = 0
    M = 0
    B = 0
    # running sup of |m(n)|(n+1) over n < x, as a scaled interval
    left_lo = left_hi = 0
    prev_status = None
    for n in range(1, limit + 1):
        u = mu[n]
        if u:
            M += u
            if u > 0:
                V += one // n
                e_plus += 1
            else:
                V -= one // n
                e_minus += 1
        if abs(M) > B:
            B = abs(M)
        # |m(n)| * 2^s lies in [abs_lo, abs_hi]
        lo, hi = V - e_minus, V + e_plus
        if lo >= 0:
            abs_lo, abs_hi = lo, hi
        elif hi <= 0:
            abs_lo, abs_hi = -hi, -lo
        else:
            abs_lo, abs_hi = 0, max(-lo, hi)
        a_lo = max(left_lo, abs_lo * n)
        a_hi = max(left_hi, abs_hi * n)
        if n >= threshold:
            out.checked += 1
            # 2/3 <= A/B <= 3/2  <=>  2B <= 3A and 2A <= 3B   (A scaled by 2^s)
            lo_ok = 2 * B * one <= 3 * a_lo
            hi_ok = 2 * a_hi <= 3 * B * one
            if lo_ok and hi_ok:
                status = Status.PASS
            elif 2 * B * one > 3 * a_hi or 2 * a_lo > 3 * B * one:
                status = Status.FAIL
                out.failures.append(n)
            else:
                status = Status.INCONCLUSIVE
                out.undecided.append(n)
            out.counts[status] += 1
            if record_all or status is not Status.PASS or status is not prev_status or n in (threshold, limit):
                out.records.append(_ratio_record(n, a_lo, a_hi, B, scale, status))
            prev_status = status
            r = a_lo / (B * one)
            if out.extreme_low is None or r < out.extreme_low[1]:
                out.extreme_low = (n, r)
            r = a_hi / (B * one)
            if out.extreme_high is None or r > out.extreme_high[1]:
                out.extreme_high = (n, r)
        left_lo = max(left_lo, abs_lo * (n + 1))
        left_hi = max(left_hi, abs_hi * (n + 1))
    return out


def ratio_scan(limit: int, table: MobiusTable | None = None, scale_bits: int = 96, max_retries: int = 3,
               threshold: int = RATIO_THRESHOLD, record_all: bool = False) -> RatioScan:
    """Check 2/3 <= sup|m(t)|t / sup|M(t)| <= 3/2 for every integer x in [threshold, limit].

    Records are kept for the first and last x, for every non-Pass x and where
    the status changes, unless ``record_all``.
    """
    if limit < threshold:
        raise ValueError(f"limit must be >= {threshold}")
    t = _table(table, limit)
    mu = t.values[: limit + 1].tolist()
    scale = scale_bits
    for _ in range(max_retries + 1):
        out = _scan(limit, mu, scale, threshold, record_all)
        if not out.undecided:
            return out
        scale *= 2
    return out


def ratio_check(limit: int, table: MobiusTable | None = None, **kw) -> list[VerificationRecord]:
    return ratio_scan(limit, table, **kw).records


def ratio_below_threshold(table: MobiusTable | None = None, threshold: int = RATIO_THRESHOLD) -> list[int]:
    """Integers x < threshold where the ratio leaves [2/3, 3/2]; informational."""
    t = _table(table, threshold)
    mu = t.values[: threshold + 1].tolist()
    out = _scan(threshold - 1, mu, 128, 1, record_all=True)
    return [r.x.numerator for r in out.records if r.status is not Status.PASS]


def gap_plus_two_histogram(limit: int, table: MobiusTable | None = None, bins: int = 20):
    """Histogram of M(x) - x m(x) + 2 for 2 <= x <= limit (floating point, informational)."""
    t = _table(table, limit)
    mu = t.values[1 : limit + 1].astype(np.float64)
    n = np.arange(1, limit + 1, dtype=np.float64)
    M = np.cumsum(mu)
    m = np.cumsum(mu / n)
    g = (M - n * m + 2)[1:]
    return np.histogram(g, bins=bins)


def sign_scan_records(limit: int, table: MobiusTable | None = None,
                      prec: int = DEFAULT_BITS) -> tuple[list[VerificationRecord], SignChangeReport]:
    """Per-x records of the exact sign scan.

    For 2 <= x before the first sign change the record certifies gap(x) < 0
    (lhs = gap, rhs = 0).  At the sign change itself it certifies gap >= 0
    (lhs = 0, rhs = gap).  The scan stops there.
    """
    zero = BallReal.exact(0, prec)
    records: list[VerificationRecord] = []
    if limit < 2:
        return records, SignChangeReport(None, None, limit)
    t = _table(table, limit)
    mu = t.values[: limit + 1].tolist()
    L = _lcm_upto(limit)
    A = L
    G = 0
    for n in range(2, limit + 1):
        G_prev = G
        G -= A
        if mu[n]:
            A += mu[n] * (L // n)
        gap = BallReal.from_ratio(G, L, prec)
        if G >= 0:
            records.append(make_record("mertens-sign", n, zero, gap, Status.PASS, note="first sign change"))
            return records, SignChangeReport(n, (Fraction(G_prev, L), Fraction(G, L)), limit)
        records.append(make_record("mertens-sign", n, gap, zero, Status.PASS))
    return records, SignChangeReport(None, None, limit)
