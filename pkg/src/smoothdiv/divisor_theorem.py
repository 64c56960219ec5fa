"""Delta, delta and r for the divisor problem and its smoothed version.

    Delta(x) = D(x) - x (log x + 2 gamma - 1)
    delta(x) = S(x) - (log^2 x / 2 + 2 gamma log x + gamma^2 - 2 gamma_1)
    Delta(x) - x delta(x) = 1/4 + r(x)

with D(x) = sum_{n<=x} tau(n) and S(x) = sum_{n<=x} tau(n)/n.  Equivalently
r(x) = D(x) - x S(x) - x P(log x) - 1/4 for the quadratic P below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ball import (
    DEFAULT_BITS,
    BallReal,
    PrecisionPolicy,
    Status,
    certify,
    check_inequality,
    hull,
)
from .constants import euler_gamma, stieltjes_gamma1
from .rational_core import (
    DEFAULT_SIEVE_LIMIT,
    DivisorTable,
    as_rational,
    divisor_harmonic_sum,
    divisor_harmonic_sum_direct,
    divisor_sum,
    floor_q,
    floor_sqrt,
    harmonic,
    psi_sum,
    sieve_tau,
)
from .remainders import r1, r1_at_sqrt, r2_at_sqrt
from .report import VerificationRecord, make_record
from .summation import divisor_harmonic_ball, divisor_harmonic_direct_ball, harmonic_ball, log_harmonic_ball

GENERAL_CONSTANT = Fraction(316, 1000)
LARGE_CONSTANT_SAFE = Fraction(238, 1000)
LARGE_CONSTANT_PRINTED = Fraction(236, 1000)
LARGE_THRESHOLD = 300
LEMMA4_CONST = Fraction(125, 1000)
LEMMA14_CONST = Fraction(47, 1000)
COR2_MARGIN = Fraction(3, 1000)
COR2_THRESHOLD = 7
TRANSFER_THRESHOLD = 5560
TRANSFER_DELTA_COEFF = Fraction(397, 1000)
TRANSFER_SLACK = Fraction(38, 100)
LOG_VERSION_COEFF = Fraction(1001, 1000)

# exact S(x) is cheap below this; past it S comes from certified fixed-point sums
EXACT_S_LIMIT = 64
# the O(x) exact direct sum S(x) is only attempted up to here
EXACT_DIRECT_LIMIT = 5000


class DomainError(ValueError):
    """x lies outside the range where the claim is asserted."""


def _x(x, lower=1) -> Fraction:
    x = as_rational(x)
    if x < lower:
        raise DomainError(f"x must be >= {lower}, got {x}")
    return x


def S_ball(x, prec: int = DEFAULT_BITS) -> BallReal:
    x = as_rational(x)
    if floor_q(x) <= EXACT_S_LIMIT:
        return BallReal.exact(divisor_harmonic_sum(x), prec)
    return divisor_harmonic_ball(x, prec)


# --- the three error terms --------------------------------------------------


def delta_large(x, prec: int = DEFAULT_BITS) -> BallReal:
    """Delta(x) = D(x) - x (log x + 2 gamma - 1)."""
    x = _x(x)
    X = BallReal.exact(x, prec)
    return BallReal.exact(divisor_sum(x), prec) - X * (X.log() + euler_gamma(prec) * 2 - 1)


def delta_small(x, prec: int = DEFAULT_BITS) -> BallReal:
    """delta(x) = S(x) - (log^2 x / 2 + 2 gamma log x + gamma^2 - 2 gamma_1)."""
    x = _x(x)
    g = euler_gamma(prec)
    L = BallReal.exact(x, prec).log()
    main = L.square() / 2 + g * L * 2 + g.square() - stieltjes_gamma1(prec) * 2
    return S_ball(x, prec) - main


@dataclass(frozen=True)
class SmoothPolynomial:
    """P(X) = a2 X^2 + a1 X + a0 and the lines Q_m(x) = D(m) - S(m) x for m = 1..6."""

    a2: BallReal
    a1: BallReal
    a0: BallReal
    lines: dict[int, tuple[Fraction, Fraction]]  # m -> (slope, intercept)

    def P(self, X: BallReal) -> BallReal:
        return (self.a2 * X + self.a1) * X + self.a0

    def dP(self, X: BallReal) -> BallReal:
        return self.a2 * X * 2 + self.a1

    def Q(self, m: int, x) -> Fraction:
        slope, intercept = self.lines[m]
        return slope * as_rational(x) + intercept


def q_line(m: int) -> tuple[Fraction, Fraction]:
    """(slope, intercept) of Q_m(x) = D(m) - S(m) x, valid on [m, m+1)."""
    return -divisor_harmonic_sum(m), Fraction(divisor_sum(m))


def smooth_polynomial(prec: int = DEFAULT_BITS) -> SmoothPolynomial:
    g, g1 = euler_gamma(prec), stieltjes_gamma1(prec)
    a2 = BallReal.exact(Fraction(-1, 2), prec)
    a1 = -(g * 2 - 1)
    a0 = (g + g1) * 2 - g.square() - 1
    return SmoothPolynomial(a2, a1, a0, {m: q_line(m) for m in range(1, 7)})


def r_value(x, prec: int = DEFAULT_BITS) -> BallReal:
    """r(x) = D(x) - x S(x) - x P(log x) - 1/4."""
    x = _x(x)
    X = BallReal.exact(x, prec)
    P = smooth_polynomial(prec)
    D = BallReal.exact(divisor_sum(x), prec)
    return D - X * S_ball(x, prec) - X * P.P(X.log()) - Fraction(1, 4)


@dataclass(frozen=True)
class DeltaTriple:
    x: Fraction
    Delta: BallReal
    delta: BallReal
    r: BallReal

    def consistent(self) -> bool:
        """r and Delta - x delta - 1/4 overlap."""
        diff = self.Delta - self.delta * self.x - Fraction(1, 4) - self.r
        return diff.contains_zero()


def delta_triple(x, prec: int = DEFAULT_BITS) -> DeltaTriple:
    x = _x(x)
    return DeltaTriple(x, delta_large(x, prec), delta_small(x, prec), r_value(x, prec))


# --- exact and ball identities ----------------------------------------------


def lemma5_rearranged(x) -> tuple[int, Fraction]:
    """(D(x), 2x H(sqrt x) - 2 sum_{n<=sqrt x} psi(x/n) - m^2 - m) with m = floor(sqrt x)."""
    x = _x(x)
    m = floor_sqrt(x)
    rhs = 2 * x * harmonic(m) - 2 * psi_sum(x, m) - m * m - m
    return divisor_sum(x), rhs


def intro_display_as_printed(x) -> Fraction:
    """The introductory hyperbola display with its printed ``+ floor(sqrt x)`` term.

    It differs from D(x) by exactly 2 floor(sqrt x); kept only to document that.
    """
    x = _x(x)
    m = floor_sqrt(x)
    return 2 * x * harmonic(m) - 2 * psi_sum(x, m) + m - m * m


def _psi_sqrt(x: Fraction, prec: int) -> tuple[BallReal, BallReal]:
    """(sqrt x, psi(sqrt x)) as balls; floor(sqrt x) is known exactly."""
    s = BallReal.exact(x, prec).sqrt()
    return s, s - (floor_sqrt(x) + Fraction(1, 2))


def lemma5_residual(x, prec: int = DEFAULT_BITS) -> BallReal:
    """D(x) minus the right side of the R1(sqrt x) identity; encloses 0."""
    x = _x(x)
    X = BallReal.exact(x, prec)
    m = floor_sqrt(x)
    _, ps = _psi_sqrt(x, prec)
    rhs = (
        X * (X.log() + euler_gamma(prec) * 2 - 1)
        - BallReal.exact(2 * psi_sum(x, m), prec)
        + Fraction(1, 4)
        + X * r1_at_sqrt(x, prec) * 2
        - ps.square()
    )
    return BallReal.exact(divisor_sum(x), prec) - rhs


def r1_weighted_sum(x, prec: int = DEFAULT_BITS) -> BallReal:
    """2x sum_{k <= sqrt x} R1(x/k)/k."""
    x = _x(x)
    acc = BallReal.exact(0, prec)
    for k in range(1, floor_sqrt(x) + 1):
        acc = acc + r1(x / k, prec) / k
    return acc * x * 2


def lemma6_residual(x, prec: int = DEFAULT_BITS) -> BallReal:
    """x S(x) minus the right side of the log-version identity; encloses 0."""
    x = _x(x)
    X = BallReal.exact(x, prec)
    m = floor_sqrt(x)
    s, ps = _psi_sqrt(x, prec)
    log_s = X.log() / 2
    R = r1_at_sqrt(x, prec)
    log_sum = log_s * harmonic_ball(m, prec) - log_harmonic_ball(m, prec)
    rhs = (
        X * (log_s + euler_gamma(prec)).square()
        - X * R.square()
        + s * R * ps * 2
        - ps.square()
        + X * log_sum * 2
        - BallReal.exact(2 * psi_sum(x, m), prec)
        + r1_weighted_sum(x, prec)
    )
    return X * S_ball(x, prec) - rhs


def lemma6_hyperbola_exact(x) -> tuple[Fraction, Fraction]:
    """(x S(x) summed directly, 2x sum_{k<=sqrt x} H(x/k)/k - x H(sqrt x)^2), both exact."""
    x = _x(x)
    m = floor_sqrt(x)
    lhs = x * divisor_harmonic_sum_direct(x)
    rhs = 2 * x * sum((harmonic(x / k) / k for k in range(1, m + 1)), Fraction(0)) - x * harmonic(m) ** 2
    return lhs, rhs


@lru_cache(maxsize=2)
def _tau_table_sized(limit: int) -> DivisorTable:
    return sieve_tau(limit)


def _tau_table(n: int) -> DivisorTable:
    """A shared sieve covering n, sized to the next power of two."""
    return _tau_table_sized(min(max(1 << (n - 1).bit_length(), 1024), max(n, DEFAULT_SIEVE_LIMIT)))


def _record(claim_id, x, lhs, rhs, status, note=""):
    return make_record(claim_id, x, lhs, rhs, status, note)


def check_lemma5(x, prec: int = DEFAULT_BITS, radius_limit=Fraction(1, 10**20)) -> VerificationRecord:
    """Exact rearrangement plus the ball identity.

    Pass needs both: equality in rationals, and a residual ball that contains 0
    with radius below ``radius_limit``.  The record shows |residual| against
    the radius limit.
    """
    x = _x(x)
    d, rhs = lemma5_rearranged(x)
    res = lemma5_residual(x, prec)
    exact_ok = d == rhs
    ball_ok = res.contains_zero() and res.upper_fraction() - res.lower_fraction() < 2 * radius_limit
    status = Status.PASS if exact_ok and ball_ok else Status.FAIL
    note = "" if exact_ok else f"exact mismatch: D={d}, rhs={rhs}"
    return _record("lemma5", x, abs(res), BallReal.exact(radius_limit, prec), status, note)


def check_lemma6(x, prec: int = DEFAULT_BITS) -> VerificationRecord:
    """Ball identity residual contains 0, and the hyperbola form of x S(x) matches.

    The hyperbola cross-check is exact for floor(x) <= EXACT_DIRECT_LIMIT;
    above that the direct and hyperbola fixed-point enclosures must overlap.
    """
    x = _x(x)
    res = lemma6_residual(x, prec)
    n = floor_q(x)
    if n <= EXACT_DIRECT_LIMIT:
        lhs, rhs = lemma6_hyperbola_exact(x)
        hyper_ok = lhs == rhs
    else:
        direct = divisor_harmonic_direct_ball(x, _tau_table(n), prec)
        hyper_ok = (direct - divisor_harmonic_ball(x, prec)).contains_zero()
    status = Status.PASS if res.contains_zero() and hyper_ok else Status.FAIL
    zero = BallReal.exact(0, prec)
    return _record("lemma6", x, abs(res), hull(zero, abs(res)), status)


def lemma4_sides(x, bits: int) -> tuple[BallReal, BallReal]:
    x = _x(x)
    rhs = (BallReal.exact(1, bits) / BallReal.exact(x, bits).sqrt() + 1) * LEMMA4_CONST
    return abs(r1_weighted_sum(x, bits)), rhs


def lemma14_sides(x, bits: int) -> tuple[BallReal, BallReal]:
    x = _x(x, LARGE_THRESHOLD)
    X = BallReal.exact(x, bits)
    rhs = X.log() / X.rpow(Fraction(1, 4)) + BallReal.exact(LEMMA14_CONST, bits) / X.sqrt()
    return abs(r1_weighted_sum(x, bits)), rhs


def check_lemma4(x, policy: PrecisionPolicy = PrecisionPolicy()) -> VerificationRecord:
    status, lhs, rhs = certify(lambda b: lemma4_sides(x, b), policy)
    return _record("lemma4", x, lhs, rhs, status)


def check_lemma14(x, policy: PrecisionPolicy = PrecisionPolicy()) -> VerificationRecord:
    _x(x, LARGE_THRESHOLD)
    status, lhs, rhs = certify(lambda b: lemma14_sides(x, b), policy)
    return _record("lemma14", x, lhs, rhs, status)


# --- the main bound ---------------------------------------------------------


def theorem1_bound(x, regime: str = "general", prec: int = DEFAULT_BITS,
                   large_constant: Fraction = LARGE_CONSTANT_SAFE) -> BallReal:
    """1/8 + 0.316/sqrt x + 1/(64x), or log x / x^(1/4) + c/sqrt x + 1/(64x) for x >= 300."""
    X = BallReal.exact(x, prec)
    if regime == "general":
        x = _x(x)
        return GENERAL_CONSTANT / X.sqrt() + Fraction(1, 8) + Fraction(1, 64) / as_rational(x)
    if regime == "large":
        x = _x(x, LARGE_THRESHOLD)
        return X.log() / X.rpow(Fraction(1, 4)) + as_rational(large_constant) / X.sqrt() + Fraction(1, 64) / x
    raise ValueError(f"unknown regime {regime!r}")


@dataclass(frozen=True)
class RecomposedConstants:
    """Coefficients of the bound on |r| rebuilt from the remainder constants.

    General regime: constant + sqrt_coeff / sqrt x + inv_coeff / x.
    Large regime: log x / x^(1/4) + large_sqrt_coeff / sqrt x + inv_coeff / x.
    """

    constant: Fraction
    sqrt_coeff: Fraction
    large_sqrt_coeff: Fraction
    inv_coeff: Fraction


def recomposed_constants(alpha=Fraction(125, 1000), beta=Fraction(33, 1000), tail=LEMMA14_CONST) -> RecomposedConstants:
    """alpha bounds x^2 |R1|, beta bounds x^3 |R2 - R1| and tail is the weighted-sum constant.

    |r| <= alpha + 2(alpha + beta)/sqrt x + alpha^2/x, and for x >= 300 the
    alpha term is replaced by log x / x^(1/4) + tail / sqrt x.
    """
    return RecomposedConstants(alpha, 2 * (alpha + beta), alpha + 2 * beta + tail, alpha * alpha)


def theorem1_sides(x, bits: int, regime: str, large_constant=LARGE_CONSTANT_SAFE):
    return abs(r_value(x, bits)), theorem1_bound(x, regime, bits, large_constant)


def verify_theorem1(points, regime: str = "general", policy: PrecisionPolicy = PrecisionPolicy(),
                    large_constant=LARGE_CONSTANT_SAFE, claim_id: str | None = None) -> list[VerificationRecord]:
    claim_id = claim_id or f"theorem1-{regime}"
    records = []
    for x in points:
        x = _x(x, LARGE_THRESHOLD if regime == "large" else 1)
        status, lhs, rhs = certify(lambda b: theorem1_sides(x, b, regime, large_constant), policy)
        records.append(_record(claim_id, x, lhs, rhs, status))
    records.sort(key=lambda r: r.x)
    return records


def large_regime_statistic(x, prec: int = 64) -> float:
    """|r(x)| x^(1/4) / log x, informational only."""
    x = _x(x, 2)
    X = BallReal.exact(x, prec)
    return float(abs(r_value(x, prec)) * X.rpow(Fraction(1, 4)) / X.log())


def r_via_remainders(x, prec: int = DEFAULT_BITS) -> BallReal:
    """r(x) assembled from R1(sqrt x), R2(sqrt x) and the weighted R1 sum.

    r = x R1(s)^2 - 2 s R1(s) psi(s) - 2x (R2 - R1)(s) - 2x sum_{k<=s} R1(x/k)/k, s = sqrt x.
    """
    x = _x(x)
    X = BallReal.exact(x, prec)
    s, ps = _psi_sqrt(x, prec)
    R1 = r1_at_sqrt(x, prec)
    R2 = r2_at_sqrt(x, prec)
    return X * R1.square() - s * R1 * ps * 2 - X * (R2 - R1) * 2 - r1_weighted_sum(x, prec)


# --- positivity of Delta - x delta ------------------------------------------


def cor2_large_sides(x, bits: int):
    """(0.003, Delta(x) - x delta(x)) for x >= 7."""
    x = _x(x, COR2_THRESHOLD)
    return BallReal.exact(COR2_MARGIN, bits), r_value(x, bits) + Fraction(1, 4)


def smooth_gap(x, m: int, poly: SmoothPolynomial) -> BallReal:
    """F(x) = Q_m(x) - x P(log x), the value of Delta - x delta on [m, m+1)."""
    prec = poly.a0.prec
    X = BallReal.exact(x, prec)
    return BallReal.exact(poly.Q(m, x), prec) - X * poly.P(X.log())


def smooth_gap_derivative(m: int, logs: BallReal, poly: SmoothPolynomial) -> BallReal:
    """F'(x) = -S(m) - P(log x) - P'(log x) over a ball of log x values."""
    slope, _ = poly.lines[m]
    return BallReal.exact(slope, logs.prec) - poly.P(logs) - poly.dP(logs)


def corollary2_small_cells(step=Fraction(1, 1000), prec: int = DEFAULT_BITS):
    """Certify F >= 0 on [1, 7) cell by cell.

    On a cell [a, b] inside [m, m+1], F(x) >= F(c) - L (b - a)/2 with c the
    midpoint and L an enclosure bound of |F'| over the cell.  Yields one
    (a, b, lower bound ball) per cell.
    """
    poly = smooth_polynomial(prec)
    step = as_rational(step)
    for m in range(1, 7):
        a = Fraction(m)
        while a < m + 1:
            b = min(a + step, Fraction(m + 1))
            c = (a + b) / 2
            logs = hull(BallReal.exact(a, prec).log(), BallReal.exact(b, prec).log())
            d = abs(smooth_gap_derivative(m, logs, poly))
            L = d.upper_fraction()
            lower = smooth_gap(c, m, poly) - L * (b - a) / 2
            yield a, b, lower
            a = b


def verify_corollary2(points=(), policy: PrecisionPolicy = PrecisionPolicy(), small_step=Fraction(1, 1000),
                      include_small: bool = True) -> list[VerificationRecord]:
    """Records for Delta(x) - x delta(x) >= 0.003 at points x >= 7 and F >= 0 on each cell of [1, 7)."""
    records = []
    if include_small:
        zero = BallReal.exact(0, policy.working_bits)
        for a, b, lower in corollary2_small_cells(small_step, policy.working_bits):
            records.append(_record("corollary2", a, zero, lower, check_inequality(zero, lower),
                                   note=f"cell [{a}, {b}]"))
    for x in points:
        x = as_rational(x)
        if x < COR2_THRESHOLD:
            continue
        status, lhs, rhs = certify(lambda b: cor2_large_sides(x, b), policy)
        records.append(_record("corollary2", x, lhs, rhs, status))
    records.sort(key=lambda r: r.x)
    return records


# --- transfer to the logarithmic problem ------------------------------------


def transfer_bbr(delta_bound_coeff=TRANSFER_DELTA_COEFF, x=TRANSFER_THRESHOLD, prec: int = DEFAULT_BITS) -> BallReal:
    """Bound on |delta(x)| implied by |Delta(x)| <= c sqrt x and the general bound on r.

    x delta = Delta - 1/4 - r, so |delta| <= c / sqrt x + (1/4 + |r|)/x.
    """
    x = _x(x, TRANSFER_THRESHOLD)
    X = BallReal.exact(x, prec)
    c = BallReal.exact(as_rational(delta_bound_coeff), prec) if not isinstance(delta_bound_coeff, BallReal) else delta_bound_coeff
    return c / X.sqrt() + (theorem1_bound(x, "general", prec) + Fraction(1, 4)) / x


def transfer_target(x, prec: int = DEFAULT_BITS) -> BallReal:
    """0.397/sqrt x + 0.38/x."""
    X = BallReal.exact(x, prec)
    return TRANSFER_DELTA_COEFF / X.sqrt() + TRANSFER_SLACK / as_rational(x)


def transfer_sides(x, bits: int):
    return transfer_bbr(TRANSFER_DELTA_COEFF, x, bits), transfer_target(x, bits)


def verify_transfer(points, policy: PrecisionPolicy = PrecisionPolicy()) -> list[VerificationRecord]:
    records = []
    for x in points:
        x = _x(x, TRANSFER_THRESHOLD)
        status, lhs, rhs = certify(lambda b: transfer_sides(x, b), policy)
        records.append(_record("transfer-bbr", x, lhs, rhs, status))
    records.sort(key=lambda r: r.x)
    return records


def transfer_scaled_slack(x, prec: int = DEFAULT_BITS) -> BallReal:
    """x * (target - derived bound) = 0.38 - 1/4 - general bound; should grow with x."""
    derived, target = transfer_sides(x, prec)
    return (target - derived) * as_rational(x)


# --- the logarithmic version's bound, as a regression check ----------------


def log_version_sides(x, bits: int):
    x = _x(x, 2)
    return abs(delta_small(x, bits)), LOG_VERSION_COEFF / BallReal.exact(x, bits).sqrt()


def verify_log_version(points, policy: PrecisionPolicy = PrecisionPolicy()) -> list[VerificationRecord]:
    records = []
    for x in points:
        x = as_rational(x)
        if x < 2:
            continue
        status, lhs, rhs = certify(lambda b: log_version_sides(x, b), policy)
        records.append(_record("delta-log-2", x, lhs, rhs, status))
    records.sort(key=lambda r: r.x)
    return records

