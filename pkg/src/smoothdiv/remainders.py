"""The remainders R1 and R2 of the harmonic and log-harmonic expansions.

    H(x)                    = log x + gamma - psi(x)/x + R1(x)
    sum_{n<=x} log(x/n)/n   = log^2(x)/2 + gamma log x - gamma_1 + R2(x)

Both are evaluated from the finite sums on the left, never from integral
representations.  Arguments are exact rationals; the ``*_at_sqrt`` variants take
x and evaluate at sqrt(x), which is usually irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ball import DEFAULT_BITS, BallReal, PrecisionPolicy, certify
from .bernoulli import psi
from .constants import euler_gamma, stieltjes_gamma1
from .rational_core import as_rational, floor_q, floor_sqrt
from .report import RangeSpec, VerificationRecord, make_record
from .summation import harmonic_ball, log_harmonic_ball

LEMMA2_CONST = Fraction(1, 8)
LEMMA3_R2_CONST = Fraction(132, 1000)
LEMMA3_DIFF_CONST = Fraction(33, 1000)


def _checked(x) -> Fraction:
    x = as_rational(x)
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    return x


def r1(x, prec: int = DEFAULT_BITS) -> BallReal:
    """Enclosure of R1(x) = H(x) - log x - gamma + psi(x)/x."""
    x = _checked(x)
    H = harmonic_ball(floor_q(x), prec)
    logx = BallReal.exact(x, prec).log()
    return H - logx - euler_gamma(prec) + BallReal.exact(psi(x) / x, prec)


def r2(x, prec: int = DEFAULT_BITS) -> BallReal:
    """Enclosure of R2(x) = sum_{n<=x} log(x/n)/n - (log^2 x / 2 + gamma log x - gamma_1)."""
    x = _checked(x)
    n = floor_q(x)
    logx = BallReal.exact(x, prec).log()
    lhs = logx * harmonic_ball(n, prec) - log_harmonic_ball(n, prec)
    main = logx.square() / 2 + euler_gamma(prec) * logx - stieltjes_gamma1(prec)
    return lhs - main


def r1_at_sqrt(x, prec: int = DEFAULT_BITS) -> BallReal:
    """R1(sqrt x) for rational x >= 1.

    floor(sqrt x) = isqrt(floor x) exactly, so psi(sqrt x) = sqrt x - isqrt(floor x) - 1/2
    needs no decision about which side of an integer the ball lies on.
    """
    x = _checked(x)
    m = floor_sqrt(x)
    s = BallReal.exact(x, prec).sqrt()
    psi_s = s - (m + Fraction(1, 2))
    log_s = BallReal.exact(x, prec).log() / 2
    return harmonic_ball(m, prec) - log_s - euler_gamma(prec) + psi_s / s


def r2_at_sqrt(x, prec: int = DEFAULT_BITS) -> BallReal:
    x = _checked(x)
    m = floor_sqrt(x)
    log_s = BallReal.exact(x, prec).log() / 2
    lhs = log_s * harmonic_ball(m, prec) - log_harmonic_ball(m, prec)
    main = log_s.square() / 2 + euler_gamma(prec) * log_s - stieltjes_gamma1(prec)
    return lhs - main


@dataclass(frozen=True)
class RemainderValue:
    x: Fraction
    r1: BallReal
    r2: BallReal


def remainder_value(x, prec: int = DEFAULT_BITS) -> RemainderValue:
    x = _checked(x)
    return RemainderValue(x, r1(x, prec), r2(x, prec))


# --- certified lemma checks -------------------------------------------------


def _scan(claim_id: str, points, evaluate, policy: PrecisionPolicy) -> list[VerificationRecord]:
    records = []
    for x in points:
        status, lhs, rhs = certify(lambda bits, x=x: evaluate(x, bits), policy)
        records.append(make_record(claim_id, x, lhs, rhs, status))
    records.sort(key=lambda r: r.x)
    return records


def lemma2_sides(x, bits: int) -> tuple[BallReal, BallReal]:
    """(|R1(x)|, 1/(8x^2))."""
    x = _checked(x)
    return abs(r1(x, bits)), BallReal.exact(LEMMA2_CONST / (x * x), bits)


def lemma3_r2_sides(x, bits: int) -> tuple[BallReal, BallReal]:
    x = _checked(x)
    return abs(r2(x, bits)), BallReal.exact(LEMMA3_R2_CONST / (x * x), bits)


def lemma3_diff_sides(x, bits: int) -> tuple[BallReal, BallReal]:
    x = _checked(x)
    return abs(r2(x, bits) - r1(x, bits)), BallReal.exact(LEMMA3_DIFF_CONST / (x * x * x), bits)


def check_lemma2(rng: RangeSpec, policy: PrecisionPolicy = PrecisionPolicy()) -> list[VerificationRecord]:
    return _scan("r1-bound", rng.points(), lemma2_sides, policy)


def check_lemma3(rng: RangeSpec, policy: PrecisionPolicy = PrecisionPolicy()) -> list[VerificationRecord]:
    """Records for x^2 |R2| <= 0.132 (``r2-bound``) then x^3 |R2 - R1| <= 0.033 (``r2-minus-r1``)."""
    pts = rng.points()
    return _scan("r2-bound", pts, lemma3_r2_sides, policy) + _scan("r2-minus-r1", pts, lemma3_diff_sides, policy)
