"""Generalised Chowla-Walum sums G_{a,b,j}(x) = sum_{n <= x^(1/a)} n^b B_j({x/n}) and their bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .ball import DEFAULT_BITS, BallReal, PrecisionPolicy, Status, certify, check_inequality
from .bernoulli import bernoulli_poly, gamma_j
from .constants import log2_ball, zeta_ball
from .rational_core import _lcm_upto, as_rational, frac
from .report import VerificationRecord, make_record

COR8_THRESHOLD = 300

# numerators of B_j(r/q) * c_j * q^j as polynomials in (r, q)
_BERNOULLI_SCALED = {
    1: (2, lambda r, q: 2 * r - q),
    2: (6, lambda r, q: 6 * r * r - 6 * r * q + q * q),
    3: (2, lambda r, q: 2 * r**3 - 3 * r * r * q + r * q * q),
}


class DomainError(ValueError):
    """Arguments outside the range where a bound is asserted."""


@dataclass(frozen=True)
class GParams:
    alpha: Fraction
    beta: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.alpha <= 1:
            raise ValueError(f"alpha must exceed 1, got {self.alpha}")
        if self.beta < 0 or int(self.beta) != self.beta:
            raise ValueError(f"beta must be a non-negative integer, got {self.beta}")
        if self.j < 2:
            raise ValueError(f"j must be >= 2, got {self.j}")


COR8_PARAMS = GParams(Fraction(2), 1, 2)


def root_cutoff(x, alpha) -> int:
    """Largest integer n >= 0 with n**alpha <= x, by exact integer comparison."""
    x = as_rational(x)
    alpha = as_rational(alpha)
    a, b = alpha.numerator, alpha.denominator
    # n^(a/b) <= p/q  <=>  n^a * q^b <= p^b
    p, q = x.numerator, x.denominator
    target = p**b

    def ok(n: int) -> bool:
        return n**a * q**b <= target

    if alpha == 2:
        n = isqrt(p // q)
    else:
        n = int(float(x) ** (1 / float(alpha)))
    while n > 0 and not ok(n):
        n -= 1
    while ok(n + 1):
        n += 1
    return n


def g_sum(p: GParams, x) -> Fraction:
    """Exact G_{alpha,beta,j}(x), carried over one common denominator."""
    x = as_rational(x)
    if x <= 1:
        raise ValueError(f"x must exceed 1, got {x}")
    if p.j not in _BERNOULLI_SCALED:
        raise NotImplementedError(f"exact evaluation needs j in 1..3, got j={p.j}; use the ball bounds")
    c, poly = _BERNOULLI_SCALED[p.j]
    N = root_cutoff(x, p.alpha)
    a, b = x.numerator, x.denominator
    L = _lcm_upto(N)
    j, beta = p.j, p.beta
    # {x/n} = r/q with q = b n, r = a mod q; B_j(r/q) = poly(r, q) / (c q^j)
    # and c b^j L^j / (c q^j) = (L/n)^j
    num = 0
    for n in range(1, N + 1):
        q = b * n
        num += n**beta * poly(a % q, q) * (L // n) ** j
    return Fraction(num, c * b**j * L**j)


def g_sum_naive(p: GParams, x) -> Fraction:
    """Term-by-term Fraction evaluation; the oracle for ``g_sum``."""
    x = as_rational(x)
    return sum(
        (Fraction(n) ** p.beta * bernoulli_poly(p.j, frac(x / n)) for n in range(1, root_cutoff(x, p.alpha) + 1)),
        Fraction(0),
    )


def log_factor(p: GParams, x, prec: int = DEFAULT_BITS) -> BallReal:
    """L_{alpha,beta}(x) = (3 - alpha)/(2 alpha (beta + 1)) * log x / log 2 + 1."""
    x = as_rational(x)
    coeff = (3 - p.alpha) / (2 * p.alpha * (p.beta + 1))
    return BallReal.exact(x, prec).log() / log2_ball(prec) * coeff + 1


def main_coefficients(p: GParams, prec: int = DEFAULT_BITS) -> tuple[BallReal, BallReal]:
    """(4 Gamma_j (zeta(j - 1/2) + 1/4), 4 Gamma_j zeta(j + 1/2))."""
    g4 = gamma_j(p.j, prec) * 4
    half = Fraction(1, 2)
    return g4 * (zeta_ball(p.j - half, prec) + Fraction(1, 4)), g4 * zeta_ball(p.j + half, prec)


def main_exponents(p: GParams) -> tuple[Fraction, Fraction]:
    a, b = p.alpha, p.beta
    return b / a - 1 / (2 * a) + Fraction(1, 2), b / a + 3 / (2 * a) - Fraction(1, 2)


def prop_main_bound(p: GParams, x, prec: int = DEFAULT_BITS) -> BallReal:
    x = as_rational(x)
    if not 1 < p.alpha < 3:
        raise DomainError(f"the main bound needs 1 < alpha < 3, got {p.alpha}")
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    c1, c2 = main_coefficients(p, prec)
    e1, e2 = main_exponents(p)
    X = BallReal.exact(x, prec)
    return (c1 * X.rpow(e1) + c2 * X.rpow(e2)) * log_factor(p, x, prec)


def trivial_bound(p: GParams, x, prec: int = DEFAULT_BITS) -> BallReal:
    """Gamma_j * x^((beta + 1)/alpha)."""
    x = as_rational(x)
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    return gamma_j(p.j, prec) * BallReal.exact(x, prec).rpow(Fraction(p.beta + 1) / p.alpha)


# --- the (2, 1, 2) case ----------------------------------------------------


def _cor8_x(x) -> Fraction:
    x = as_rational(x)
    if x < COR8_THRESHOLD:
        raise DomainError(f"the x^(3/4) log x bound is asserted for x >= {COR8_THRESHOLD}, got {x}")
    return x


def cor8_rhs(x, prec: int = DEFAULT_BITS) -> BallReal:
    X = BallReal.exact(x, prec)
    return X.rpow(Fraction(3, 4)) * X.log()


def cor8_intermediate(x, prec: int = DEFAULT_BITS) -> BallReal:
    """2.81 x^(3/4) (1 + log x / (8 log 2))."""
    X = BallReal.exact(x, prec)
    return X.rpow(Fraction(3, 4)) * (X.log() / (log2_ball(prec) * 8) + 1) * Fraction(281, 100)


def cor8_sides(x, bits: int, lhs: Fraction | None = None) -> tuple[BallReal, BallReal]:
    x = _cor8_x(x)
    g = abs(g_sum(COR8_PARAMS, x)) if lhs is None else lhs
    return BallReal.exact(g, bits), cor8_rhs(x, bits)


def check_corollary8(points, policy: PrecisionPolicy = PrecisionPolicy()) -> list[VerificationRecord]:
    """Records certifying |G_{2,1,2}(x)| < x^(3/4) log x at each point."""
    records = []
    for x in points:
        x = _cor8_x(x)
        g = abs(g_sum(COR8_PARAMS, x))
        status, lhs, rhs = certify(lambda bits: cor8_sides(x, bits, g), policy, strict=True)
        records.append(make_record("cor8", x, lhs, rhs, status))
    records.sort(key=lambda r: r.x)
    return records


def check_corollary8_intermediate(points, policy: PrecisionPolicy = PrecisionPolicy()) -> list[VerificationRecord]:
    """The two-step chain |G| < 2.81 x^(3/4)(1 + log x/(8 log 2)) < x^(3/4) log x.

    Emits two records per point, ``cor8-step1`` and ``cor8-step2``.
    """
    records = []
    for x in points:
        x = _cor8_x(x)
        g = abs(g_sum(COR8_PARAMS, x))
        s1 = certify(lambda bits: (BallReal.exact(g, bits), cor8_intermediate(x, bits)), policy, strict=True)
        s2 = certify(lambda bits: (cor8_intermediate(x, bits), cor8_rhs(x, bits)), policy, strict=True)
        records.append(make_record("cor8-step1", x, s1[1], s1[2], s1[0]))
        records.append(make_record("cor8-step2", x, s2[1], s2[2], s2[0]))
    records.sort(key=lambda r: (r.x, r.claim_id))
    return records


def corollary8_coefficient_checks(prec: int = DEFAULT_BITS) -> dict[str, Status]:
    """Certify 1.9 < 4 Gamma_2 (zeta(3/2) + 1/4) < 1.91 and 0.89 < 4 Gamma_2 zeta(5/2) < 0.9."""
    c1, c2 = main_coefficients(COR8_PARAMS, prec)
    q = lambda v: BallReal.exact(Fraction(v), prec)
    return {
        "1.9 < c1": check_inequality(q("1.9"), c1, strict=True),
        "c1 < 1.91": check_inequality(c1, q("1.91"), strict=True),
        "0.89 < c2": check_inequality(q("0.89"), c2, strict=True),
        "c2 < 0.9": check_inequality(c2, q("0.9"), strict=True),
    }
