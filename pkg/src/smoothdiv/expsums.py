"""Exponential sums sum_{N < n <= N1} e(f(n)) and explicit bounds for them.

e(t) = exp(2 pi i t).  Phases that are rational at integers are reduced mod 1
exactly before any trigonometric evaluation, so f(n) = m x / n stays accurate
even when m x / n is around 10^9.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from mpmath.libmp import from_rational, mpf_cos_sin_pi, round_nearest

from .ball import DEFAULT_BITS, BallReal, Status, as_ball, check_inequality, pi_ball
from .rational_core import as_rational, floor_q, frac


@dataclass(frozen=True)
class PhaseFunction:
    """A phase f with derivatives and the metadata the bounds need.

    ``exact`` returns f(n) as a rational at integer n when that is possible;
    ``f``, ``f1`` and ``f2`` evaluate f, f', f'' at rational t as balls.
    """

    f: Callable[[Fraction, int], BallReal]
    f1: Callable[[Fraction, int], BallReal]
    f2: Callable[[Fraction, int], BallReal]
    exact: Callable[[int], Fraction] | None = None
    derivative_monotonic: bool = False
    second_derivative_range: tuple[Fraction, Fraction] | None = None
    label: str = ""

    def negated(self) -> "PhaseFunction":
        ex = self.exact
        rng = self.second_derivative_range
        return PhaseFunction(
            f=lambda t, p: -self.f(t, p),
            f1=lambda t, p: -self.f1(t, p),
            f2=lambda t, p: -self.f2(t, p),
            exact=None if ex is None else (lambda n: -ex(n)),
            derivative_monotonic=False,
            second_derivative_range=None if rng is None else (-rng[1], -rng[0]),
            label=f"-({self.label})",
        )


def linear_phase(theta) -> PhaseFunction:
    theta = as_rational(theta)
    return PhaseFunction(
        f=lambda t, p: BallReal.exact(theta * t, p),
        f1=lambda t, p: BallReal.exact(theta, p),
        f2=lambda t, p: BallReal.exact(0, p),
        exact=lambda n: theta * n,
        derivative_monotonic=True,
        second_derivative_range=(Fraction(0), Fraction(0)),
        label=f"{theta} n",
    )


def constant_phase(c=0) -> PhaseFunction:
    c = as_rational(c)
    return PhaseFunction(
        f=lambda t, p: BallReal.exact(c, p),
        f1=lambda t, p: BallReal.exact(0, p),
        f2=lambda t, p: BallReal.exact(0, p),
        exact=lambda n: c,
        derivative_monotonic=True,
        second_derivative_range=(Fraction(0), Fraction(0)),
        label=str(c),
    )


def hyperbolic_phase(m: int, x, block: int | None = None) -> PhaseFunction:
    """f(t) = m x / t.

    With ``block = N`` the metadata describes (N, 2N]: f'' = 2 m x / t^3 lies in
    [lam, 8 lam] for lam = m x / (4 N^3).
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    x = as_rational(x)
    if x <= 0:
        raise ValueError("x must be positive")
    mx = m * x
    rng = None
    if block is not None:
        lam = mx / (4 * Fraction(block) ** 3)
        rng = (lam, 8 * lam)
    return PhaseFunction(
        f=lambda t, p: BallReal.exact(mx / as_rational(t), p),
        f1=lambda t, p: BallReal.exact(-mx / as_rational(t) ** 2, p),
        f2=lambda t, p: BallReal.exact(2 * mx / as_rational(t) ** 3, p),
        exact=lambda n: mx / n,
        derivative_monotonic=True,
        second_derivative_range=rng,
        label=f"{m}*{x}/t",
    )


# --- evaluation -------------------------------------------------------------


@dataclass(frozen=True)
class ExpSumResult:
    re: BallReal
    im: BallReal
    modulus: BallReal
    term_count: int

    @property
    def value(self) -> tuple[BallReal, BallReal]:
        return self.re, self.im


def _modulus(re: BallReal, im: BallReal) -> BallReal:
    prec = re.prec
    sq = re.square() + im.square()
    hi = sq.upper_fraction()
    lo = max(sq.lower_fraction(), Fraction(0))
    upper = BallReal.exact(hi, prec + 8).sqrt().upper_fraction()
    lower = BallReal.exact(lo, prec + 8).sqrt().lower_fraction() if lo > 0 else Fraction(0)
    return BallReal.from_rational_bounds(max(lower, Fraction(0)), upper, prec)


def exp_sum(f: PhaseFunction, N: int, N1: int, prec: int = DEFAULT_BITS) -> ExpSumResult:
    """Enclosure of sum_{N < n <= N1} e(f(n)).

    Each term is cos/sin(2 pi {f(n)}) evaluated at ``prec + 16`` bits and
    accumulated in fixed point; the per-term allowance of 2^-(wp-5) covers the
    rounding of 2{f(n)} (an argument error below pi * 2^(1-wp)), the half-ulp
    accuracy of the kernel and the truncation to fixed point.
    """
    if N < 0 or N1 <= N:
        raise ValueError(f"need 0 <= N < N1, got N={N}, N1={N1}")
    wp = prec + 16
    count = N1 - N
    if f.exact is None:
        return _exp_sum_ball(f, N, N1, prec)
    re = im = 0
    for n in range(N + 1, N1 + 1):
        t = frac(f.exact(n))
        arg = from_rational(2 * t.numerator, t.denominator, wp, round_nearest)
        c, s = mpf_cos_sin_pi(arg, wp, round_nearest)
        re += _to_fixed(c, wp)
        im += _to_fixed(s, wp)
    err = count << 6  # 2^(5 - wp) per term, in units of 2^-wp, plus slack
    re_b = BallReal.from_fixed(re, err, err, wp, prec)
    im_b = BallReal.from_fixed(im, err, err, wp, prec)
    return ExpSumResult(re_b, im_b, _modulus(re_b, im_b), count)


def _to_fixed(m, wp: int) -> int:
    """floor(m * 2^wp) for an mpf tuple m with |m| <= 1."""
    sign, man, exp, _ = m
    if not man:
        return 0
    shift = exp + wp
    v = man << shift if shift >= 0 else man >> -shift
    return -v if sign else v


def _exp_sum_ball(f: PhaseFunction, N: int, N1: int, prec: int) -> ExpSumResult:
    two_pi = pi_ball(prec) * 2
    re = BallReal.exact(0, prec)
    im = BallReal.exact(0, prec)
    for n in range(N + 1, N1 + 1):
        v = f.f(Fraction(n), prec)
        k = floor_q(v.lower_fraction())
        c, s = ((v - k) * two_pi).cos_sin()
        re = re + c
        im = im + s
    return ExpSumResult(re, im, _modulus(re, im), N1 - N)


# --- explicit bounds --------------------------------------------------------


class HypothesisError(ValueError):
    """A bound was requested outside the hypotheses under which it holds."""


def _pos_ball(v, prec: int) -> BallReal:
    return as_ball(v if isinstance(v, BallReal) else as_rational(v), prec)


def kusmin_landau_bound(lambda1, prec: int = DEFAULT_BITS) -> BallReal:
    """2 / (pi lambda1), for 0 < lambda1 < 1."""
    lam = _pos_ball(lambda1, prec)
    if not (lam.is_positive() and check_inequality(lam, 1, strict=True) is Status.PASS):
        raise HypothesisError(f"lambda1 must lie in (0, 1), got {lam!r}")
    return BallReal.exact(2, prec) / (pi_ball(prec) * lam)


def second_derivative_lemma_bound(lambda2, prec: int = DEFAULT_BITS) -> BallReal:
    """4 / sqrt(pi lambda2), for 0 < lambda2 < 1/pi."""
    lam = _pos_ball(lambda2, prec)
    pi = pi_ball(prec)
    if not (lam.is_positive() and check_inequality(lam * pi, 1, strict=True) is Status.PASS):
        raise HypothesisError(f"lambda2 must lie in (0, 1/pi), got {lam!r}")
    return BallReal.exact(4, prec) / (pi * lam).sqrt()


def van_der_corput_bound(N: int, lambda2, c2, prec: int = DEFAULT_BITS) -> BallReal:
    """(4/sqrt(pi)) (c2 N lambda2^(1/2) + 2 lambda2^(-1/2))."""
    if N < 1:
        raise HypothesisError("N must be >= 1")
    lam = _pos_ball(lambda2, prec)
    c2 = _pos_ball(c2, prec)
    if not lam.is_positive():
        raise HypothesisError("lambda2 must be positive")
    if check_inequality(1, c2) is not Status.PASS:
        raise HypothesisError("c2 must be >= 1")
    s = lam.sqrt()
    return BallReal.exact(4, prec) / pi_ball(prec).sqrt() * (c2 * s * N + BallReal.exact(2, prec) / s)


# --- randomized soundness sweeps -------------------------------------------


@dataclass
class SweepCase:
    kind: str
    params: dict
    N: int
    N1: int
    modulus: BallReal
    bound: BallReal
    status: Status


@dataclass
class SweepResult:
    cases: list[SweepCase] = field(default_factory=list)

    def counts(self) -> dict[Status, int]:
        out = {s: 0 for s in Status}
        for c in self.cases:
            out[c.status] += 1
        return out


def _log_uniform_int(rng: random.Random, lo: int, hi: int) -> int:
    return min(hi, max(lo, int(math.exp(rng.uniform(math.log(lo), math.log(hi + 1))))))


def sample_hyperbolic_case(rng: random.Random, max_m: int = 20, max_x: int = 10**6, max_N: int = 1000):
    """(m, x, N, N1) with N < N1 <= 2N; x is a rational with denominator <= 100."""
    m = rng.randint(1, max_m)
    q = rng.randint(1, 100)
    x = Fraction(rng.randint(q, max_x * q), q)
    N = _log_uniform_int(rng, 1, max_N)
    N1 = rng.randint(N + 1, 2 * N)
    return m, x, N, N1


def vdc_case(m: int, x, N: int, N1: int, prec: int = DEFAULT_BITS) -> SweepCase:
    phase = hyperbolic_phase(m, x, block=N)
    lam, hi = phase.second_derivative_range
    res = exp_sum(phase, N, N1, prec)
    bound = van_der_corput_bound(N, lam, 8, prec)
    return SweepCase("vdc", {"m": m, "x": x}, N, N1, res.modulus, bound, check_inequality(res.modulus, bound))


def vdc_sweep(cases: int, seed: int = 0, prec: int = DEFAULT_BITS, **kw) -> SweepResult:
    rng = random.Random(seed)
    out = SweepResult()
    for _ in range(cases):
        out.cases.append(vdc_case(*sample_hyperbolic_case(rng, **kw), prec=prec))
    return out


def sample_linear_case(rng: random.Random, max_N: int = 512, max_den: int = 1000):
    """(theta, lambda1, N, N1): f' = theta sits at distance >= lambda1 from the integers."""
    den = rng.randint(2, max_den)
    num = rng.randint(1, den // 2)
    lam = Fraction(num, den)  # in (0, 1/2]
    k = rng.randint(-5, 5)
    theta = k + lam if rng.random() < 0.5 else k + 1 - lam
    N = _log_uniform_int(rng, 1, max_N)
    N1 = rng.randint(N + 1, 2 * N)
    return theta, lam, N, N1


def kusmin_landau_case(theta, lam, N: int, N1: int, prec: int = DEFAULT_BITS) -> SweepCase:
    res = exp_sum(linear_phase(theta), N, N1, prec)
    bound = kusmin_landau_bound(lam, prec)
    return SweepCase("kusmin-landau", {"theta": theta, "lambda1": lam}, N, N1, res.modulus, bound,
                     check_inequality(res.modulus, bound))


def kusmin_landau_sweep(cases: int, seed: int = 0, prec: int = DEFAULT_BITS, **kw) -> SweepResult:
    rng = random.Random(seed)
    out = SweepResult()
    for _ in range(cases):
        out.cases.append(kusmin_landau_case(*sample_linear_case(rng, **kw), prec=prec))
    return out


def second_derivative_case(m: int, x, N: int, N1: int, prec: int = DEFAULT_BITS) -> SweepCase | None:
    """Hyperbolic case for the f'' >= lambda2 lemma, or None when its hypotheses fail.

    f(t) = m x / t has f'' = 2 m x / t^3 >= 2 m x / N1^3 =: lambda2 on [N, N1],
    and f' = -m x / t^2 avoids the integers on (N, N1) exactly when no integer
    lies strictly between m x / N1^2 and m x / N^2.
    """
    x = as_rational(x)
    mx = m * x
    lam = 2 * mx / Fraction(N1) ** 3
    if not lam * Fraction(31416, 10000) < 1:  # 3.1416 > pi
        return None
    lo, hi = mx / N1**2, mx / N**2
    fl = floor_q(lo)
    if not (hi <= fl + 1):
        return None
    phase = hyperbolic_phase(m, x)
    res = exp_sum(phase, N, N1, prec)
    bound = second_derivative_lemma_bound(lam, prec)
    return SweepCase("second-deriv", {"m": m, "x": x}, N, N1, res.modulus, bound,
                     check_inequality(res.modulus, bound))


def second_derivative_sweep(cases: int, seed: int = 0, prec: int = DEFAULT_BITS, max_tries: int = 10**6) -> SweepResult:
    rng = random.Random(seed)
    out = SweepResult()
    tries = 0
    while len(out.cases) < cases and tries < max_tries:
        tries += 1
        N = _log_uniform_int(rng, 1, 1000)
        N1 = rng.randint(N + 1, 2 * N)
        m = rng.randint(1, 20)
        # m x in [k N1^2, (k+1) N^2] keeps |f'| inside [k, k+1] on [N, N1]
        k = rng.randint(0, N * N // (N1 * N1 - N * N))
        lo, hi = k * N1 * N1, (k + 1) * N * N
        q = rng.randint(1, 100)
        x = Fraction(rng.randint(lo * q, hi * q), q * m)
        if x <= 0:
            continue
        case = second_derivative_case(m, x, N, N1, prec)
        if case is not None:
            out.cases.append(case)
    return out
