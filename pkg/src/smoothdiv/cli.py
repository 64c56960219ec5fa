"""Command-line front end: ``smoothdiv verify <claim> [range flags]``.

Exit status is 0 when every record passes, 1 on any Fail and 2 on any
Inconclusive without a Fail.  Usage and domain errors exit with 3 after a
message on stderr.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .ball import BallReal, PrecisionPolicy, Status, certify, check_inequality
from .chowla_walum import (
    COR8_THRESHOLD,
    GParams,
    check_corollary8,
    corollary8_coefficient_checks,
    g_sum,
    prop_main_bound,
)
from .divisor_theorem import (
    COR2_THRESHOLD,
    LARGE_CONSTANT_PRINTED,
    LARGE_CONSTANT_SAFE,
    LARGE_THRESHOLD,
    TRANSFER_THRESHOLD,
    check_lemma4,
    check_lemma5,
    check_lemma6,
    check_lemma14,
    large_regime_statistic,
    transfer_scaled_slack,
    verify_corollary2,
    verify_log_version,
    verify_theorem1,
    verify_transfer,
)
from .expsums import (
    HypothesisError,
    exp_sum,
    hyperbolic_phase,
    kusmin_landau_case,
    second_derivative_lemma_bound,
    vdc_case,
)
from .mertens_compare import RATIO_THRESHOLD, ratio_scan, sign_scan_records
from .rational_core import as_rational, floor_q, frac
from .remainders import lemma2_sides, lemma3_diff_sides, lemma3_r2_sides
from .report import RangeSpec, Report, SamplingMode, emit, make_record

EXIT_USAGE = 3


class ClaimDomainError(ValueError):
    """A requested range lies outside the domain on which a claim is asserted."""


@dataclass(frozen=True)
class ClaimSpec:
    run: Callable[[RangeSpec, PrecisionPolicy], Report]
    domain_min: Fraction
    default_max: Fraction
    description: str


def _certified(claim_id, sides) -> Callable[[RangeSpec, PrecisionPolicy], Report]:
    def run(rng, policy):
        rep = Report(claim_id)
        for x in rng.points():
            status, lhs, rhs = certify(lambda bits, x=x: sides(x, bits), policy)
            rep.records.append(make_record(claim_id, x, lhs, rhs, status))
        return rep
    return run


def _per_point(claim_id, check) -> Callable[[RangeSpec, PrecisionPolicy], Report]:
    def run(rng, policy):
        return Report(claim_id, [check(x, policy) for x in rng.points()])
    return run


PROP7_PARAMS = [
    GParams(Fraction(a), b, j)
    for a in (Fraction(3, 2), Fraction(2), Fraction(5, 2))
    for b in (0, 1, 2)
    for j in (2, 3)
]


def _prop7(rng, policy):
    rep = Report("prop7")
    for x in rng.points():
        if x <= 1:
            continue
        for p in PROP7_PARAMS:
            g = abs(g_sum(p, x))
            status, lhs, rhs = certify(lambda bits: (BallReal.exact(g, bits), prop_main_bound(p, x, bits)), policy)
            rep.records.append(make_record("prop7", x, lhs, rhs, status,
                                           note=f"alpha={p.alpha} beta={p.beta} j={p.j}"))
    return rep


def _cor8(rng, policy):
    rep = Report("cor8", check_corollary8(rng.points(), policy))
    for name, status in corollary8_coefficient_checks(policy.working_bits).items():
        rep.notes.append(f"coefficient check {name}: {status.value}")
    return rep


def _kusmin_landau(rng, policy):
    """f(n) = x n on (N, N1]; lambda1 is the distance from x to the nearest integer."""
    rep = Report("kusmin-landau")
    gen = random.Random(rng.seed)
    skipped = 0
    for x in rng.points():
        f = frac(x)
        lam = min(f, 1 - f)
        N = gen.randint(1, 512)
        N1 = gen.randint(N + 1, 2 * N)
        if lam == 0:
            skipped += 1
            continue
        case = kusmin_landau_case(x, lam, N, N1, policy.working_bits)
        rep.records.append(make_record("kusmin-landau", x, case.modulus, case.bound, case.status,
                                       note=f"N={N} N1={N1}"))
    if skipped:
        rep.notes.append(f"{skipped} integer points skipped: f' = x is an integer there")
    return rep


def _vdc(rng, policy):
    """f(t) = m x / t on (N, N1] with N1 <= 2N and seeded m, N, N1."""
    rep = Report("vdc")
    gen = random.Random(rng.seed)
    for x in rng.points():
        m = gen.randint(1, 20)
        N = min(1000, max(1, int(math.exp(gen.uniform(0, math.log(1001))))))
        N1 = gen.randint(N + 1, 2 * N)
        case = vdc_case(m, x, N, N1, policy.working_bits)
        rep.records.append(make_record("vdc", x, case.modulus, case.bound, case.status,
                                       note=f"m={m} N={N} N1={N1}"))
    return rep


def _second_deriv_params(gen: random.Random, x: Fraction, tries: int = 64):
    """Seeded (m, N, N1, lambda2) meeting the lemma's hypotheses for f = m x / t, or None.

    Needs lambda2 = 2 m x / N1^3 < 1/pi and no integer strictly between
    m x / N1^2 and m x / N^2.
    """
    for _ in range(tries):
        m = gen.randint(1, 20)
        mx = m * x
        n0 = max(1, int(float(2 * mx) ** (1 / 3)))
        N = gen.randint(n0, 4 * n0 + 64)
        N1 = gen.randint(N + 1, N + max(1, N // 8))
        lam = 2 * mx / Fraction(N1) ** 3
        if not lam * Fraction(31416, 10000) < 1:  # 3.1416 > pi
            continue
        if mx / Fraction(N) ** 2 > floor_q(mx / Fraction(N1) ** 2) + 1:
            continue
        return m, N, N1, lam
    return None


def _second_deriv(rng, policy):
    rep = Report("second-deriv")
    gen = random.Random(rng.seed)
    skipped = 0
    for x in rng.points():
        found = _second_deriv_params(gen, x)
        if found is None:
            skipped += 1
            continue
        m, N, N1, lam = found
        res = exp_sum(hyperbolic_phase(m, x), N, N1, policy.working_bits)
        bound = second_derivative_lemma_bound(lam, policy.working_bits)
        rep.records.append(make_record("second-deriv", x, res.modulus, bound,
                                       check_inequality(res.modulus, bound), note=f"m={m} N={N} N1={N1}"))
    if skipped:
        rep.notes.append(f"{skipped} points skipped: no sampled (m, N, N1) met the hypotheses")
    return rep


def _theorem1_general(rng, policy):
    return Report("theorem1-general", verify_theorem1(rng.points(), "general", policy))


def _theorem1_large(rng, policy):
    pts = rng.points()
    rep = Report("theorem1-large", verify_theorem1(pts, "large", policy, LARGE_CONSTANT_SAFE))
    printed = verify_theorem1(pts, "large", policy, LARGE_CONSTANT_PRINTED)
    bad = [r for r in printed if r.status is not Status.PASS]
    rep.notes.append(f"verified against constant {float(LARGE_CONSTANT_SAFE)}; "
                     f"constant {float(LARGE_CONSTANT_PRINTED)} passes at {len(printed) - len(bad)}/{len(printed)} points")
    if pts:
        worst = max(pts, key=large_regime_statistic)
        rep.notes.append(f"max |r(x)| x^(1/4) / log x = {large_regime_statistic(worst):.6f} at x = {worst}")
    return rep


def _corollary2(rng, policy):
    recs = verify_corollary2(rng.points(), policy, include_small=rng.x_min < COR2_THRESHOLD)
    return Report("corollary2", [r for r in recs if rng.x_min <= r.x <= rng.x_max])


def _transfer(rng, policy):
    pts = rng.points()
    rep = Report("transfer-bbr", verify_transfer(pts, policy))
    slack = [transfer_scaled_slack(x, policy.working_bits) for x in pts]
    increasing = all(a.upper_fraction() < b.lower_fraction() for a, b in zip(slack, slack[1:]))
    rep.notes.append(f"x * (target - derived bound) strictly increasing over the points: {increasing}")
    return rep


def _mertens_sign(rng, policy):
    limit = floor_q(rng.x_max)
    recs, found = sign_scan_records(limit, prec=policy.working_bits)
    rep = Report("mertens-sign", [r for r in recs if r.x >= rng.x_min])
    if found.found:
        rep.notes.append(f"M(x) - x m(x) < 0 for 2 <= x <= {found.first_nonnegative_x - 1}; "
                         f"first sign change at x = {found.first_nonnegative_x}")
    else:
        rep.notes.append(f"no sign change for 2 <= x <= {limit}")
    return rep


def _mertens_ratio(rng, policy):
    limit = floor_q(rng.x_max)
    threshold = max(RATIO_THRESHOLD, -floor_q(-rng.x_min))
    scan = ratio_scan(limit, threshold=threshold)
    rep = Report("mertens-ratio", scan.records)
    c = scan.counts
    rep.notes.append(f"{scan.checked} integers in [{threshold}, {limit}]: {c[Status.PASS]} Pass, "
                     f"{c[Status.FAIL]} Fail, {c[Status.INCONCLUSIVE]} Inconclusive (records kept sparse)")
    if scan.extreme_low:
        rep.notes.append(f"ratio extremes: {scan.extreme_low[1]:.6f} at x = {scan.extreme_low[0]}, "
                         f"{scan.extreme_high[1]:.6f} at x = {scan.extreme_high[0]}")
    return rep


def _log_version(rng, policy):
    return Report("delta-log-2", verify_log_version(rng.points(), policy))


F = Fraction
CLAIMS: dict[str, ClaimSpec] = {
    "r1-bound": ClaimSpec(_certified("r1-bound", lemma2_sides), F(1), F(10**4), "8 x^2 |R1(x)| <= 1"),
    "r2-bound": ClaimSpec(_certified("r2-bound", lemma3_r2_sides), F(1), F(10**4), "x^2 |R2(x)| <= 0.132"),
    "r2-minus-r1": ClaimSpec(_certified("r2-minus-r1", lemma3_diff_sides), F(1), F(10**4),
                             "x^3 |R2(x) - R1(x)| <= 0.033"),
    "lemma5": ClaimSpec(_per_point("lemma5", lambda x, p: check_lemma5(x, p.working_bits)), F(1), F(10**4),
                        "hyperbola rearrangement of D(x), exact and as a ball identity"),
    "lemma6": ClaimSpec(_per_point("lemma6", lambda x, p: check_lemma6(x, p.working_bits)), F(1), F(10**3),
                        "remainder decomposition of r(x) and the hyperbola form of x S(x)"),
    "lemma4": ClaimSpec(_per_point("lemma4", check_lemma4), F(1), F(10**4),
                        "2x |sum_{k<=sqrt x} R1(x/k)/k| <= 0.125 (1 + x^(-1/2))"),
    "lemma14": ClaimSpec(_per_point("lemma14", check_lemma14), F(LARGE_THRESHOLD), F(10**4),
                         "the weighted R1 sum for x >= 300"),
    "prop7": ClaimSpec(_prop7, F(2), F(500), "generalised Chowla-Walum bound over a parameter grid"),
    "cor8": ClaimSpec(_cor8, F(COR8_THRESHOLD), F(2000), "|G_{2,1,2}(x)| < x^(3/4) log x"),
    "kusmin-landau": ClaimSpec(_kusmin_landau, F(1), F(100), "|sum e(x n)| <= 2 / (pi lambda1)"),
    "second-deriv": ClaimSpec(_second_deriv, F(1), F(10**4), "|sum e(m x / n)| <= 4 / sqrt(pi lambda2)"),
    "vdc": ClaimSpec(_vdc, F(1), F(10**6), "van der Corput bound for f = m x / t"),
    "theorem1-general": ClaimSpec(_theorem1_general, F(1), F(10**4), "|r(x)| <= 1/8 + 0.316/sqrt x + 1/(64x)"),
    "theorem1-large": ClaimSpec(_theorem1_large, F(LARGE_THRESHOLD), F(10**4),
                                "|r(x)| <= log x / x^(1/4) + 0.238/sqrt x + 1/(64x)"),
    "corollary2": ClaimSpec(_corollary2, F(1), F(10**4), "Delta(x) - x delta(x) > 0, and >= 0.003 for x >= 7"),
    "transfer-bbr": ClaimSpec(_transfer, F(TRANSFER_THRESHOLD), F(10**8),
                              "|delta(x)| <= 0.397/sqrt x + 0.38/x from |Delta| <= 0.397 sqrt x"),
    "mertens-sign": ClaimSpec(_mertens_sign, F(2), F(20000), "first x >= 2 with M(x) - x m(x) >= 0"),
    "mertens-ratio": ClaimSpec(_mertens_ratio, F(RATIO_THRESHOLD), F(10**5),
                               "2/3 <= sup |m(t)| t / sup |M(t)| <= 3/2"),
    "delta-log-2": ClaimSpec(_log_version, F(2), F(10**4), "|delta(x)| <= 1.001 / sqrt x"),
}


def run_claim(claim_id: str, rng: RangeSpec, policy: PrecisionPolicy = PrecisionPolicy()) -> Report:
    """Run one claim over a range; records come back sorted by x."""
    spec = CLAIMS.get(claim_id)
    if spec is None:
        raise KeyError(f"unknown claim id {claim_id!r}; known: {', '.join(CLAIMS)}")
    if rng.x_min < spec.domain_min:
        raise ClaimDomainError(f"{claim_id} is asserted for x >= {spec.domain_min}, got x_min = {rng.x_min}")
    rep = spec.run(rng, policy)
    rep.records.sort(key=lambda r: (r.x, r.claim_id))
    return rep


def _rational(s: str) -> Fraction:
    try:
        return as_rational(Fraction(s))
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not an exact rational: {s!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smoothdiv", description="Certified checks of explicit divisor-problem bounds.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list claim ids")
    v = sub.add_parser("verify", help="verify one claim over a range")
    v.add_argument("claim")
    v.add_argument("--x-min", type=_rational, default=None, help="default: the claim's domain minimum")
    v.add_argument("--x-max", type=_rational, default=None, help="default: a per-claim desk-scale value")
    v.add_argument("--mode", choices=[m.value for m in SamplingMode], default=SamplingMode.MIXED.value)
    v.add_argument("--count", type=int, default=100, help="geometric and random point counts")
    v.add_argument("--max-denominator", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--precision-bits", type=int, default=128)
    v.add_argument("--out", default=None, help="output path (default: stdout)")
    v.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else EXIT_USAGE
    if args.command == "list":
        for name, spec in CLAIMS.items():
            print(f"{name:18s} x >= {spec.domain_min}  {spec.description}")
        return 0
    try:
        spec = CLAIMS.get(args.claim)
        if spec is None:
            raise KeyError(f"unknown claim id {args.claim!r}; known: {', '.join(CLAIMS)}")
        x_min = spec.domain_min if args.x_min is None else args.x_min
        x_max = max(spec.default_max, x_min) if args.x_max is None else args.x_max
        rng = RangeSpec(x_min, x_max, args.mode, args.count, args.max_denominator, args.seed)
        policy = PrecisionPolicy(working_bits=args.precision_bits)
        report = run_claim(args.claim, rng, policy)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, HypothesisError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        text = emit(report, args.format, args.out)
    except OSError as e:
        print(f"error: cannot write report: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        sys.stdout.write(text)
    for note in report.notes:
        print(f"note: {note}", file=sys.stderr)
    c = report.counts()
    print(f"{args.claim}: {len(report.records)} records, {c[Status.PASS]} Pass, {c[Status.FAIL]} Fail, "
          f"{c[Status.INCONCLUSIVE]} Inconclusive", file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
