"""Acceptance criteria 1-10, each printing one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or as a script with
``python3 tests/test_acceptance.py``.  Exhaustive scans take a few minutes in
total on one core.
"""

import subprocess
import sys
from fractions import Fraction

import pytest

from smoothdiv import cli
from smoothdiv.ball import BallReal, PrecisionPolicy, Status, certify
from smoothdiv.chowla_walum import check_corollary8, check_corollary8_intermediate, corollary8_coefficient_checks
from smoothdiv.divisor_theorem import (
    LARGE_CONSTANT_PRINTED,
    TRANSFER_THRESHOLD,
    check_lemma5,
    lemma5_rearranged,
    transfer_bbr,
    transfer_scaled_slack,
    transfer_target,
    verify_corollary2,
    verify_theorem1,
    verify_transfer,
)
from smoothdiv.expsums import kusmin_landau_sweep, vdc_sweep
from smoothdiv.mertens_compare import RATIO_THRESHOLD, ratio_scan, sign_scan_records
from smoothdiv.rational_core import divisor_sum, sieve_mobius, sieve_tau
from smoothdiv.remainders import lemma2_sides, lemma3_diff_sides, lemma3_r2_sides
from smoothdiv.report import RangeSpec, Report, geometric_points, integer_points, make_record, random_rationals

pytestmark = pytest.mark.slow

POLICY = PrecisionPolicy(working_bits=128)
RESULTS: dict[int, str] = {}


def conclude(n: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[n] = line
    print(line, file=sys.__stdout__, flush=True)
    assert ok, line


def tally(records) -> dict:
    c = {s: 0 for s in Status}
    for r in records:
        c[r.status] += 1
    return c


def all_pass(records) -> bool:
    return len(records) > 0 and all(r.status is Status.PASS for r in records)


def summary(records) -> str:
    c = tally(records)
    return f"{len(records)} records ({c[Status.PASS]} Pass, {c[Status.FAIL]} Fail, {c[Status.INCONCLUSIVE]} Inconclusive)"


def test_criterion_01_hyperbola_divisor_sum_equals_sieve_prefix_to_one_million():
    N = 10**6
    prefix = sieve_tau(N).prefix_sums().tolist()
    mismatches = [x for x in range(1, N + 1) if divisor_sum(x) != prefix[x]]
    conclude(1, not mismatches and prefix[10] == 27,
             f"hyperbola D(x) equals sieved prefix sums for all {N} integers x <= 10^6 ({len(mismatches)} mismatches)")


def test_criterion_02_rearranged_divisor_sum_is_exact_and_ball_residual_is_tiny():
    ints_bad = [x for x in range(1, 10**5 + 1) if lemma5_rearranged(x)[0] != lemma5_rearranged(x)[1]]
    rats = random_rationals(1, 10**6, 1000, 100, seed=2)
    rats_bad = [x for x in rats if lemma5_rearranged(x)[0] != lemma5_rearranged(x)[1]]
    ball_pts = rats + integer_points(1, 2000) + geometric_points(1, 10**6, 100)
    ball_recs = [check_lemma5(x, 128, radius_limit=Fraction(1, 10**20)) for x in ball_pts]
    ok = not ints_bad and not rats_bad and all_pass(ball_recs)
    conclude(2, ok, f"exact equality at 10^5 integers and {len(rats)} random rationals "
                    f"({len(ints_bad) + len(rats_bad)} failures); ball residual contains 0 with radius < 1e-20 "
                    f"at {len(ball_recs)} points: {summary(ball_recs)}")


def _certified_records(claim_id, sides, points):
    out = []
    for x in points:
        status, lhs, rhs = certify(lambda bits: sides(x, bits), POLICY)
        out.append(make_record(claim_id, x, lhs, rhs, status))
    return out


def test_criterion_03_remainder_bounds_with_stated_constants():
    pts = sorted(set(integer_points(1, 10**4) + geometric_points(1, 10**6, 1000)
                     + random_rationals(1, 10**6, 10**4, 100, seed=3)))
    parts = {
        "8x^2|R1| <= 1": _certified_records("r1-bound", lemma2_sides, pts),
        "x^2|R2| <= 0.132": _certified_records("r2-bound", lemma3_r2_sides, pts),
        "x^3|R2-R1| <= 0.033": _certified_records("r2-minus-r1", lemma3_diff_sides, pts),
    }
    ok = all(all_pass(r) for r in parts.values())
    conclude(3, ok, f"{len(pts)} points (integers <= 10^4, geometric grid to 10^6, 10^4 random rationals); "
                    + "; ".join(f"{k}: {summary(v)}" for k, v in parts.items()))


def test_criterion_04_weighted_bernoulli_sum_bound_for_all_integers_300_to_100000():
    recs = check_corollary8(range(300, 10**5 + 1), POLICY)
    chain = check_corollary8_intermediate(geometric_points(300, 10**5, 50), POLICY)
    coeffs = corollary8_coefficient_checks(128)
    ok = all_pass(recs) and len(recs) == 10**5 - 299 and all_pass(chain) and set(coeffs.values()) == {Status.PASS}
    conclude(4, ok, f"|G_(2,1,2)(x)| < x^(3/4) log x: {summary(recs)}; intermediate chain: {summary(chain)}; "
                    f"coefficient enclosures: {', '.join(f'{k} {v.value}' for k, v in coeffs.items())}")


def test_criterion_05_main_bound_both_regimes():
    general_pts = RangeSpec(1, 10**6, "mixed", count=1000, seed=5).points()
    large_pts = RangeSpec(300, 10**6, "mixed", count=1000, seed=6).points()
    general = verify_theorem1(general_pts, "general", POLICY)
    large = verify_theorem1(large_pts, "large", POLICY)
    printed = verify_theorem1(large_pts, "large", POLICY, LARGE_CONSTANT_PRINTED)
    printed_ok = sum(r.status is Status.PASS for r in printed)
    ok = all_pass(general) and all_pass(large)
    conclude(5, ok, f"general regime on [1, 10^6]: {summary(general)}; large regime with 0.238 on [300, 10^6]: "
                    f"{summary(large)}; informational: printed 0.236 passes at {printed_ok}/{len(printed)} points")


def test_criterion_06_smoothed_difference_stays_positive():
    pts = RangeSpec(7, 10**6, "mixed", count=1000, seed=7).points()
    recs = verify_corollary2(pts, POLICY, small_step=Fraction(1, 1000), include_small=True)
    cells = [r for r in recs if r.note.startswith("cell")]
    large = [r for r in recs if not r.note.startswith("cell")]
    ok = all_pass(cells) and len(cells) == 6000 and all_pass(large)
    conclude(6, ok, f"F > 0 on [1, 7) over {len(cells)} cells of width 1e-3: {summary(cells)}; "
                    f"Delta - x delta >= 0.003 on sampled [7, 10^6]: {summary(large)}")


def test_criterion_07_exponential_sum_bounds_have_no_violations():
    vdc = vdc_sweep(10**4, seed=70)
    kl = kusmin_landau_sweep(10**4, seed=71)
    cv, ck = vdc.counts(), kl.counts()
    ok = cv[Status.PASS] == 10**4 and ck[Status.PASS] == 10**4
    conclude(7, ok, f"van der Corput: {cv[Status.PASS]} Pass, {cv[Status.FAIL]} Fail, "
                    f"{cv[Status.INCONCLUSIVE]} Inconclusive of 10^4; Kusmin-Landau: {ck[Status.PASS]} Pass, "
                    f"{ck[Status.FAIL]} Fail, {ck[Status.INCONCLUSIVE]} Inconclusive of 10^4")


def test_criterion_08_mertens_sign_change_and_ratio():
    mu = sieve_mobius(10**6)
    sign_recs, rep = sign_scan_records(20000, mu)
    negative = [r for r in sign_recs if r.x < 18350]
    sign_ok = (rep.first_nonnegative_x == 18350 and len(negative) == 18348 and all_pass(sign_recs)
               and all(r.lhs.is_negative() for r in negative))
    scan = ratio_scan(10**6, mu)
    ratio_ok = scan.all_pass and scan.checked == 10**6 - RATIO_THRESHOLD + 1
    conclude(8, sign_ok and ratio_ok,
             f"M(x) - x m(x) < 0 for 2 <= x <= 18349 and >= 0 at x = {rep.first_nonnegative_x}; "
             f"ratio in [2/3, 3/2] at {scan.counts[Status.PASS]}/{scan.checked} integers in [94, 10^6] "
             f"(extremes {scan.extreme_low[1]:.5f} at {scan.extreme_low[0]}, "
             f"{scan.extreme_high[1]:.5f} at {scan.extreme_high[0]})")


def test_criterion_09_transfer_to_logarithmic_error_term():
    x0 = TRANSFER_THRESHOLD
    margin = transfer_target(x0) - transfer_bbr(x=x0)
    pts = geometric_points(x0, 10**8, 10)
    recs = verify_transfer(pts, POLICY)
    slack = [transfer_scaled_slack(x) for x in pts]
    monotone = all(a.upper_fraction() < b.lower_fraction() for a, b in zip(slack, slack[1:]))
    ok = margin.is_positive() and all_pass(recs) and monotone and slack[0].is_positive()
    conclude(9, ok, f"at x = 5560 certified margin {float(margin):.3e} > 0; "
                    f"10 geometric points to 10^8: {summary(recs)}; scaled slack increasing: {monotone}")


def _run_cli(*args):
    return subprocess.run([sys.executable, "-m", "smoothdiv.cli", *args], capture_output=True)


def test_criterion_10_cli_is_deterministic_and_honours_exit_codes(monkeypatch, tmp_path, capsys):
    checks = {}
    a = _run_cli("verify", "theorem1-general", "--x-min", "1", "--x-max", "10000", "--mode", "all-integers")
    checks["theorem1-general on integers [1, 10^4] exits 0"] = a.returncode == 0
    b = _run_cli("verify", "theorem1-general", "--x-min", "1", "--x-max", "10000", "--mode", "all-integers")
    checks["repeat run is byte-identical"] = a.stdout == b.stdout and len(a.stdout) > 0
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        res = _run_cli("verify", "r1-bound", "--x-max", "1000000", "--mode", "random-rational", "--count", "200",
                       "--seed", "11", "--format", "json", "--out", str(p))
        outs.append((res.returncode, p.read_bytes()))
    checks["seeded random-rational JSON files are byte-identical"] = outs[0] == outs[1] and outs[0][0] == 0
    s = _run_cli("verify", "mertens-sign", "--x-max", "20000")
    checks["mertens-sign names 18350"] = s.returncode == 0 and b"18350" in s.stderr
    d = _run_cli("verify", "cor8", "--x-min", "100", "--x-max", "1000")
    checks["cor8 below 300 is a domain error"] = d.returncode == cli.EXIT_USAGE and b"300" in d.stderr

    def forced(statuses):
        def runner(rng, policy):
            return Report("forced", [make_record("forced", i + 1, BallReal.exact(0), BallReal.exact(1), st)
                                     for i, st in enumerate(statuses)])
        return cli.ClaimSpec(runner, Fraction(1), Fraction(10), "forced")

    for label, statuses, code in [("all Pass exits 0", [Status.PASS], 0),
                                  ("any Fail exits 1", [Status.PASS, Status.FAIL, Status.INCONCLUSIVE], 1),
                                  ("Inconclusive without Fail exits 2", [Status.PASS, Status.INCONCLUSIVE], 2)]:
        monkeypatch.setitem(cli.CLAIMS, "forced", forced(statuses))
        checks[f"forced claim: {label}"] = cli.main(["verify", "forced"]) == code
    capsys.readouterr()
    bad = [k for k, v in checks.items() if not v]
    conclude(10, not bad, f"{len(checks) - len(bad)}/{len(checks)} CLI checks hold" + (f"; failing: {bad}" if bad else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
