"""Sampling ranges, verification records and CSV/JSON emission."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .ball import BallReal, Status, as_ball, mpf_to_fraction
from .rational_core import as_rational

CSV_COLUMNS = ["claim_id", "x", "lhs_mid", "lhs_rad", "rhs_mid", "rhs_rad", "margin", "status"]
SIGNIFICANT_DIGITS = 20


class SamplingMode(str, enum.Enum):
    ALL_INTEGERS = "all-integers"
    GEOMETRIC = "geometric"
    RANDOM_RATIONAL = "random-rational"
    MIXED = "mixed"


@dataclass(frozen=True)
class RangeSpec:
    """A set of evaluation points in [x_min, x_max].

    ``mixed`` is the union used as the default scan grid: every integer up to
    ``min(x_max, integer_cap)``, a geometric grid of ``count`` points and
    ``count`` seeded random rationals.
    """

    x_min: Fraction
    x_max: Fraction
    mode: SamplingMode = SamplingMode.ALL_INTEGERS
    count: int = 100
    max_denominator: int = 100
    seed: int = 0
    integer_cap: int = 10**4

    def __post_init__(self):
        object.__setattr__(self, "x_min", as_rational(self.x_min))
        object.__setattr__(self, "x_max", as_rational(self.x_max))
        object.__setattr__(self, "mode", SamplingMode(self.mode))
        if not 1 <= self.x_min <= self.x_max:
            raise ValueError(f"need 1 <= x_min <= x_max, got [{self.x_min}, {self.x_max}]")
        if self.count < 1 or self.max_denominator < 1:
            raise ValueError("count and max_denominator must be >= 1")

    def points(self) -> list[Fraction]:
        if self.mode is SamplingMode.ALL_INTEGERS:
            pts = integer_points(self.x_min, self.x_max)
        elif self.mode is SamplingMode.GEOMETRIC:
            pts = geometric_points(self.x_min, self.x_max, self.count)
        elif self.mode is SamplingMode.RANDOM_RATIONAL:
            pts = random_rationals(self.x_min, self.x_max, self.count, self.max_denominator, self.seed)
        else:
            cap = min(self.x_max, Fraction(self.integer_cap))
            pts = integer_points(self.x_min, cap) if cap >= self.x_min else []
            pts += geometric_points(self.x_min, self.x_max, self.count)
            pts += random_rationals(self.x_min, self.x_max, self.count, self.max_denominator, self.seed)
        return sorted(set(pts))


def integer_points(x_min, x_max) -> list[Fraction]:
    lo = -((-as_rational(x_min).numerator) // as_rational(x_min).denominator)
    hi = as_rational(x_max).numerator // as_rational(x_max).denominator
    return [Fraction(n) for n in range(lo, hi + 1)]


def geometric_points(x_min, x_max, count: int, denominator: int = 1000) -> list[Fraction]:
    """``count`` points spaced geometrically, rounded to multiples of 1/denominator."""
    x_min, x_max = as_rational(x_min), as_rational(x_max)
    if count == 1 or x_min == x_max:
        return [x_min]
    ratio = float(x_max) / float(x_min)
    pts = {x_min, x_max}
    for i in range(1, count - 1):
        v = float(x_min) * ratio ** (i / (count - 1))
        q = Fraction(round(v * denominator), denominator)
        pts.add(min(max(q, x_min), x_max))
    return sorted(pts)


def random_rationals(x_min, x_max, count: int, max_denominator: int, seed: int) -> list[Fraction]:
    x_min, x_max = as_rational(x_min), as_rational(x_max)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        q = rng.randint(1, max_denominator)
        lo = math.ceil(x_min * q)
        hi = math.floor(x_max * q)
        if lo > hi:
            out.append(x_min)
            continue
        out.append(Fraction(rng.randint(lo, hi), q))
    return out


# --- records ----------------------------------------------------------------


@dataclass
class VerificationRecord:
    claim_id: str
    x: Fraction
    lhs: BallReal
    rhs: BallReal
    status: Status
    note: str = ""

    @property
    def margin(self) -> Fraction:
        """rhs.lower - lhs.upper: positive exactly when the record certifies lhs <= rhs."""
        return self.rhs.lower_fraction() - self.lhs.upper_fraction()

    def as_row(self) -> dict[str, str]:
        return {
            "claim_id": self.claim_id,
            "x": render_x(self.x),
            "lhs_mid": render(mpf_to_fraction(self.lhs.mid)),
            "lhs_rad": render(mpf_to_fraction(self.lhs.rad)),
            "rhs_mid": render(mpf_to_fraction(self.rhs.mid)),
            "rhs_rad": render(mpf_to_fraction(self.rhs.rad)),
            "margin": render(self.margin),
            "status": self.status.value,
        }


def make_record(claim_id: str, x, lhs, rhs, status: Status, note: str = "") -> VerificationRecord:
    return VerificationRecord(claim_id, as_rational(x), as_ball(lhs), as_ball(rhs), status, note)


@dataclass
class Report:
    claim_id: str
    records: list[VerificationRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def sort(self) -> "Report":
        self.records.sort(key=lambda r: r.x)
        return self

    def counts(self) -> dict[Status, int]:
        out = {s: 0 for s in Status}
        for r in self.records:
            out[r.status] += 1
        return out

    def exit_code(self) -> int:
        """0 if every record passes, 1 on any Fail, 2 on Inconclusive without Fail."""
        c = self.counts()
        if c[Status.FAIL]:
            return 1
        if c[Status.INCONCLUSIVE]:
            return 2
        return 0

    def all_pass(self) -> bool:
        return self.exit_code() == 0


# --- rendering --------------------------------------------------------------

def render(q: Fraction) -> str:
    """Decimal string with 20 significant digits, round half to even.

    Scientific notation with a fixed mantissa width, e.g. ``-7.7215664901532860607e-2``.
    Zero renders as ``0``.
    """
    q = Fraction(q)
    if q == 0:
        return "0"
    # scale into a 20-digit integer mantissa exactly, then round once
    a = abs(q)
    e = _decimal_exponent(a)
    shift = SIGNIFICANT_DIGITS - 1 - e
    scaled = a * Fraction(10) ** shift
    mant = _round_half_even(scaled)
    if mant >= 10**SIGNIFICANT_DIGITS:
        mant //= 10  # exact: rounding carried into a new digit, last digit is 0
        e += 1
    digits = str(mant)
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[0]}.{digits[1:]}e{e:+d}"


def _decimal_exponent(a: Fraction) -> int:
    """floor(log10(a)) for a > 0, exactly."""
    e = int((a.numerator.bit_length() - a.denominator.bit_length()) * 0.30102999566398)
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    return e


def _round_half_even(q: Fraction) -> int:
    n, r = divmod(q.numerator, q.denominator)
    twice = 2 * r
    if twice > q.denominator or (twice == q.denominator and n % 2 == 1):
        n += 1
    return n


def render_x(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return render(x)


def report_rows(report: Report) -> list[dict[str, str]]:
    return [r.as_row() for r in sorted(report.records, key=lambda r: r.x)]


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(report_rows(report))
    return buf.getvalue()


def to_json(report: Report) -> str:
    payload = {
        "claim_id": report.claim_id,
        "notes": list(report.notes),
        "records": report_rows(report),
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def emit(report: Report, fmt: str = "csv", path: str | Path | None = None) -> str:
    """Serialise ``report`` as csv or json; write to ``path`` when given."""
    if fmt == "csv":
        text = to_csv(report)
    elif fmt == "json":
        text = to_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
