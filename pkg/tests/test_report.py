import json
from fractions import Fraction

import pytest

from smoothdiv.ball import BallReal, Status
from smoothdiv.report import (
    CSV_COLUMNS,
    RangeSpec,
    Report,
    emit,
    geometric_points,
    make_record,
    random_rationals,
    render,
    render_x,
)


def test_render_twenty_significant_digits_half_even():
    assert render(Fraction(1, 3)) == "3.3333333333333333333e-1"
    assert render(Fraction(2, 3)) == "6.6666666666666666667e-1"
    assert render(Fraction(-1, 8)) == "-1.2500000000000000000e-1"
    assert render(Fraction(0)) == "0"
    # exact tie at the 21st digit rounds to even
    assert render(Fraction(100000000000000000005, 10**20)) == "1.0000000000000000000e+0"


def test_render_handles_huge_magnitudes():
    assert render(Fraction(10**5000 + 1)).endswith("e+5000")


def test_integers_render_plainly():
    assert render_x(Fraction(18350)) == "18350"


def test_empty_report_is_header_only():
    assert emit(Report("x")) == ",".join(CSV_COLUMNS) + "\n"


def test_one_pass_record_is_two_lines(tmp_path):
    rep = Report("r1-bound", [make_record("r1-bound", 1, BallReal.exact(0), BallReal.exact(1), Status.PASS)])
    path = tmp_path / "r.csv"
    text = emit(rep, "csv", path)
    assert path.read_text() == text and len(text.splitlines()) == 2
    assert text.splitlines()[1] == "r1-bound,1,0,0,1.0000000000000000000e+0,0,1.0000000000000000000e+0,Pass"


def test_json_mirrors_csv_fields():
    rep = Report("c", [make_record("c", 2, BallReal.exact(1), BallReal.exact(3), Status.PASS)], ["a note"])
    payload = json.loads(emit(rep, "json"))
    assert payload["notes"] == ["a note"]
    assert list(payload["records"][0]) == CSV_COLUMNS


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        emit(Report("c"), "xml")


def test_exit_code_precedence():
    def rec(s):
        return make_record("c", 1, BallReal.exact(0), BallReal.exact(0), s)

    assert Report("c", [rec(Status.PASS)]).exit_code() == 0
    assert Report("c", [rec(Status.PASS), rec(Status.INCONCLUSIVE)]).exit_code() == 2
    assert Report("c", [rec(Status.INCONCLUSIVE), rec(Status.FAIL)]).exit_code() == 1


@pytest.mark.parametrize("bad", [dict(x_min=0, x_max=5), dict(x_min=5, x_max=2), dict(x_min=1, x_max=2, count=0)])
def test_range_validation(bad):
    with pytest.raises(ValueError):
        RangeSpec(**bad)


def test_points_are_sorted_unique_and_in_range():
    for mode in ("all-integers", "geometric", "random-rational", "mixed"):
        pts = RangeSpec(3, 5000, mode, count=50).points()
        assert pts == sorted(set(pts)) and all(3 <= p <= 5000 for p in pts)


def test_random_rationals_are_seeded_and_bounded():
    a = random_rationals(1, 100, 30, 100, seed=4)
    assert a == random_rationals(1, 100, 30, 100, seed=4)
    assert a != random_rationals(1, 100, 30, 100, seed=5)
    assert all(q.denominator <= 100 for q in a)


def test_geometric_grid_hits_both_ends():
    pts = geometric_points(1, 10**6, 7)
    assert pts[0] == 1 and pts[-1] == 10**6 and len(pts) == 7
