import io
import json
from fractions import Fraction

import pytest

from frs_gaps.frs import Word
from frs_gaps.harness import ExperimentReport
from frs_gaps.poly import Poly
from frs_gaps.reports import (
    aggregates,
    format_fraction,
    load_report,
    parse_fraction,
    report_lines,
    to_jsonable,
    write_report,
    write_trend_csv,
)


def _report(violations=0):
    return ExperimentReport(
        kind="line-gap",
        config_echo={"delta": Fraction(1, 4), "trials": 2},
        seed=3,
        records=[
            {"trial": 0, "close_fraction": Fraction(2, 17), "verdict": "sparse"},
            {"trial": 1, "close_fraction": Fraction(1), "verdict": "all-close"},
        ],
        aggregate={"violations": violations, "close_fraction_mean": Fraction(19, 34)},
        wall_clock=1.5,
    )


def test_fraction_text():
    assert format_fraction(Fraction(2, 4)) == "1/2"
    assert format_fraction(Fraction(3)) == "3/1"
    assert parse_fraction("3/1") == 3


def test_to_jsonable(ctx17, tiny):
    obj = {
        "w": Word(((1, 2), (3, 4))),
        "f": Poly(ctx17, (0, 1)),
        "agreement": frozenset({3, 1}),
        "ctx": ctx17,
        "code": tiny,
        1: (Fraction(1, 2), None, True),
    }
    assert to_jsonable(obj) == {
        "w": [1, 2, 3, 4],
        "f": [0, 1],
        "agreement": [1, 3],
        "ctx": {"q": 17, "gamma": 3},
        "code": tiny.describe(),
        "1": ["1/2", None, True],
    }
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_report_lines():
    lines = report_lines(_report())
    assert len(lines) == 3
    assert json.loads(lines[0])["close_fraction"] == "2/17"
    aggregate = json.loads(lines[-1])["aggregate"]
    assert aggregate["seed"] == 3
    assert aggregate["config"]["delta"] == "1/4"
    assert "wall_clock" not in aggregate
    assert json.loads(report_lines(_report(), include_timing=True)[-1])["aggregate"]["wall_clock"] == 1.5


def test_write_and_load(tmp_path):
    path = tmp_path / "report.jsonl"
    assert write_report(_report(), path)
    assert write_report(_report(violations=1), path, append=True)
    with open(path, "a") as f:
        f.write("{not json\n\n")
    objects = load_report(path)
    assert len(objects) == 6
    assert [agg["violations"] for agg in aggregates(objects)] == [0, 1]


def test_write_to_stream():
    buffer = io.StringIO()
    write_report(_report(), buffer)
    assert buffer.getvalue().count("\n") == 3


def test_unwritable_destination(tmp_path):
    assert not write_report(_report(), tmp_path / "missing" / "report.jsonl")


def test_load_missing_file(tmp_path):
    assert load_report(tmp_path / "absent.jsonl") == []


def test_trend_csv(tmp_path):
    rows = [
        {"q": 17, "delta": Fraction(3, 4), "close_fraction": Fraction(1, 5)},
        {"q": 31, "delta": Fraction(3, 4), "close_fraction": Fraction(1, 9)},
    ]
    path = tmp_path / "trend.csv"
    write_trend_csv(rows, path)
    assert path.read_text().splitlines() == [
        "q,delta,close_fraction",
        "17,3/4,1/5",
        "31,3/4,1/9",
    ]
    buffer = io.StringIO()
    write_trend_csv([], buffer)
    assert buffer.getvalue() == ""
