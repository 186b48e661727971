import json
from fractions import Fraction as F

import click
import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from eulerroots import cli


@pytest.fixture
def run(tmp_path):
    runner = CliRunner()

    def go(*args, cache=True):
        pre = ["--cache-dir", str(tmp_path / "cache")] if cache else ["--no-cache"]
        return runner.invoke(cli.main, pre + list(args), catch_exceptions=False)
    return go


def test_coeffs(run):
    assert run("coeffs", "--n", "3").output.strip() == "1,11,11,1"
    out = json.loads(run("coeffs", "--n", "2", "--multivariate").output)
    assert out == {"{}": 1, "{2}": 1, "{3}": 3, "{2,3}": 1}
    assert run("coeffs", "--n", "3", "--dlg", "1").output.strip() == "1,-99,99,-1"
    assert run("coeffs", "--n", "4", "--bruteforce").output.strip() == "1,26,66,26,1"


def test_coeffs_cap(run):
    res = run("coeffs", "--n", "12", "--bruteforce")
    assert res.exit_code == 2 and "cap" in res.output


def test_bound_single(run):
    rows = cli.parse_rows(run("bound", "--method", "colucci", "--n", "3").output, "csv")
    assert len(rows) == 1 and rows[0].lo <= F(11, 3) <= rows[0].hi
    assert rows[0].sound == "yes"
    rows = cli.parse_rows(run("bound", "--method", "sobolev-min", "--n", "3").output, "csv")
    assert abs(float(rows[0].lo) - 9.8874) < 1e-3


def test_bound_range(run):
    rows = cli.parse_rows(run("bound", "--method", "dlg-relax", "--n-range", "5..10").output, "csv")
    assert [r.n for r in rows] == list(range(5, 11))
    assert all(r.sound == "yes" for r in rows)


def test_bound_error_row(run):
    res = run("bound", "--method", "multi-v2", "--n", "7")
    rows = cli.parse_rows(res.output, "csv")
    assert res.exit_code == 0 and rows[0].error and rows[0].lo is None
    assert run("bound", "--method", "multi-v2", "--n", "7", "--strict").exit_code == 2


def test_bound_usage(run):
    assert run("bound", "--method", "colucci").exit_code == 2
    assert run("bound", "--method", "nope", "--n", "3").exit_code == 2
    assert run("bound", "--method", "colucci", "--n", "3", "--precision", "16").exit_code == 2


def test_bound_json_round_trip(run):
    text = run("bound", "--method", "uni-relax", "--n-range", "3..6", "--format", "json").output
    rows = cli.parse_rows(text, "json")
    assert cli.parse_rows(cli.emit_rows(rows, "json"), "json") == rows
    assert cli.parse_rows(cli.emit_rows(rows, "csv"), "csv") == rows


def test_compare_ladder(run, tmp_path):
    out = tmp_path / "cmp.csv"
    res = run("compare", "--n-range", "6..14:2", "--file", str(out), "--strict")
    assert res.exit_code == 0
    rows = cli.parse_rows(out.read_text(), "csv")
    assert {r.ladder for r in rows} == {"ok"}
    assert {r.n for r in rows if r.method == "oracle"} == {6, 8, 10, 12, 14}
    assert all(r.sound == "yes" for r in rows if r.method != "oracle")


def test_cache_reload_is_verbatim(run, tmp_path):
    first = run("bound", "--method", "bivar", "--n-range", "6..8").output
    assert any((tmp_path / "cache").glob("root-*.json"))
    assert run("bound", "--method", "bivar", "--n-range", "6..8").output == first
    assert run("bound", "--method", "bivar", "--n-range", "6..8", cache=False).output == first


def test_parallel_matches_serial(run):
    a = run("bound", "--method", "uni-vec11", "--n-range", "3..7").output
    b = run("bound", "--method", "uni-vec11", "--n-range", "3..7", "--parallelism", "2").output
    assert a == b


def test_verify(run):
    res = run("verify", "--suite", "counting", "--max", "6")
    assert res.exit_code == 0 and json.loads(res.output)["passed"]
    assert json.loads(run("verify", "--suite", "mirror", "--max", "5").output)["passed"]


def test_verify_failure_exit(run, monkeypatch):
    from eulerroots import suites
    monkeypatch.setitem(suites.SUITES, "counting", lambda max_n=1: [suites.Check("x", False, "boom")])
    res = run("verify", "--suite", "counting")
    assert res.exit_code == 1 and not json.loads(res.output)["passed"]


def _blocks(text):
    out, cur = [], None
    for line in text.splitlines():
        if line.startswith("# n="):
            cur = []
            out.append(cur)
        elif line.strip():
            cur.append(tuple(float(x) for x in line.split()))
    return out


def test_figure(run):
    blocks = _blocks(run("figure", "--n", "2").output)
    assert len(blocks) == 2 and len(blocks[1]) == 2
    text = run("figure", "--n", "10").output
    blocks = _blocks(text)
    assert len(blocks) == 10 and [len(b) for b in blocks] == list(range(1, 11))
    assert all(max(abs(y) for _, y in b) <= 1 + 1e-12 for b in blocks)
    assert all(b[-1][1] == pytest.approx(1) for b in blocks[:4])
    assert text == run("figure", "--n", "10").output


def test_parse_range():
    assert cli.parse_range("6..14:2") == (6, 8, 10, 12, 14)
    assert cli.parse_range("3..3") == (3,)
    for bad in ("3", "5..2", "a..b"):
        with pytest.raises(click.BadParameter):
            cli.parse_range(bad)


def test_decimal_rounding_is_outward():
    x = F(1, 3)
    lo, hi = cli._decimal(x, 5, False), cli._decimal(x, 5, True)
    assert lo <= x <= hi and hi - lo <= F(1, 10 ** 5)
    assert cli._decimal(F(7), 3, True) == 7


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-10 ** 6, max_value=10 ** 6), st.integers(1, 30))
def test_csv_json_round_trip(x, digits):
    lo, hi = cli._decimal(x, digits, False), cli._decimal(x, digits, True)
    assert lo <= x <= hi
    row = cli.Row("colucci", 4, "lower", lo, hi, 128, "0.5", "yes")
    err = cli.Row("multi_v2", 5, "lower", None, None, 128, error="odd n")
    for fmt in ("csv", "json"):
        assert cli.parse_rows(cli.emit_rows([row, err], fmt), fmt) == [row, err]
