import io
import json
import math

import pytest

from oracles import in_class, members
from sqfdensity.density import ConstraintError
from sqfdensity.experiments import (
    CSV_FIELDS,
    ReportError,
    emit_report,
    load_rows,
    proportion_among_squarefree,
    render_report,
    rule_for_label,
    run_bertram,
    run_example2,
    run_gegenbauer,
    run_jameson,
    verdict_from_rows,
)
from sqfdensity.density import PrimeConstraint


def test_gegenbauer_pass():
    res = run_gegenbauer([10**4, 10**6])
    assert res.verdict
    assert [r.x for r in res.rows] == [10**4, 10**6]


def test_gegenbauer_small_x():
    res = run_gegenbauer([10])
    assert res.final.count == len(members(10)) == 7
    assert res.final.ratio == 0.7
    assert not res.verdict


@pytest.mark.parametrize("xs", [[], [100, 10], [100, 100], [0], [10**10]])
def test_sweep_rejects_bad_x_list(xs):
    with pytest.raises(ValueError):
        run_gegenbauer(xs)


def test_jameson():
    odd, even = run_jameson([30, 10**6])
    assert odd.reports[0].count == len(members(30, [], lambda p: p == 2)) == 12
    assert odd.verdict and even.verdict
    assert abs(odd.final.ratio - 4 / math.pi**2) < 1e-3
    assert abs(even.final.ratio - 2 / math.pi**2) < 1e-3
    share = proportion_among_squarefree(PrimeConstraint(T={2}), 10**6)
    assert abs(share - 1 / 3) < 1e-3


def test_example2():
    res = run_example2([29, 60, 10**6])
    assert [r.count for r in res.reports[:2]] == [0, 1]
    assert members(60, [2, 3, 5], lambda p: p == 7) == [30]
    assert res.verdict


def test_bertram_small():
    res = run_bertram(4, 1, [10])
    assert res.final.count == len(members(10, [], in_class(4, 1)))
    res = run_bertram(2, 1, [10**4])
    assert res.final.count == 2
    assert res.final.ratio == 2 / 10**4


def test_bertram_decay():
    res = run_bertram(4, 1, [10**4, 10**5, 10**6])
    ratios = [r.ratio for r in res.rows]
    assert ratios == sorted(ratios, reverse=True)
    assert res.verdict


def test_bertram_rejects_noncoprime():
    with pytest.raises(ConstraintError):
        run_bertram(4, 2, [100])


def test_deterministic():
    a = run_bertram(3, 1, [1000, 10**5])
    b = run_bertram(3, 1, [1000, 10**5])
    assert a.rows == b.rows and a.verdict == b.verdict


def test_csv_report_format():
    res = run_gegenbauer([10**3, 10**4])
    text = render_report([res], "csv")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 3
    assert lines[1].startswith("gegenbauer,1000,608,0.608,")
    assert render_report([res], "csv") == text


def test_json_report_format():
    res = run_bertram(4, 1, [10**3])
    data = json.loads(render_report([res], "json"))
    assert data[0]["constraint"] == {"T": [], "P": {"kind": "class", "m": 4, "r": 1}}
    assert list(data[0])[: len(CSV_FIELDS)] == list(CSV_FIELDS)
    assert data[0]["count"] == 249


def test_twelve_significant_digits():
    res = run_gegenbauer([10**4])
    row = render_report([res], "csv").splitlines()[1].split(",")
    assert row[4] == "0.607927101854"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_verdict_recomputes_from_serialized(fmt):
    results = [run_gegenbauer([10, 10**4]), run_example2([10**5]), run_bertram(4, 3, [10**3, 10**4])]
    text = render_report(results, fmt)
    grouped = load_rows(text, fmt)
    for res in results:
        assert verdict_from_rows(rule_for_label(res.label), grouped[res.label]) == res.verdict


def test_emit_report_destinations(tmp_path, capsys):
    res = run_gegenbauer([100])
    emit_report([res], "csv")
    assert capsys.readouterr().out.startswith("label,x,count")
    buf = io.StringIO()
    emit_report([res], "json", buf)
    assert json.loads(buf.getvalue())[0]["x"] == 100
    path = tmp_path / "r.csv"
    emit_report([res], "csv", path)
    first = path.read_bytes()
    emit_report([res], "csv", path)
    assert path.read_bytes() == first


def test_emit_report_errors(tmp_path):
    res = run_gegenbauer([100])
    with pytest.raises(ValueError):
        emit_report([], "csv")
    with pytest.raises(ValueError):
        emit_report([res], "xml")
    with pytest.raises(ReportError):
        emit_report([res], "csv", tmp_path / "missing" / "r.csv")
