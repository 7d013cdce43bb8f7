import json
from fractions import Fraction

from sigcy.report import (
    CheckReport,
    Provenance,
    RunReport,
    Status,
    compare,
    failure,
    flagged,
    info,
    values_match,
)


def test_exact_and_tolerant_matching():
    assert values_match(80, 80)
    assert not values_match(80, 81)
    assert values_match(0.0, 1e-12, tol=1e-10)
    assert not values_match(0.0, 1e-8, tol=1e-10)
    assert values_match([0.0, 1.0], [1e-12, 1.0], tol=1e-10)
    assert not values_match(0.0, float("nan"), tol=1e-10)


def test_compare_statuses():
    assert compare("a", "c", 1, 1).status == Status.PASS
    assert compare("a", "c", 1, 2).status == Status.FAIL
    assert compare("a", "c", 1, 2, flag_on_mismatch=True).status == Status.FLAGGED
    assert flagged("a", "c", 1, 2).status == Status.FLAGGED
    assert info("a", "c", 5, "note").status == Status.SKIPPED


def test_failure_row_carries_the_message():
    row = failure("group.error", "c", ValueError("boom"))
    assert row.failed
    assert row.note == "ValueError: boom"


def test_row_schema():
    row = compare("x", "cite", {"h11": 40}, {"h11": 40}, Provenance.PAPER).row()
    assert set(row) == {"check", "citation", "expected", "provenance", "computed",
                        "status", "ms"}
    assert row["provenance"] == "PAPER"
    assert row["status"] == "pass"


def test_provenance_names_match_their_labels():
    assert all(member.name == member.value for member in Provenance)


def test_plain_serialization():
    row = CheckReport(check="x", citation="c", expected=Fraction(32, 65),
                      computed=(Fraction(4), {1, 2}), status=Status.PASS).row()
    assert row["expected"] == "32/65"
    assert row["computed"] == [4, [1, 2]]


def test_run_report_exit_code_and_json(tmp_path):
    report = RunReport(version="0", code_version="c", seed=1)
    report.extend([compare("a", "c", 1, 1), flagged("b", "c", 1, 2, note="misprint")])
    assert report.exit_code == 0
    assert report.summary == {"pass": 1, "fail": 0, "flagged-discrepancy": 1, "skipped": 0}

    path = report.write(str(tmp_path / "out" / "report.json"))
    payload = json.loads(path.read_text())
    assert payload["summary"]["pass"] == 1
    assert payload["checks"][1]["note"] == "misprint"

    report.extend([compare("c", "c", 1, 2)])
    assert report.exit_code == 1
    assert list(report.to_frame().columns) == ["check", "status", "expected", "computed", "ms"]
