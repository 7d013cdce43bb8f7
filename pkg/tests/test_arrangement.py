import json
from fractions import Fraction

import pytest

from sigcy.errors import PreconditionError, VerificationFailure
from sigcy.geometry import arrangement
from sigcy.geometry.arrangement import (
    BlowupPlan,
    Plane,
    REASON_FOURFOLD,
    REASON_TRIPLE,
    divisor_euler,
    format_point,
    incidence_report,
    intersection_euler,
    make_line,
    meet_lines,
    normalize,
    order_sweep,
    plane_blowup_counts,
    separates,
    stray_intersections,
    verify_arrangement,
)


def vec(*entries):
    return tuple(Fraction(e) for e in entries)


@pytest.fixture(scope="module")
def tally(model):
    return plane_blowup_counts(BlowupPlan.canonical(model))


# ---------------------------------------------------------
# Incidence data
# ---------------------------------------------------------

def test_incidence_counts(model):
    assert (len(model.lines1), len(model.lines2)) == (6, 6)
    assert (len(model.triple1), len(model.triple2)) == (4, 4)
    assert len(model.fourfold) == 12
    assert len(model.sixteen) == 16


def test_fourfold_points_lie_on_four_planes(model):
    for p in model.fourfold:
        assert sorted(abs(x) for x in p) == [0, 0, 1, 1]
        quartics = sorted(pl.quartic for pl in model.planes_through(p))
        assert quartics == [1, 1, 2, 2]


def test_each_l1_line_crosses_two_l2_lines(model):
    for a in model.lines1:
        assert sum(model.crossing(a, b) is not None for b in model.lines2) == 2


def test_normalize_is_projective():
    assert normalize([0, 2, -4, 0]) == normalize([0, -1, 2, 0])


def test_degenerate_lines_raise():
    plane = Plane("x0", 1, (1, 0, 0, 0))
    with pytest.raises(PreconditionError):
        make_line("bad", "l1", plane, plane)
    line = make_line("a", "l1", plane, Plane("x1", 1, (0, 1, 0, 0)))
    with pytest.raises(PreconditionError):
        meet_lines(line, line)


# ---------------------------------------------------------
# Local separation rule
# ---------------------------------------------------------
# Chart at p = (1:0:0:0) on the center line {x2 = x3 = 0}

P, Q = vec(1, 0, 0, 0), vec(0, 1, 0, 0)


def test_line_leaving_the_plane_is_separated():
    assert separates(P, Q, (0, 0, 0, 1), vec(0, 0, 0, 1))
    assert separates(P, Q, (0, 0, 0, 1), vec(0, 0, 1, 1))


def test_line_inside_the_plane_still_meets_it():
    assert not separates(P, Q, (0, 0, 0, 1), vec(0, 0, 1, 0))


def test_plane_not_containing_the_center_keeps_the_fiber():
    assert not separates(P, Q, (0, 1, 0, 0), vec(0, 0, 1, 0))


def test_separation_needs_distinct_points():
    with pytest.raises(PreconditionError):
        separates(P, P, (0, 0, 0, 1), vec(0, 0, 1, 0))
    with pytest.raises(PreconditionError):
        separates(P, Q, (0, 0, 0, 1), P)


# ---------------------------------------------------------
# Plane tallies
# ---------------------------------------------------------

def test_canonical_tally(tally):
    for quartic in (1, 2):
        assert tally.total(quartic) == 28
        assert tally.by_reason(quartic) == {REASON_FOURFOLD: 24, REASON_TRIPLE: 4}
        assert len(tally.triple_assignment(quartic)) == 4


def test_euler_numbers(model, tally):
    assert divisor_euler(tally, 1) == 40
    assert divisor_euler(tally, 2) == 40
    assert intersection_euler(model) == 32


def test_order_must_be_a_permutation(model):
    with pytest.raises(PreconditionError):
        BlowupPlan.with_orders(model, order1=model.lines1[:5])


def test_reordering_keeps_the_total(model):
    reversed_plan = BlowupPlan.with_orders(model, order1=model.lines1[::-1],
                                           order2=model.lines2[::-1])
    assert plane_blowup_counts(reversed_plan).total(2) == 28


def test_partial_order_sweep(model):
    result = order_sweep(model, 1, limit=24)
    assert result.orders == 24
    assert result.totals == [28]


def test_sixteen_lines_become_disjoint(model):
    assert stray_intersections(BlowupPlan.canonical(model)) == []


def test_incidence_report_is_plain_data(model, tally):
    report = incidence_report(model, tally)
    assert len(report["fourfold_points"]) == 12
    assert sum(report["plane_blowups"].values()) == 56
    assert format_point(model.fourfold[0]) in report["fourfold_points"]
    json.dumps(report)


def test_verify_arrangement_without_sweep():
    rows, model, tally = verify_arrangement(sweep=False)
    assert not any(row.failed for row in rows)
    assert tally.total(1) == 28


def test_stray_intersection_blocks_the_euler_number(model, monkeypatch):
    stray = [("C1", "C2", "(1:0:0:0)")]
    monkeypatch.setattr(arrangement, "stray_intersections", lambda plan: stray)
    with pytest.raises(VerificationFailure):
        intersection_euler(model)


def test_unseparated_lines_fail_the_euler_row(monkeypatch):
    monkeypatch.setattr(arrangement, "stray_intersections",
                        lambda plan: [("C1", "C2", "(1:0:0:0)")])
    rows, _, _ = verify_arrangement(sweep=False)
    by_check = {row.check: row for row in rows}
    assert by_check["arrangement.disjoint_sixteen"].failed
    euler = by_check["arrangement.euler.D12"]
    assert euler.failed
    assert euler.computed is None
