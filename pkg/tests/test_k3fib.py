import pytest

from sigcy.errors import PreconditionError
from sigcy.geometry.k3fib import (
    discriminant,
    fiber,
    normalize_param,
    pencil_symmetries,
    restrictions,
    special_fibers,
    special_incidence,
    splitting_checks,
    sweep,
    verify_k3,
)
from sigcy.report import Status

SPECIAL = [(0, 1), (1, -1), (1, 0), (1, 1)]


def test_normalize_param():
    assert normalize_param(4, 2) == (2, 1)
    assert normalize_param(-2, -1) == (2, 1)
    assert normalize_param(0, -3) == (0, 1)
    with pytest.raises(PreconditionError):
        normalize_param(0, 0)


def test_generic_fiber_configuration():
    f = fiber(2, 1)
    assert f.is_generic
    assert f.distinct_lines()
    assert f.own_nodes() == 7
    assert f.mutual_points() == 8
    assert f.variety.check_homogeneity().passed


def test_special_fibers():
    assert special_fibers() == SPECIAL
    for param in SPECIAL:
        assert fiber(*param).degenerations()


def test_discriminant_vanishes_at_special_parameters():
    expr = discriminant()
    s, t = sorted(expr.free_symbols, key=str)
    for a, b in SPECIAL:
        assert expr.subs({s: a, t: b}) == 0
    assert expr.subs({s: 2, t: 1}) != 0


def test_pencil_symmetries_permute_special_fibers():
    actions = pencil_symmetries()
    assert actions
    for (a2, a3), (b2, b3) in actions:
        moved = {normalize_param(s * a2 + t * b2, s * a3 + t * b3) for s, t in SPECIAL}
        assert moved == set(SPECIAL)


def test_branch_curves_split_on_generic_fibers():
    found = restrictions(3, 2)
    assert set(found) == {"line t*x0+s*x1", "line s*x0+t*x1", "conic t*x0*x1+s*x2^2"}
    assert splitting_checks(2, 1).passed
    assert splitting_checks(3, -5).passed


def test_splitting_skipped_on_special_fibers():
    assert splitting_checks(1, 1).status == Status.SKIPPED


def test_special_incidence(model):
    assert [len(x) for x in special_incidence((1, 0), model)] == [4, 2]
    assert [len(x) for x in special_incidence((1, 1), model)] == [1, 1]


def test_random_parameters_are_generic():
    assert sweep(20, seed=5)["unexpected"] == 0


def test_verify_k3_rows(model):
    rows = verify_k3(samples=2, sweep_size=10, seed=1, model=model)
    assert not any(row.failed for row in rows)
    by_name = {row.check: row for row in rows}
    assert by_name["k3.divisor_tally"].status == Status.FLAGGED
    assert by_name["k3.special_fibers"].passed
