from fractions import Fraction

import pytest

from sigcy.algebra.exactfield import Subspace
from sigcy.errors import PreconditionError
from sigcy.geometry.deform import (
    AMBIENT,
    LINE_ORDER,
    POINT_ORDER,
    OcticData,
    act_on_point,
    equisingular_h1,
    euler_relation,
    jacobian_piece,
    line_frame,
    order_conditions,
    symmetry_check,
    symmetry_group,
    verify_deform,
    witness_form,
)

P = 1009


@pytest.fixture(scope="module")
def data(model):
    return OcticData.build(model)


def test_octic_space(data):
    assert len(data.basis) == AMBIENT == 165
    assert euler_relation(data)


def test_jacobian_piece(data):
    assert jacobian_piece(data, P).dim == 16


def test_condition_codimensions(data):
    point, line = data.points[0], data.lines[0]
    assert AMBIENT - order_conditions(data, point, POINT_ORDER, P).dim == 20
    assert AMBIENT - order_conditions(data, line, LINE_ORDER, P).dim == 25


def test_octic_satisfies_its_own_conditions(data):
    fvec = data.vector(data.F)
    wvec = data.vector(witness_form())
    for center, order in data.centers:
        space = order_conditions(data, center, order, P)
        assert space.contains(fvec)
        assert not space.contains(wvec)


def test_conditions_need_a_singular_center(data):
    with pytest.raises(PreconditionError):
        order_conditions(data, data.points[0], LINE_ORDER, P)
    with pytest.raises(PreconditionError):
        order_conditions(data, data.lines[0], POINT_ORDER, P)
    off = tuple(Fraction(x) for x in (1, 2, 3, 4))
    with pytest.raises(PreconditionError):
        order_conditions(data, off, POINT_ORDER, P)


def test_line_frame_is_invertible(data):
    for line in data.lines:
        B = line_frame(line)
        cols = [[B[r][c] for r in range(4)] for c in range(4)]
        assert Subspace.span(cols, 4).dim == 4


def test_equisingular_piece_is_rigid(data):
    result = equisingular_h1(data, P)
    assert result.dim_JF8 == 16
    assert result.h1 == 0
    assert result.domain == f"GF({P})"
    relaxed = equisingular_h1(data, P, include_lines=False)
    assert relaxed.h1 >= result.h1


def test_symmetries(data):
    group = symmetry_group()
    identity = tuple((i, 1) for i in range(4))
    assert identity in group
    for g in group[:4]:
        assert {act_on_point(g, p) for p in data.points} == set(data.points)
    assert all(symmetry_check(data, samples=2, p=P))


def test_verify_deform_mod_p(model):
    rows, result = verify_deform([P], model=model, exact=False)
    assert not any(row.failed for row in rows)
    assert result.h1 == 0


@pytest.mark.slow
def test_verify_deform_over_rationals(model):
    rows, result = verify_deform([P], model=model, exact=True)
    assert result.domain == "QQ"
    assert not any(row.failed for row in rows)
