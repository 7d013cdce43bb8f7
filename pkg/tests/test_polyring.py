from fractions import Fraction

import pytest

from sigcy.algebra.polyring import (
    MonomialBasis,
    PolyRing,
    RestrictionStatus,
    format_poly,
    graded_piece,
    parse_poly,
    reduce_square_relations,
    restrict_to_curve,
)
from sigcy.errors import DimensionMismatch, PreconditionError

R = PolyRing(("x", "y", "z"))
x, y, z = R.gens()


def test_arithmetic():
    assert (x + y) ** 2 == x ** 2 + 2 * x * y + y ** 2
    assert (x - x).is_zero()
    assert (x * y).derivative("x") == y
    assert (x ** 3 * y).derivative(0) == 3 * x ** 2 * y
    assert (x + 1).total_degree() == 1


def test_parse_and_format():
    poly = parse_poly("x^2 - 1/2*y*z + 3", R)
    assert poly.coefficient((2, 0, 0)) == 1
    assert poly.coefficient((0, 1, 1)) == Fraction(-1, 2)
    assert poly.coefficient((0, 0, 0)) == 3
    assert parse_poly(format_poly(poly), R) == poly
    with pytest.raises(PreconditionError):
        parse_poly("w^2", R)


def test_weighted_homogeneity():
    W = PolyRing(("a", "b"), (1, 2))
    a, b = W.gens()
    assert (a ** 2 + b).is_homogeneous()
    assert (a ** 2 + b).weighted_degree() == 2
    assert not (a + b).is_homogeneous()
    assert (a + b).is_homogeneous(weighted=False)


def test_ring_validation():
    with pytest.raises(DimensionMismatch):
        PolyRing(("a", "b"), (1,))
    with pytest.raises(PreconditionError):
        PolyRing(("a", "a"))
    with pytest.raises(DimensionMismatch):
        x + PolyRing(("u",)).var("u")


def test_evaluate_and_mod_p():
    poly = x ** 2 - y * z
    assert poly.evaluate([Fraction(1, 2), 1, 1]) == Fraction(-3, 4)
    values = poly.eval_mod_p([[2], [3], [4]], 7)
    assert int(values[0]) == (4 - 12) % 7


def test_substitute_linear():
    poly = x * y
    swapped = poly.substitute_linear([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert swapped == poly
    sheared = x.substitute_linear([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert sheared == x + y


def test_sympy_round_trip():
    poly = 3 * x ** 2 * z - Fraction(1, 5) * y
    assert type(poly).from_sympy(poly.to_sympy(), R) == poly


# ---------------------------------------------------------
# Graded pieces
# ---------------------------------------------------------

def test_monomial_basis_sizes():
    assert len(MonomialBasis(R, 2)) == 6
    assert len(MonomialBasis(PolyRing(("x0", "x1", "x2", "x3")), 8)) == 165
    assert len(MonomialBasis(PolyRing(("a", "b", "c"), (1, 1, 2)), 2)) == 4


def test_basis_vector_round_trip():
    basis = MonomialBasis(R, 2)
    poly = x * y - 4 * z ** 2
    assert basis.poly(basis.vector(poly)) == poly
    with pytest.raises(PreconditionError):
        basis.vector(x)


def test_graded_piece_dimension():
    assert graded_piece([x * y], 3).dim == 3
    assert graded_piece([x, y], 2).dim == 5
    assert graded_piece([x, y], 2, p=11).dim == 5


def test_reduce_square_relations():
    S = PolyRing(("u", "v"))
    u, v = S.gens()
    assert reduce_square_relations(v ** 3, {"v": u}) == u * v
    assert reduce_square_relations(v ** 4 + u, {"v": u + 1}) == u ** 2 + 3 * u + 1


# ---------------------------------------------------------
# Restriction to rational curves
# ---------------------------------------------------------

C = PolyRing(("s", "t"))
s, t = C.gens()
CONIC = [s ** 2, s * t, t ** 2]


def test_restriction_zero_on_the_conic():
    assert restrict_to_curve(x * z - y ** 2, CONIC).status == RestrictionStatus.ZERO


def test_restriction_square_and_not_square():
    assert restrict_to_curve(x * z, CONIC).is_square
    assert restrict_to_curve(x * y, CONIC).status == RestrictionStatus.NOT_SQUARE


def test_restriction_needs_one_form_per_variable():
    with pytest.raises(DimensionMismatch):
        restrict_to_curve(x, [s, t])
