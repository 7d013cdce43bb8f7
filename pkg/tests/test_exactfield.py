from fractions import Fraction

import pytest

from sigcy.algebra.exactfield import (
    ExtensionField,
    FpElement,
    Subspace,
    character_table,
    first_irreducible,
    is_irreducible,
    nullspace,
    quadratic_character,
    rank,
    require_odd_prime,
    to_residue,
)
from sigcy.errors import DimensionMismatch, FieldError


# ---------------------------------------------------------
# Prime fields
# ---------------------------------------------------------

@pytest.mark.parametrize("p", [2, 1, 9, 15])
def test_rejects_bad_characteristic(p):
    with pytest.raises(FieldError):
        require_odd_prime(p)


def test_character_table_mod_7():
    chi = character_table(7)
    assert [int(c) for c in chi] == [0, 1, 1, -1, 1, -1, -1]


def test_character_is_multiplicative():
    p = 23
    for a in range(1, p):
        for b in range(1, p):
            assert quadratic_character(a * b, p) == (quadratic_character(a, p)
                                                     * quadratic_character(b, p))


def test_fp_arithmetic():
    a = FpElement(3, 7)
    assert (a * a.inverse()).residue == 1
    assert (a + Fraction(1, 2)).residue == (3 + 4) % 7
    assert (a ** -1).residue == 5
    assert quadratic_character(FpElement(2, 7)) == 1
    with pytest.raises(FieldError):
        a + FpElement(1, 11)


def test_to_residue():
    assert to_residue(Fraction(1, 2), 7) == 4
    assert to_residue(-3, 7) == 4
    with pytest.raises(ZeroDivisionError):
        to_residue(Fraction(1, 7), 7)


# ---------------------------------------------------------
# Extension fields
# ---------------------------------------------------------

def test_irreducibility():
    assert is_irreducible([1, 0, 1], 3)
    assert not is_irreducible([1, 0, 1], 5)
    assert first_irreducible(3, 2) == (1, 0, 1)


def test_gf9_structure():
    F = ExtensionField(3, 2)
    assert F.q == 9
    assert len(list(F.elements())) == 9
    x = F.generator()
    assert x * x == F.element([2])
    for a in F.elements():
        if not a.is_zero():
            assert a * a.inverse() == F.one
    g = F.primitive_element()
    assert g ** 8 == F.one
    assert g ** 4 != F.one


def test_frobenius_fixes_prime_field():
    F = ExtensionField(5, 2)
    for c in range(5):
        assert F.element([c]).frobenius() == F.element([c])
    x = F.generator()
    assert x.frobenius() != x
    assert x.frobenius().frobenius() == x


def test_index_round_trip():
    F = ExtensionField(3, 3)
    for index in (0, 1, 7, 26):
        assert F.from_index(index).index == index


# ---------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------

def test_rank_over_q_and_gf():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 2], [3, 1]]) == 2
    assert rank([[1, 2], [3, 1]], p=5) == 1
    assert rank([]) == 0


def test_nullspace_vectors_are_solutions():
    basis = nullspace([[1, 1, 1]], 3)
    assert len(basis) == 2
    for v in basis:
        assert sum(v) == 0


def test_subspace_sum_and_intersection():
    A = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    B = Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    meet = A.intersect(B)
    assert meet.dim == 1
    assert meet.contains([0, 5, 0])
    assert (A + B).dim == 3
    assert A.dim + B.dim == (A + B).dim + meet.dim


def test_subspace_annihilator_and_kernel():
    A = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    assert A.annihilator() == Subspace.span([[0, 0, 1]], 3)
    assert Subspace.kernel([[1, 0, 0]], 3).dim == 2
    assert Subspace.whole(3).contains_subspace(A)
    assert not A.contains([0, 0, 1])


def test_subspace_canonical_basis():
    assert Subspace.span([[2, 0, 0]], 3) == Subspace.span([[1, 0, 0]], 3)
    assert Subspace.span([[Fraction(1, 3), 1]], 2, p=7).dim == 1


def test_subspace_mismatch():
    with pytest.raises(DimensionMismatch):
        Subspace.whole(3) + Subspace.whole(4)
    with pytest.raises(DimensionMismatch):
        Subspace.whole(3).intersect(Subspace.whole(3, p=5))
