import pytest

from sigcy.errors import PreconditionError
from sigcy.geometry.varieties import (
    IDENTITY,
    SignVector,
    catalog,
    dump_catalog,
    fixed_subspaces,
    get_variety,
    group_K,
    k3_fiber,
    load_catalog,
    parse_param,
    quadric_pullback,
    split_quadrics,
    verify_coordinate_changes,
    verify_quotient_map,
    verify_quadric_splitting,
)
from sigcy.report import Status


# ---------------------------------------------------------
# The group K
# ---------------------------------------------------------

def test_group_k_is_elementary_abelian_of_order_32():
    K = group_K()
    assert len(K) == 32
    assert K[0] == IDENTITY
    assert all(g.in_K() for g in K)
    members = set(K)
    for g in K:
        assert g * g == IDENTITY
        for h in K:
            assert g * h in members
            assert g * h == h * g


def test_sign_vector_validation():
    with pytest.raises(PreconditionError):
        SignVector((1, 1, 1))
    with pytest.raises(PreconditionError):
        SignVector((1, 0, 1, 1, 1, 1, 1, 1))


def test_fixed_subspaces_are_complementary():
    g = group_K()[5]
    plus, minus = fixed_subspaces(g)
    assert plus.zero | minus.zero == frozenset(range(8))
    assert not plus.zero & minus.zero
    with pytest.raises(PreconditionError):
        fixed_subspaces(IDENTITY)
    whole, _ = fixed_subspaces(IDENTITY, allow_identity=True)
    assert whole.zero == frozenset()


# ---------------------------------------------------------
# Catalog
# ---------------------------------------------------------

def test_catalog_equations_are_homogeneous():
    for variety in catalog().values():
        assert variety.check_homogeneity().passed, variety.name


def test_y_cy_degrees():
    y = catalog()["Y_CY"]
    assert y.degrees() == [4, 4]
    assert y.ring.weights == (1, 1, 1, 1, 2, 2)


def test_k3_fiber_construction():
    fiber = k3_fiber(2, 1)
    assert fiber.check_homogeneity().passed
    assert get_variety("K3_FIBER(2:1)").equations == fiber.equations
    with pytest.raises(PreconditionError):
        k3_fiber(0, 0)


def test_unknown_variety():
    with pytest.raises(PreconditionError):
        get_variety("NOPE")


def test_parse_param():
    assert parse_param("2:1") == (2, 1)
    assert parse_param("-1:3") == (-1, 3)
    with pytest.raises(PreconditionError):
        parse_param("2")


def test_catalog_dump_reloads():
    loaded = load_catalog(dump_catalog())
    assert set(catalog()) <= set(loaded)
    assert loaded["Y_CY"].equations == catalog()["Y_CY"].equations
    assert loaded["K3_FIBER(2:1)"].equations == k3_fiber(2, 1).equations


# ---------------------------------------------------------
# Symbolic checks
# ---------------------------------------------------------

def test_quotient_map_rows():
    rows = {row.check: row for row in verify_quotient_map()}
    assert rows["quotient_map.bidouble.eq1"].passed
    assert rows["quotient_map.bidouble.eq2"].passed
    assert rows["quotient_map.cy.eq2"].passed
    assert rows["quotient_map.K_invariance"].passed
    assert rows["quotient_map.cy.literal_eq2"].status == Status.FLAGGED


def test_coordinate_change_rows():
    rows = verify_coordinate_changes()
    assert not any(row.failed for row in rows)
    by_name = {row.check: row for row in rows}
    assert by_name["coordinate_change.symmetric.literal_scaling"].status == Status.FLAGGED
    assert by_name["verr.first_rhs"].passed
    assert by_name["verr.second_rhs"].passed


def test_quadric_pullbacks_split():
    rows = {row.check: row for row in verify_quadric_splitting()}
    assert rows["quadrics.normal_form"].passed
    assert rows["quadrics.stated_square"].status == Status.FLAGGED
    assert all(row.passed for name, row in rows.items() if name.startswith("quadrics.split"))


def test_split_quadric_count():
    rows = verify_quadric_splitting()
    assert split_quadrics(rows) == 3
    first = next(i for i, row in enumerate(rows) if row.check.startswith("quadrics.split."))
    rows[first] = rows[first].model_copy(update={"status": Status.FAIL})
    assert split_quadrics(rows) == 2


def test_quadric_pullback_is_not_a_square():
    nf = quadric_pullback((0, 1, 2, 3))
    X0, X1, X2, X3 = nf.ring.gens()[:4]
    assert nf == (X0 * X2 - X1 * X3) * (X0 * X2 + X1 * X3) * 4
