import pytest

from sigcy.arith.counting import (
    beauville_singularities,
    count_table,
    count_weighted,
    count_X,
    hadamard_count,
    modularity_formula,
    naive_count,
    node_point,
    odd_primes,
    singular_points,
    verify_model_agreement,
    verify_modularity,
    verify_nodes,
    verify_oracle,
)
from sigcy.errors import FieldError, PreconditionError
from sigcy.geometry.varieties import catalog
from sigcy.report import Status


# ---------------------------------------------------------
# Point counts
# ---------------------------------------------------------

def test_count_x_small_primes():
    assert (count_X(3).affine, count_X(3).projective) == (65, 32)
    assert count_X(5).projective == 128


def test_count_y_cy_small_primes():
    assert count_weighted("Y_CY", 3).projective == 44
    assert count_weighted("Y_CY", 5).projective == 188


@pytest.mark.parametrize("p", [2, 9])
def test_count_rejects_bad_primes(p):
    with pytest.raises(FieldError):
        count_X(p)


def test_worker_count_does_not_change_the_result():
    assert count_X(7, jobs=1).affine == count_X(7, jobs=3, chunk=2).affine


def test_butterfly_kernel_agrees():
    assert hadamard_count(5) == count_X(5).affine
    assert hadamard_count(3, 2) == count_weighted("X_VGN", 3, 2).affine


CATALOG_NAMES = sorted(catalog())


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_naive_oracle_at_three(name):
    fast = count_weighted(name, 3)
    slow = naive_count(name, 3)
    assert (slow.affine, slow.projective) == (fast.affine, fast.projective)


def test_naive_oracle_verr_at_five():
    fast = count_weighted("VERR", 5)
    slow = naive_count("VERR", 5)
    assert (slow.affine, slow.projective) == (fast.affine, fast.projective) == (993, 248)


@pytest.mark.slow
@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_oracle_rows_pass(name, p):
    rows = verify_oracle([name], [p])
    assert [row.status for row in rows] == [Status.PASS]


def test_models_agree():
    assert all(row.passed for row in verify_model_agreement([3]))


# ---------------------------------------------------------
# Modularity
# ---------------------------------------------------------

def test_formula_values():
    assert modularity_formula(3, -4) == 44
    assert modularity_formula(5, -2) == 188


def test_odd_primes():
    assert odd_primes(20) == [3, 5, 7, 11, 13, 17, 19]


def test_modularity_rows():
    rows, table = verify_modularity(pmax=5)
    by_name = {row.check: row for row in rows}
    assert by_name["modularity.p3"].passed
    assert by_name["modularity.p5"].passed
    assert by_name["modularity.X_literal"].status == Status.FLAGGED
    assert by_name["modularity.p2"].status == Status.SKIPPED
    assert list(table["count"]) == [44, 188]
    assert list(table["count_X"]) == [32, 128]


@pytest.mark.slow
def test_modularity_full_sweep(cache):
    rows, _ = verify_modularity(pmax=97, jobs=4, cache=cache)
    assert not any(row.failed for row in rows)


# ---------------------------------------------------------
# Nodes
# ---------------------------------------------------------

def test_ninety_six_nodes(inventory):
    assert len(inventory) == 96
    assert inventory.rank_histogram == {3: 96}
    assert node_point(inventory.tables) in inventory


def test_nodes_need_a_square_system():
    with pytest.raises(PreconditionError):
        singular_points("Y_CY", 17)


def test_node_point_needs_root_of_two():
    from sigcy.arith.fqarray import fq_tables

    with pytest.raises(PreconditionError):
        node_point(fq_tables(5))


@pytest.mark.slow
def test_node_rows_two_primes():
    assert not any(row.failed for row in verify_nodes([17, 41]))


def test_beauville_rows():
    assert not any(row.failed for row in beauville_singularities())


def test_count_table_pivots_by_prime():
    table = count_table(["Y_CY", "Y_BIDOUBLE"], [3, 5])
    assert table.loc["Y_CY", 3] == 44
    assert table.loc["Y_BIDOUBLE", 5] == 188
