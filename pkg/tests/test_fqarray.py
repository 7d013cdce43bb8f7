import numpy as np
import pytest

from sigcy.algebra.exactfield import character_table
from sigcy.arith import fqarray
from sigcy.arith.fqarray import FqTables, fq_tables, max_table_order, set_max_table_order
from sigcy.errors import FieldError


def test_prime_field_tables():
    T = fq_tables(7)
    assert int(T.mul[3, 5]) == 1
    assert int(T.inv[3]) == 5
    assert int(T.add[4, 5]) == 2
    assert int(T.sub[2, 5]) == 4
    assert [int(c) for c in T.chi] == [int(c) for c in character_table(7)]
    assert int(T.half[T.embed(2)]) == 1


def test_square_roots():
    T = fq_tables(17)
    for a in range(17):
        for r in T.square_roots(a):
            assert int(T.mul[r, r]) == a
    assert len(T.square_roots(2)) == 2
    assert T.square_roots(3) == []
    assert T.square_roots(0) == [0]


def test_extension_field_tables():
    T = fq_tables(3, 2)
    idx = np.arange(T.q)
    assert (T.frobenius[T.frobenius[idx]] == idx).all()
    assert (T.mul[idx, T.inv[idx]][1:] == 1).all()
    assert int(T.chi[1:].sum()) == 0


def test_power_and_roots_of_unity():
    T = fq_tables(17)
    r = T.nth_root_of_unity(8)
    assert int(T.power(np.array([r]), 8)[0]) == 1
    assert int(T.power(np.array([r]), 4)[0]) != 1
    assert (T.power(np.arange(17), 0) == 1).all()
    with pytest.raises(FieldError):
        fq_tables(7).nth_root_of_unity(4)


def test_rank_by_table_lookup():
    T = fq_tables(7)
    assert T.rank([[1, 2], [2, 4]]) == 1
    assert T.rank([[1, 0], [0, 1]]) == 2
    assert T.rank([]) == 0


def test_table_size_limit():
    with pytest.raises(FieldError):
        FqTables(101, 2)


def test_table_limit_is_configurable(monkeypatch):
    monkeypatch.setattr(fqarray, "_table_order_limit", fqarray.MAX_TABLE_ORDER)
    set_max_table_order(5)
    assert max_table_order() == 5
    assert FqTables(5).q == 5
    with pytest.raises(FieldError, match="max_table_order"):
        FqTables(7)
    with pytest.raises(FieldError):
        set_max_table_order(2)
    with pytest.raises(FieldError):
        set_max_table_order(10 ** 5 + 1)
    assert max_table_order() == 5


def test_raised_limit_admits_larger_primes(monkeypatch):
    monkeypatch.setattr(fqarray, "_table_order_limit", fqarray.MAX_TABLE_ORDER)
    with pytest.raises(FieldError):
        FqTables(2503)
    set_max_table_order(2503)
    T = FqTables(2503)
    assert T.mul[T.embed(2), T.inv[T.embed(2)]] == 1
