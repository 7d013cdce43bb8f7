from sigcy.arith.counting import count_weighted
from sigcy.db import CountCache, DatabaseManager


def test_put_and_get(cache):
    assert cache.get("X_VGN", 3) is None
    cache.put("X_VGN", 3, 1, affine=65, projective=32, elapsed_ms=5)
    record = cache.get("X_VGN", 3)
    assert (record.affine_count, record.projective_count) == (65, 32)
    assert [r.p for r in cache.entries("X_VGN")] == [3]


def test_code_version_isolates_entries(tmp_path):
    db = DatabaseManager(f"sqlite:///{tmp_path / 'c.db'}")
    old = CountCache(db, code_version="old")
    old.put("Y_CY", 5, 1, 100, 25)
    assert CountCache(db, code_version="new").get("Y_CY", 5) is None
    assert old.get("Y_CY", 5).projective_count == 25


def test_counts_are_served_from_cache(cache):
    first = count_weighted("X_VGN", 5, cache=cache)
    second = count_weighted("X_VGN", 5, cache=cache)
    assert not first.cached
    assert second.cached
    assert (second.affine, second.projective) == (first.affine, first.projective)
