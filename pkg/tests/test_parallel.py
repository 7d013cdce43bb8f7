import pytest

from sigcy.utils.parallel import batch_process, parallel_map, process_concurrently


def test_results_keep_input_order():
    assert process_concurrently(list(range(20)), lambda x: x * x, max_workers=4) == \
        [x * x for x in range(20)]


def test_failed_items_become_none():
    def fragile(x):
        if x == 3:
            raise ValueError("bad item")
        return x

    assert process_concurrently([1, 2, 3, 4], fragile, max_workers=2) == [1, 2, None, 4]


def test_batches_cover_every_item():
    sums = batch_process(list(range(10)), sum, batch_size=4, max_workers=3)
    assert sums == [6, 22, 17]


def test_parallel_map_propagates():
    assert parallel_map(abs, [-1, -2], max_workers=2) == [1, 2]
    with pytest.raises(ZeroDivisionError):
        parallel_map(lambda x: 1 / x, [1, 0], max_workers=2)
