import pytest

from sigcy.arith.fixloci import (
    FixedKind,
    binomial_relations,
    classify,
    component_incidence,
    component_orbits,
    fixed_count,
    gh_check,
    joint_count,
    node_orbits,
    verify_fixloci,
)
from sigcy.errors import PreconditionError
from sigcy.geometry.varieties import IDENTITY, group_K


def test_kind_census(fixed_census):
    assert fixed_census.kind_counts == {"free": 13, "nodes": 6, "curves": 12}


def test_node_fixers_partition_the_nodes(fixed_census):
    node_sets = [set(r.nodes) for r in fixed_census.of_kind(FixedKind.NODES)]
    assert [len(s) for s in node_sets] == [16] * 6
    assert len(set().union(*node_sets)) == 96


def test_curve_fixers_have_four_components(fixed_census):
    reports = fixed_census.of_kind(FixedKind.CURVES)
    assert all(len(r.components) == 4 for r in reports)
    assert len(fixed_census.components) == 48


def test_free_elements_fix_nothing(fixed_census):
    for report in fixed_census.of_kind(FixedKind.FREE):
        assert report.counts == (0, 0)


def test_group_permutes_curve_components(fixed_census):
    for report in fixed_census.of_kind(FixedKind.CURVES):
        keys = {c.key for c in report.components}
        for h in group_K():
            assert {c.act(h).key for c in report.components} == keys


def test_orbits(fixed_census):
    orbits = node_orbits(fixed_census.inventory)
    assert sorted(len(o) for o in orbits) == [8] * 12
    classes = component_orbits(fixed_census.components)
    assert len(orbits) + len(classes) == 36


def test_classify_preconditions(inventory):
    with pytest.raises(PreconditionError):
        classify(IDENTITY, 17, inventory)
    with pytest.raises(PreconditionError):
        classify(group_K()[1], 13)


def test_fixed_count_is_the_eigenspace_sum(fixed_census):
    for g, report in list(fixed_census.reports.items())[:5]:
        assert fixed_count(g, 17) == report.counts[0]


# ---------------------------------------------------------
# Pair table
# ---------------------------------------------------------

def test_pair_table_shape(pairs):
    assert len(pairs) == 31 * 30
    assert pairs.is_symmetric()


def test_pair_histograms(pairs):
    assert pairs.histogram("curves-nodes").get(8, 0) == 48
    assert {n: c for n, c in pairs.histogram("curves-curves").items() if n} == {8: 24, 16: 48}
    assert set(pairs.histogram("nodes-nodes")) == {0}


def test_curve_node_points_are_nodes(pairs):
    assert all(e.all_nodes for e in pairs.select("curves-nodes") if e.count)
    assert all(not e.shared_nodes for e in pairs.select("curves-curves") if e.count == 16)


def test_joint_count_matches_table(pairs):
    (g, h), entry = next(iter(pairs.entries.items()))
    assert joint_count(g, h, 17) == entry.count


def test_products_fix_the_shared_nodes(pairs, fixed_census):
    assert gh_check(pairs, fixed_census) == []
    assert list(component_incidence(pairs, fixed_census)) == [4]


def test_binomials_on_a_curve_side(fixed_census):
    report = fixed_census.of_kind(FixedKind.CURVES)[0]
    component = report.components[0]
    relations, _, _ = binomial_relations(component.zero)
    assert len(relations) == 2


@pytest.mark.slow
def test_verify_fixloci_two_primes():
    rows, census, table = verify_fixloci([17, 41])
    assert not any(row.failed for row in rows)
    assert census.p == 17
    assert len(table) == 930
