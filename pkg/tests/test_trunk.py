import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_zipper.cli import fixture_path
from lattice_zipper.exact import SQRT2, parse
from lattice_zipper.trunk import (
    TreeEdge, conservation_defect, monomer_dimer_probability, straight_run_probability, trunk_cylinder_probability,
    trunk_degree_distribution, trunk_directed_edge_probability, trunk_table,
)


def test_figure_one():
    for e in json.load(open(fixture_path("fig1_trunk.json"))):
        got = trunk_directed_edge_probability(TreeEdge(tuple(e["tail"]), e["dir"]))
        assert got == parse(e["value"]), e


def test_named_edges():
    assert trunk_directed_edge_probability(TreeEdge((0, 0), "E")) == SQRT2 - 1
    assert trunk_directed_edge_probability(TreeEdge((0, 0), "N")) == 1 - SQRT2 / 2
    assert trunk_directed_edge_probability(TreeEdge((1, 0), "W")) == 3 - 2 * SQRT2
    assert trunk_directed_edge_probability(TreeEdge((1, 1), "S")) == parse("2 - 5/4*sqrt(2)")
    assert trunk_directed_edge_probability(TreeEdge((2, 2), "E")) == parse("9/8*sqrt(2) - 169/128")


def test_vertex_one_one_sums_to_one():
    total = sum(trunk_directed_edge_probability(TreeEdge((1, 1), d)) for d in "ENWS")
    assert total == 1


def test_conservation_on_window():
    for x in range(-3, 4):
        for y in range(-3, 4):
            if (x, y) in ((-1, 0), (0, 0)):
                continue
            assert conservation_defect((x, y)) == 0, (x, y)


def test_table_matches_single_edges():
    table = trunk_table(0, 1, 0, 1)
    assert table[TreeEdge((0, 0), "E")] == SQRT2 - 1
    assert all(0 <= float(p) <= 1 for p in table.values())


def test_degree_distribution():
    d = trunk_degree_distribution()
    assert d == {2: parse("1/2"), 3: SQRT2 - 1, 4: parse("3/2") - SQRT2}
    assert sum(d.values()) == 1


def test_cylinder_single_edge():
    assert trunk_cylinder_probability([TreeEdge((0, 0), "E")]) == SQRT2 - 1


@pytest.mark.parametrize("k", range(13))
def test_straight_runs(k):
    assert straight_run_probability(k) == (SQRT2 - 1) ** k


def test_straight_run_budget():
    with pytest.raises(ValueError):
        straight_run_probability(13)


@given(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from("ENWS"))
def test_edge_probability_range(x, y, d):
    if (x, y) in ((-1, 0), (0, 0)):
        return
    p = float(trunk_directed_edge_probability(TreeEdge((x, y), d)))
    assert 0 <= p <= 1


@pytest.mark.parametrize("w", [(1, 2), (-1, 0), (3, 0), (2, 3), (0, -3)])
def test_monomer_partition(w):
    total = sum(monomer_dimer_probability(b, w) for b in
                [(w[0] + dx, w[1] + dy) for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))] if b != (0, 0))
    assert total == 1


def test_monomer_far_field():
    # the deviation from 1/4 decays like 1/r
    devs = [abs(float(monomer_dimer_probability((r, 0), (r + 1, 0))) - 0.25) for r in (6, 12, 24)]
    assert devs[0] > devs[1] > devs[2]
    assert all(d < 0.2 / r for d, r in zip(devs, (6, 12, 24)))
