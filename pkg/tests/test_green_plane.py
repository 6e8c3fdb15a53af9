import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_zipper.cli import fixture_path
from lattice_zipper.errors import NotAnEdge
from lattice_zipper.exact import RingElem, parse
from lattice_zipper.green_plane import (
    green, harmonicity_residual, potential, potential_float, transfer_impedance, ust_cylinder_probability,
)
from lattice_zipper.oracle import quadrature_green

coord = st.integers(-30, 30)


def test_potential_figure():
    for e in json.load(open(fixture_path("fig_potential.json"))):
        assert potential(tuple(e["point"])) == parse(e["value"])


def test_first_values():
    assert potential((0, 0)) == 0
    assert potential((1, 0)) == RingElem(1, d=2) / 4
    assert potential((1, 1)) == RingElem.inv_pi()


@given(coord, coord)
def test_harmonic(x, y):
    r = harmonicity_residual((x, y))
    assert r == (-1 if (x, y) == (0, 0) else 0)


@given(coord, coord)
def test_symmetry(x, y):
    a = potential((x, y))
    assert a == potential((y, x)) == potential((-x, y))


def test_green_is_negated_potential():
    assert green((1, 2), (3, 3)) == -potential((2, 1))


@pytest.mark.parametrize("p", [(0, 0), (1, 1), (2, 0), (3, 1), (5, 5), (0, 5)])
def test_quadrature_agrees(p):
    assert abs(quadrature_green("square", p) + float(potential(p))) < 1e-6


def test_far_field_float():
    # the asymptotic branch takes over past radius 40
    assert abs(potential_float((40, 7)) - float(potential((40, 7)))) < 1e-9
    near = potential_float((40, 40))
    far = potential_float((41, 40))
    assert 0 < far - near < 0.01


def test_transfer_impedance():
    e = ((0, 0), (1, 0))
    assert transfer_impedance(e, e) == RingElem(1, d=2) / 2
    with pytest.raises(NotAnEdge):
        transfer_impedance(((0, 0), (2, 0)), e)


edge_st = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.booleans()).map(
    lambda t: ((t[0], t[1]), (t[0] + 1, t[1]) if t[2] else (t[0], t[1] + 1)))


@given(st.lists(edge_st, min_size=1, max_size=3, unique_by=lambda e: frozenset(e)))
def test_cylinder_probability_range(edges):
    p = float(ust_cylinder_probability(edges))
    assert -1e-12 <= p <= 1 + 1e-12


def test_two_edges_at_a_vertex():
    p = ust_cylinder_probability([((0, 0), (1, 0)), ((0, 0), (0, 1))])
    assert 0 < float(p) < 0.25
