import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_zipper.cli import fixture_path
from lattice_zipper.errors import ConditioningTooRare, Singular
from lattice_zipper.exact import INV_PI
from lattice_zipper.oracle import (
    CONVERGENCE_KINDS, DimerRegion, FiniteProblem, GaussQ, box_edge_monte_carlo, convergence_error,
    count_tripod_trees, exact_green_solve, exact_kasteleyn_solve, float_green_solve, green_difference_kinverse,
    kasteleyn_det, quadrature_axis_difference, quadrature_green, spanning_tree_count, temperleyan_region,
    trunk_strip, tripod_lemma_check, wilson_sample,
)


def test_three_by_three_box():
    pts = [(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1)]
    lap = np.array([[4 if p == q else -(abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1) for q in pts] for p in pts], float)
    got = exact_green_solve(FiniteProblem(radius=1), (0, 0), (0, 0))
    assert got == Fraction(3, 8)
    assert abs(float(got) - np.linalg.inv(lap)[4, 4]) < 1e-12


pts = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=15)
@given(pts, pts)
def test_green_symmetric(u, v):
    p = FiniteProblem(radius=3)
    a = exact_green_solve(p, u, v)
    assert a == exact_green_solve(p, v, u)
    assert abs(float(a) - float_green_solve(p, u, [v])[v]) < 1e-12


def test_green_difference_formula():
    region = temperleyan_region(5)
    blacks, whites = region.blacks(), region.whites()
    from lattice_zipper.oracle import kasteleyn_columns
    cols = kasteleyn_columns(region, whites)
    for w in whites:
        for b in blacks:
            assert green_difference_kinverse(5, b, w) == cols[w][b], (b, w)


def test_matrix_tree():
    assert spanning_tree_count(3) == 192
    region = temperleyan_region(3)
    d = kasteleyn_det(region)
    assert d.re * d.re + d.im * d.im == 192 ** 2


def test_tripod_lemma_small():
    assert count_tripod_trees(3) == (12, 192)
    r = tripod_lemma_check(3)
    assert r["ratio"] == r["direct"]
    assert r["prob_sq"] == Fraction(12, 192) ** 2
    # equal to the tree probability up to a unit phase
    assert r["denominator"] == GaussQ(0, Fraction(-1, 16))


@pytest.mark.parametrize("n", [5, 9])
def test_tripod_lemma(n):
    r = tripod_lemma_check(n)
    assert r["ratio"] == r["direct"]
    den = r["denominator"]
    assert den.re * den.re + den.im * den.im == r["prob_sq"]


def test_singular():
    with pytest.raises(Singular):
        kasteleyn_det(DimerRegion(0, 2, 0, 2))
    with pytest.raises(ValueError):
        exact_kasteleyn_solve(temperleyan_region(3), (10, 10), (1, 0))


def test_wilson_deterministic():
    p = FiniteProblem(radius=4)
    ev = {"edge": [((0, 0), (1, 0))]}
    a = wilson_sample(p, ev, seed=5, n=300)
    b = wilson_sample(p, ev, seed=5, n=300)
    assert a.counts == b.counts and a.accepted == 300


def test_box_edge():
    # wired box: P(edge) is the effective resistance, near 1/2
    p = FiniteProblem(radius=10)
    g = float_green_solve(p, (0, 0), [(0, 0), (1, 0)])
    h = float_green_solve(p, (1, 0), [(1, 0)])
    exact = g[(0, 0)] + h[(1, 0)] - 2 * g[(1, 0)]
    r = box_edge_monte_carlo(seed=1, n=4000)
    assert abs(r.frequency("edge") - exact) < 3 * r.stderr("edge")
    assert abs(r.frequency("edge") - 0.5) < 3 * r.stderr("edge")


def test_conditioning_too_rare():
    with pytest.raises(ConditioningTooRare):
        wilson_sample(trunk_strip(), {"x": [((0, 1), (0, 2))]}, seed=1, n=10 ** 6,
                      conditioning=((-1, 0), (0, 0)), batch=64, max_trials=64)


def test_quadrature():
    assert abs(quadrature_green("square", (1, 1)) + float(INV_PI)) < 1e-10
    assert abs(quadrature_green("square", (0, 0))) < 1e-12
    assert abs(quadrature_green("square", (1, 0)) + 0.25) < 1e-10
    assert abs(quadrature_axis_difference(0) - 1 / 6) < 1e-10
    with pytest.raises(ValueError):
        quadrature_green("square", (1, 1), tol=1e-14)


def test_calibration_file():
    data = json.load(open(fixture_path("oracle_calibration.json")))
    assert data["radii"] == [16, 32, 48, 64]
    for kind in CONVERGENCE_KINDS:
        runs = data["runs"][kind]
        errs = [runs[str(r)]["error"] for r in data["radii"]]
        assert errs == sorted(errs, reverse=True)
        for r in data["radii"]:
            assert runs[str(r)]["error"] <= runs[str(r)]["tolerance"] <= 1.06 * runs[str(r)]["error"]


@pytest.mark.parametrize("kind", CONVERGENCE_KINDS)
def test_calibration_reproduces(kind):
    data = json.load(open(fixture_path("oracle_calibration.json")))
    assert math.isclose(convergence_error(kind, 16), data["runs"][kind]["16"]["error"], rel_tol=1e-6)
