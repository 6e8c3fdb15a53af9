import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_zipper.errors import NotAnEdge
from lattice_zipper.exact import I, SQRT2, ComplexElem, parse
from lattice_zipper.kasteleyn import (
    MONOMER, TRUNK, black_neighbors, event_probability, flatness_defect, identity_entry, is_white,
    k_inverse_trunk, k_weight,
)

LEFT = [((1, 1), (1, 0)), ((2, 0), (3, 0)), ((1, -1), (1, -2))]
STRAIGHT = [((2, 0), (1, 0)), ((1, 1), (1, 2)), ((1, -1), (1, -2))]


def c(text):
    return ComplexElem(parse(text))


def ic(text):
    return I * ComplexElem(parse(text))


def test_weights():
    assert k_weight((1, 0), (2, 0)) == ComplexElem(1)
    assert k_weight((1, 0), (1, 1)) == I
    # the zipper flips the west edge next to the diagonal to +1
    assert k_weight((0, -1), (-1, -1)) == ComplexElem(1)
    with pytest.raises(NotAnEdge):
        k_weight((1, 0), (3, 0))


def test_worked_entries():
    assert k_inverse_trunk((1, 1), (1, 0)) == ic("-1 + 1/2*sqrt(2)")
    assert k_inverse_trunk((2, 0), (1, -2)) == c("-2 + 3/2*sqrt(2)")


def test_bordermatrix():
    table = {
        (1, 1): [ic("1/2*sqrt(2) - 1"), ic("sqrt(2) - 3/2"), ic("sqrt(2) - 3/2")],
        (2, 0): [c("sqrt(2) - 1"), c("2*sqrt(2) - 3"), c("3/2*sqrt(2) - 2")],
        (1, -1): [ic("1 - 1/2*sqrt(2)"), ic("3/2 - sqrt(2)"), ic("1/2 - 1/2*sqrt(2)")],
    }
    for b, row in table.items():
        for w, want in zip([(1, 0), (3, 0), (1, -2)], row):
            assert k_inverse_trunk(b, w) == want, (b, w)


def test_events():
    assert event_probability(TRUNK, LEFT) == parse("5/2 - 7/4*sqrt(2)")
    assert event_probability(TRUNK, STRAIGHT) == 5 * SQRT2 / 2 - parse("7/2")
    assert event_probability(TRUNK, []) == 1


WHITES = [(x, y) for x in range(-4, 5) for y in range(-4, 5) if is_white((x, y))]


def test_local_identity():
    # all white pairs of a window within distance 6
    for w in WHITES:
        for w2 in WHITES:
            if max(abs(w[0] - w2[0]), abs(w[1] - w2[1])) <= 6:
                assert identity_entry(TRUNK, w, w2) == ComplexElem(1 if w == w2 else 0), (w, w2)


@given(st.integers(-8, 8), st.integers(-8, 8))
def test_flatness(x, y):
    assert flatness_defect(x, y) == ComplexElem(0)


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_weights_rotate(x, y):
    w = (x, y) if is_white((x, y)) else (x + 1, y)
    ws = [k_weight(w, b) for b in black_neighbors(w) if b != (0, 0)]
    assert len(ws) >= 3
    assert all(z * z.conjugate() == ComplexElem(1) for z in ws)


@given(st.sampled_from(WHITES), st.sampled_from(range(4)))
def test_single_dimer_range(w, k):
    if w == (1, 0) or w == (-1, 0):
        return
    b = black_neighbors(w)[k]
    if b == (0, 0):
        return
    p = event_probability(TRUNK, [(b, w)])
    assert 0 <= float(p) <= 1


def test_monomer_partition():
    w = (1, 2)
    total = sum((event_probability(MONOMER, [(b, w)]) for b in black_neighbors(w)), parse("0"))
    assert total == 1
