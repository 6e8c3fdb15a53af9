from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_zipper.errors import DivideByZero, DivisorNotSupported, ParseError, PiOverflow, RadicandMismatch
from lattice_zipper.exact import (
    PiPoly, RingElem, Series, SQRT2, from_json, parse, poly, ring_to_float, series_sqrt_inv,
    to_json, to_text,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def ring(draw, d=None, pi=True):
    d = d or draw(st.sampled_from((2, 3)))
    a, b = draw(small), draw(small)
    c, e = (draw(small), draw(small)) if pi else (0, 0)
    return RingElem(a, b, c, e, d)


@st.composite
def pair(draw, pi_free_second=False):
    d = draw(st.sampled_from((2, 3)))
    return draw(ring(d=d)), draw(ring(d=d, pi=not pi_free_second))


def test_basic_values():
    assert SQRT2 * SQRT2 == 2
    assert (SQRT2 - 1) * (SQRT2 + 1) == 1
    assert RingElem(1, d=3) == 1
    assert to_text(SQRT2 - 1) == "sqrt(2) - 1"
    assert to_text(SQRT2 - 1, compact=True) == "sqrt(2)-1"


def test_division_errors():
    with pytest.raises(DivideByZero):
        RingElem(1) / RingElem(0)
    with pytest.raises(DivisorNotSupported):
        RingElem(1) / RingElem.inv_pi()
    with pytest.raises(PiOverflow):
        RingElem.inv_pi() * RingElem.inv_pi()
    with pytest.raises(RadicandMismatch):
        RingElem(0, 1, d=2) + RingElem(0, 1, d=3)


@given(ring())
def test_self_difference_is_zero(x):
    assert (x - x).is_zero()


@given(pair(pi_free_second=True))
def test_product_float_agrees(xy):
    x, y = xy
    got = ring_to_float(x * y, 10)
    with mpmath.workdps(40):
        want = x.to_mpf(40) * y.to_mpf(40)
        assert abs(mpmath.mpf(got) - want) <= mpmath.mpf(10) ** -10


@given(pair(pi_free_second=True), ring(pi=False))
def test_ring_laws(xy, z):
    x, y = xy
    if z.d != x.d and not z.is_rational:
        z = RingElem(z.a, z.b, d=x.d)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x


@given(ring(pi=False))
def test_inverse(x):
    if x.is_zero():
        return
    assert x * x.inverse() == 1


@given(pair())
def test_pi_grading(xy):
    x, y = xy
    if x.pi_degree + y.pi_degree >= 2:
        with pytest.raises(PiOverflow):
            x * y
    else:
        assert (x * y).pi_degree <= x.pi_degree + y.pi_degree


@given(pair())
def test_pipoly_grading(xy):
    x, y = xy
    p = PiPoly.coerce(x) * PiPoly.coerce(y)
    if not x.is_zero() and not y.is_zero():
        assert p.degree == x.pi_degree + y.pi_degree


@given(ring())
def test_text_round_trip(x):
    assert parse(to_text(x)) == x
    assert parse(to_text(x, compact=True)) == x
    assert from_json(to_json(x)) == x


def test_parse_errors():
    for bad in ("", "sqrt(5)", "1/2sqrt(2)", "abc", "sqrt(2)+sqrt(3)"):
        with pytest.raises(ParseError):
            parse(bad)


def test_ring_to_float_rounding():
    assert ring_to_float(SQRT2 - 1, 6) == "0.414214"
    assert ring_to_float(RingElem.inv_pi(), 8) == "0.31830989"
    assert ring_to_float(RingElem(0), 3) == "0.000"


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6))
def test_series_sqrt_inv(tail):
    n = 12
    b = poly([1] + tail, n)
    s = series_sqrt_inv(b, n)
    prod = (s * s * b).truncate(n)
    for k in range(n):
        assert prod[k] == (1 if k == 0 else 0)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6))
def test_series_sqrt(tail):
    n = 10
    b = poly([1] + tail, n)
    r = b.sqrt()
    sq = (r * r).truncate(n)
    for k in range(n):
        assert sq[k] == b[k]


def test_series_reciprocal_and_compose():
    n = 8
    g = poly([1, -1], n)
    inv = g.reciprocal()
    assert all(inv[k] == 1 for k in range(n))
    assert Series.const(Fraction(1, 2), n)[0] == Fraction(1, 2)
