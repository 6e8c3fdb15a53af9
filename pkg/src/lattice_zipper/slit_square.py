"""The half-plane function G_H: voltages in {y >= 0} (x + y even, diagonal
edges) with Dirichlet data on the negative boundary ray, reflecting boundary
on the positive ray, and unit current entering at the origin."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .errors import TruncationExceeded
from .exact import SQRT2, RingElem, Series
from .memo import evaluate

Point = tuple[int, int]

_ZERO = RingElem(0)
_ONE = RingElem(1)
_G11 = RingElem(2, -1)


def c_series(n: int) -> Series:
    """C(z) = sqrt(1 - 1/z^2) as a series in t = 1/z, known for t^0..t^(n-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return Series([1, 0, -1], 0, n).sqrt()


def v_series(n: int) -> Series:
    """V(z) = 1/sqrt(1 - z^2), known for z^0..z^(n-1)."""
    return Series([1, 0, -1], 0, n).sqrt_inv()


def _row0(x: int) -> RingElem:
    # z^x coefficient of V(z); binomial form avoids rebuilding the series
    if x < 0:
        return _ZERO
    k = x // 2
    return RingElem(Fraction(comb(2 * k, k), 4 ** k))


def _check(p: Point) -> None:
    x, y = p
    if y < 0 or (x + y) % 2:
        raise ValueError(f"{p} is not a half-plane vertex (need y >= 0, x + y even)")


def _deps(p: Point):
    x, y = p
    if y == 0:
        return ()
    if x == 0:
        return ((y - 2, 0), (0, y - 2))
    if x == -1:
        return ((0, y + 1),)
    if x >= 1:
        if y == 1:
            return () if x == 1 else ((x - 1, 0), (x - 2, 1))
        return ((x - 1, y - 1), (x - 2, y - 2), (x - 2, y), (x, y - 2))
    return ((x + 1, y + 1), (-x - 1, y + 1), (-x - 2, y))


def _combine(p: Point, vals) -> RingElem:
    x, y = p
    if y == 0:
        return _row0(x)
    if x == 0:
        # G(0, y) = sqrt2 * G(y-2, 0) - G(0, y-2)
        return SQRT2 * vals[0] - vals[1]
    if x == -1:
        return vals[0]
    if x >= 1:
        if y == 1:
            return _G11 if x == 1 else 2 * vals[0] - vals[1]
        return 4 * vals[0] - vals[1] - vals[2] - vals[3]
    return vals[0] + vals[1] - vals[2]


class GHTable:
    def __init__(self):
        self._memo: dict[Point, RingElem] = {}
        self._lock = threading.Lock()

    def __call__(self, p: Point) -> RingElem:
        p = (int(p[0]), int(p[1]))
        v = self._memo.get(p)
        if v is not None:
            return v
        _check(p)
        with self._lock:
            return evaluate(p, _deps, _combine, self._memo)


_GH = GHTable()


def gh(p: Point) -> RingElem:
    """G_H(x, y) by the deterministic fill."""
    return _GH(p)


# quadrant generating functions

class _Quadrant:
    """Box-truncated coefficients of G_N (x >= 0) or G_W (x < 0)."""

    def __init__(self, west: bool, nx: int, ny: int):
        self.west = west
        self.nx, self.ny = nx, ny
        n = max(nx, ny) + 3
        b = v_series(n)
        zero = RingElem(0)
        num = {}

        def add(i, j, v):
            if i < nx and j < ny and not v.is_zero():
                num[(i, j)] = num.get((i, j), zero) + v

        if not west:
            # zw * numerator: sqrt2 (zw - w^2) B(w) + (2zw - z^2 - 1) V(z)
            for j in range(ny):
                bj = b[j]
                if bj.is_zero():
                    continue
                add(1, j + 1, SQRT2 * bj)
                add(0, j + 2, -SQRT2 * bj)
            for i in range(nx):
                vi = b[i]
                if vi.is_zero():
                    continue
                add(i + 1, 1, 2 * vi)
                add(i + 2, 0, -vi)
                add(i, 0, -vi)
        else:
            # in t = 1/z, tw * numerator: sqrt2 (t^2 w^2 - tw) B(w) + tw sqrt(1 - t^2)
            c = c_series(n)
            for j in range(ny):
                bj = b[j]
                if bj.is_zero():
                    continue
                add(2, j + 2, SQRT2 * bj)
                add(1, j + 1, -SQRT2 * bj)
            for i in range(nx):
                ci = c[i]
                if not ci.is_zero():
                    add(i + 1, 1, ci)
        # denominator -(1 - 4st + s^2 + t^2 + s^2 t^2) is solved coefficientwise
        h = {}

        def get(i, j):
            if i < 0 or j < 0:
                return zero
            return h.get((i, j), zero)

        for i in range(nx):
            for j in range(ny):
                v = 4 * get(i - 1, j - 1) - get(i - 2, j) - get(i, j - 2) - get(i - 2, j - 2) \
                    - num.get((i, j), zero)
                if not v.is_zero():
                    h[(i, j)] = v
        self.h = h

    def coeff(self, i: int, j: int) -> RingElem:
        if i >= self.nx or j >= self.ny:
            raise TruncationExceeded(f"coefficient ({i},{j}) beyond expansion box {self.nx}x{self.ny}")
        return self.h.get((i, j), _ZERO)


_QUAD_CACHE: dict[tuple[bool, int, int], _Quadrant] = {}


def quadrant_expansion(west: bool, order: int) -> _Quadrant:
    key = (west, order, order)
    q = _QUAD_CACHE.get(key)
    if q is None:
        q = _Quadrant(west, order, order)
        _QUAD_CACHE[key] = q
    return q


def quadrant_gf_value(p: Point, order: int | None = None) -> RingElem:
    """Coefficient of z^x w^y in G_N (x >= 0) or G_W (x < 0)."""
    _check(p)
    x, y = p
    if order is None:
        order = max(abs(x), y) + 4
    west = x < 0
    return quadrant_expansion(west, order).coeff(abs(x), y)


def vertical_series(n: int) -> Series:
    """sum_{k>=0} G_H(0, 2k + 2) w^(2k) = (sqrt2 / sqrt(1 - w^2) - 1) / (1 + w^2)."""
    b = v_series(n)
    return (b.scale(SQRT2) - 1) / Series([1, 0, 1], 0, n)


def is_dyadic(v: RingElem) -> bool:
    return all(q.denominator & (q.denominator - 1) == 0 for q in v.components())
