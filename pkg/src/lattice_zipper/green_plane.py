"""Potential kernel of Z^2 and transfer-impedance statistics of the plane UST."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import NotAnEdge
from .exact import PiPoly, RingElem, det_expand

Point = tuple[int, int]


class PotentialTable:
    """A(x, y) = -G((x, y)) normalised by A(0,0) = 0, A(1,0) = 1/4.

    Values are filled column by column in the octant 0 <= y <= x: the
    diagonal is seeded in closed form and harmonicity at (x, y) gives
    A(x+1, y)."""

    def __init__(self):
        self._memo: dict[Point, RingElem] = {(0, 0): RingElem(0)}
        self._lock = threading.Lock()
        self._filled = 0
        self._diag_sum = Fraction(0)

    @staticmethod
    def _octant(p: Point) -> Point:
        x, y = abs(p[0]), abs(p[1])
        return (x, y) if y <= x else (y, x)

    def _diag(self, n: int) -> RingElem:
        self._diag_sum += Fraction(1, 2 * n - 1)
        return RingElem(0, 0, self._diag_sum)

    def _extend(self, n: int) -> None:
        m = self._memo
        while self._filled < n:
            x = self._filled
            if x == 0:
                m[(1, 0)] = RingElem(Fraction(1, 4))
                m[(1, 1)] = self._diag(1)
                self._filled = 1
                continue
            for y in range(x):
                m[(x + 1, y)] = (4 * m[(x, y)] - m[(x - 1, y) if y <= x - 1 else (y, x - 1)]
                                 - m[(x, y + 1) if y + 1 <= x else (y + 1, x)]
                                 - m[(x, abs(y - 1))])
            m[(x + 1, x)] = 2 * m[(x, x)] - m[(x, x - 1)]
            m[(x + 1, x + 1)] = self._diag(x + 1)
            self._filled = x + 1

    def __call__(self, p: Point) -> RingElem:
        key = self._octant(p)
        val = self._memo.get(key)
        if val is None:
            with self._lock:
                self._extend(key[0])
            val = self._memo[key]
        return val


_TABLE = PotentialTable()


def potential(p: Point) -> RingElem:
    """Potential kernel A(p) in Q + Q/pi."""
    return _TABLE(tuple(p))


def green(u: Point, v: Point) -> RingElem:
    """G(u, v) = -A(v - u)."""
    return -potential((v[0] - u[0], v[1] - u[1]))


def potential_float(p: Point) -> float:
    """A(p) numerically, via the asymptotic expansion far from the origin."""
    x, y = abs(p[0]), abs(p[1])
    r2 = x * x + y * y
    if max(x, y) <= 40:
        return float(potential(p))
    # a = 4A has a(z) = (2/pi)(log|z| + gamma + log(8)/2) - cos(4 theta)/(6 pi |z|^2) + O(|z|^-4)
    cos4 = (x ** 4 - 6 * x * x * y * y + y ** 4) / (r2 * r2)
    a = (2 / math.pi) * (0.5 * math.log(r2) + 0.5772156649015329 + 1.5 * math.log(2)) \
        - cos4 / (6 * math.pi * r2)
    return a / 4


def _check_edge(e) -> tuple[Point, Point]:
    (a, b), (c, d) = e
    if abs(a - c) + abs(b - d) != 1:
        raise NotAnEdge(f"{e} is not a nearest-neighbour pair")
    return (a, b), (c, d)


def transfer_impedance(e1, e2) -> RingElem:
    """T_{vw,xy} = G(v,x) - G(v,y) - G(w,x) + G(w,y)."""
    v, w = _check_edge(e1)
    x, y = _check_edge(e2)
    return green(v, x) - green(v, y) - green(w, x) + green(w, y)


def transfer_impedance_float(e1, e2) -> float:
    v, w = _check_edge(e1)
    x, y = _check_edge(e2)

    def g(a, b):
        return -potential_float((b[0] - a[0], b[1] - a[1]))

    return g(v, x) - g(v, y) - g(w, x) + g(w, y)


def ust_cylinder_probability(edges):
    """Probability that all given edges are in the plane UST: det[T].

    Returns a RingElem when the answer has no 1/pi^2 terms, otherwise a PiPoly."""
    edges = [tuple(map(tuple, e)) for e in edges]
    keys = [frozenset(e) for e in edges]
    if len(set(keys)) != len(keys):
        raise ValueError("edges must be distinct")
    if not edges:
        return RingElem(1)
    m = [[PiPoly.coerce(transfer_impedance(a, b)) for b in edges] for a in edges]
    return det_expand(m).simplify()


def harmonicity_residual(p: Point) -> RingElem:
    x, y = p
    return 4 * potential(p) - sum(
        (potential((x + dx, y + dy)) for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))), RingElem(0))
