"""Triangular lattice: axis Green differences, the slit plane and the Green's
function on the double cover branched around a face.

Vertex (x, y) sits at x + y*e^(2 pi i/3); its neighbours are +-(1,0),
+-(0,1), +-(1,1).  Values live in Q(sqrt3), with 1/pi parts only for the
full-plane differences."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import FillFailure
from .exact import SQRT3, RingElem, Series, poly

Point = tuple[int, int]

ALPHA = 2 - SQRT3
ALPHA2 = ALPHA * ALPHA
NEIGHBORS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))
MAX_RUN = 32

_ZERO = RingElem(0, d=3)
# coefficients of the split-edge zipper move
C_SELF = Fraction(1, 2) + SQRT3 / 3
C_REFL = SQRT3 / 6


def tri_delta_plus(n: int) -> Series:
    """sum_x (G((x,0)) - G((x+1,0))) u^(2x+1), known below u^n.

    delta_+(u)/u = (pi/6 + g(u)) / (pi s(u)) with s = sqrt(1 - 14u^2 + u^4)
    and g = -int f'/(1 + f^2), f = sqrt3 (1 + u^2)/s; g is sqrt3 times a
    rational series, so everything below stays exact."""
    if n < 1:
        raise ValueError("n must be positive")
    m = n + 2
    s = poly([1, 0, -14, 0, 1], m).sqrt()
    inv_s = s.reciprocal()
    f = poly([1, 0, 1], m) * inv_s            # f / sqrt3
    h = f.derivative() / ((f * f).scale(3) + Series.const(1, m))
    g = h.integrate()                          # g = -sqrt3 * this
    rational = inv_s.scale(Fraction(1, 6))
    pi_part = (g * inv_s).scale(RingElem(0, 0, 0, -1, 3))
    body = rational.scale(RingElem(1, d=3)) + pi_part
    return body.shift(1).truncate(n)


def tri_slit_voltage(n: int) -> Series:
    """V(u) = alpha / sqrt((1 - u^2)(1 - alpha^2 u^2)); u^(2k) -> G_D((k,0))."""
    base = poly([1, 0, -1], n + 4, d=3) * poly([1, 0, -ALPHA2], n + 4, d=3)
    return base.sqrt_inv().scale(ALPHA).truncate(n)


def positive_ray_series(n: int) -> Series:
    """sum_{k>=0} G~((k,0)) u^k = 1/sqrt(12 (1-u)(1-alpha^2 u))."""
    base = poly([1, -1], n + 2, d=3) * poly([1, -ALPHA2], n + 2, d=3)
    return base.sqrt_inv().scale(SQRT3 / 6).truncate(n)


def negative_ray_series(n: int) -> Series:
    """sum_{k>=1} G~((-k,0)) t^k, t = 1/u, = (1/sqrt3 - 1/2) t / sqrt((1-t)(1-alpha^2 t))."""
    base = poly([1, -1], n + 2, d=3) * poly([1, -ALPHA2], n + 2, d=3)
    return base.sqrt_inv().scale(SQRT3 / 3 - Fraction(1, 2)).shift(1).truncate(n)


# slit-plane G_D by marching

def conj(p: Point) -> Point:
    """Complex conjugation of positions: (x, y) -> (x - y, -y)."""
    return (p[0] - p[1], -p[1])


def reflect_half(p: Point) -> Point:
    """v -> -conj(v) - 1, reflection in the line Re = -1/2."""
    return (p[1] - p[0] - 1, p[1])


class _Affine:
    """value = const + sum coef[k] * unknown_k, over Q(sqrt3)."""

    __slots__ = ("c", "t")

    def __init__(self, c=_ZERO, t=None):
        self.c = c
        self.t = t or {}

    @classmethod
    def unknown(cls, key):
        return cls(_ZERO, {key: RingElem(1, d=3)})

    def __add__(self, o):
        if not isinstance(o, _Affine):
            return _Affine(self.c + o, dict(self.t))
        t = dict(self.t)
        for k, v in o.t.items():
            t[k] = t.get(k, _ZERO) + v
        return _Affine(self.c + o.c, {k: v for k, v in t.items() if not v.is_zero()})

    def __neg__(self):
        return _Affine(-self.c, {k: -v for k, v in self.t.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, s):
        return _Affine(self.c * s, {k: v * s for k, v in self.t.items()})

    __rmul__ = __mul__

    def subst(self, key, val):
        if key not in self.t:
            return self
        t = dict(self.t)
        coef = t.pop(key)
        return _Affine(self.c, t) + val * coef

    def value(self) -> RingElem:
        if self.t:
            raise FillFailure(f"unresolved unknowns {sorted(self.t)}")
        return self.c


class TriSlitTable:
    """G_D on rows 0..rows, columns -cols..cols (upper half plane)."""

    def __init__(self, rows: int, cols: int):
        self.rows, self.cols = rows, cols
        self.vals = self._fill(rows, cols)

    def _fill(self, rows, cols):
        # the right part needs the row below over one more column per row,
        # the left part loses one row per column marched
        top = rows + cols + 2
        right = 2 * top + cols + 2
        v = tri_slit_voltage(2 * right + 2)
        g = {}
        for k in range(-cols - 2, right + 1):
            g[(k, 0)] = _Affine(v[2 * k]) if k >= 0 else _Affine()
        pos = positive_ray_series(top + 2)
        neg = negative_ray_series(top + 2)
        for y in range(1, top + 1):
            width = right - y
            p = _Affine.unknown(("p", y))
            row = {0: p}
            for k in range(0, width):
                if y == 1:
                    s = (g[(k, 0)] * 6 - g[(k - 1, 0)] - g[(k + 1, 0)]) * Fraction(1, 2)
                    if k == 0:
                        s = s - Fraction(1, 2)
                else:
                    s = (g[(k, y - 1)] * 6 - g[(k - 1, y - 1)] - g[(k + 1, y - 1)]
                         - g[(k, y - 2)] - g[(k - 1, y - 2)])
                row[k + 1] = s - row[k]
            q = _Affine.unknown(("q", y))
            # 240 degree ray: G~(-y,-y) = C_SELF G_D(0,y) - C_REFL G_D(y-1,y)
            e1 = row[0] * C_SELF - row[y - 1] * C_REFL - neg[y]
            pv = self._solve(e1, ("p", y))
            row = {k: a.subst(("p", y), pv) for k, a in row.items()}
            # 60 degree ray: G~(y,y) = C_SELF G_D(y,y) + C_REFL G_D(-1,y)
            e2 = row[y] * C_SELF + q * C_REFL - pos[y]
            qv = self._solve(e2, ("q", y))
            for k, a in row.items():
                g[(k, y)] = _Affine(a.value())
            g[(-1, y)] = _Affine(qv.value())
            if y == 1:
                g[(-1, 0)] = _Affine()
        # columns -2, -3, ... from the equations at column c + 1
        for c in range(-2, -cols - 1, -1):
            height = top - (-1 - c)
            g[(c, 0)] = _Affine()
            for y in range(1, height + 1):
                s = (g[(c + 1, y)] * 6 - g[(c + 1, y - 1)] - g[(c + 1, y + 1)]
                     - g[(c + 2, y)] - g[(c + 2, y + 1)])
                g[(c, y)] = s - g[(c, y - 1)]
        return {k: a.value() for k, a in g.items()}

    @staticmethod
    def _solve(expr: _Affine, key) -> _Affine:
        coef = expr.t.get(key)
        if coef is None or coef.is_zero():
            raise FillFailure(f"ray equation does not determine {key}")
        rest = _Affine(expr.c, {k: v for k, v in expr.t.items() if k != key})
        return rest * (-coef.inverse())

    def __call__(self, p: Point) -> RingElem:
        if p[1] < 0:
            p = conj(p)
        try:
            return self.vals[p]
        except KeyError:
            raise FillFailure(f"{p} outside the filled window") from None


_TABLE: TriSlitTable | None = None
_LOCK = threading.Lock()


def _table(r: int) -> TriSlitTable:
    global _TABLE
    with _LOCK:
        if _TABLE is None or _TABLE.rows < r or _TABLE.cols < r:
            n = max(r, 6)
            _TABLE = TriSlitTable(n, n)
        return _TABLE


def _radius(p: Point) -> int:
    x, y = p
    return max(abs(x), abs(y), abs(x - y))


def tri_slit_green(v: Point) -> RingElem:
    """G_D(0, v) with Dirichlet data on {(k,0): k < 0}."""
    v = (int(v[0]), int(v[1]))
    return _table(_radius(v) + 2)(v)


def _face_edge_zipper(v: Point) -> RingElem:
    """G~(0,v) with the zipper leaving the face below (-1,0)(0,0) to the left,
    just below the axis."""
    s = 1 if v[1] >= 0 else -1
    return C_SELF * tri_slit_green(v) + C_REFL * s * tri_slit_green(reflect_half(v))


def position(p: Point) -> tuple[float, float]:
    return (p[0] - p[1] / 2, p[1] * math.sqrt(3) / 2)


def _swept(p: Point) -> bool:
    """Strictly below the negative axis and on or above the 210 degree line."""
    x, y = p
    if y >= 0:
        return False
    # positions with Y < 0 and Y >= X/sqrt3, i.e. 2y >= 2x - y in lattice terms
    return 3 * y >= 2 * x - y and (x, y) != (0, 0) and 2 * x - y < 0


def tri_face_branched(v: Point) -> RingElem:
    """G~(0,v) for the zipper along the 210 degree line from the face below
    (-1,0)(0,0), the normalisation used in the face figure."""
    v = (int(v[0]), int(v[1]))
    val = _face_edge_zipper(v)
    return -val if _swept(v) else val


def zipper_crossed(p: Point, q: Point) -> bool:
    """Does the edge pq cross the 210 degree zipper (run just below the line)?"""
    (x1, y1), (x2, y2) = position(p), position(q)
    eps = 1e-3
    # signed distance to the line Y = X/sqrt3 - eps, and crossing abscissa
    f1 = y1 - x1 / math.sqrt(3) + eps
    f2 = y2 - x2 / math.sqrt(3) + eps
    if f1 * f2 >= 0:
        return False
    t = f1 / (f1 - f2)
    xc = x1 + t * (x2 - x1)
    return xc < -0.5


def face_harmonicity_residual(v: Point) -> RingElem:
    """6 G~(v) - sum of signed neighbours - [v = 0]; exactly zero."""
    total = 6 * tri_face_branched(v)
    for dx, dy in NEIGHBORS:
        n = (v[0] + dx, v[1] + dy)
        s = -1 if zipper_crossed(v, n) else 1
        total = total - s * tri_face_branched(n)
    return total - (1 if v == (0, 0) else 0)


def slit_harmonicity_residual(v: Point) -> RingElem:
    total = 6 * tri_slit_green(v)
    for dx, dy in NEIGHBORS:
        total = total - tri_slit_green((v[0] + dx, v[1] + dy))
    return total - (1 if v == (0, 0) else 0)


def tri_runs_constant(k: int) -> RingElem:
    """(2 - sqrt3)^k, the chance the triangular trunk goes straight k times."""
    if k < 0 or k > MAX_RUN:
        raise ValueError(f"k must be in [0, {MAX_RUN}]")
    base = tri_slit_voltage(1)[0]
    if base != ALPHA:
        raise AssertionError("slit voltage at the origin differs from 2 - sqrt3")
    return base ** k
