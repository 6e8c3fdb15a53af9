"""Zipper Green's function G_Z on Z^2 and the antisymmetric Green's functions
of the double covers branched at a vertex (Sigma) or at a face (Xi).

Faces are addressed in doubled coordinates: the face centred at (x/2, y/2)
is ``(x, y)`` with x, y odd.  The canonical zipper for face c is the
translate of the dual path starting at (-1/2, -1/2) and running just below
the negative diagonal, crossing the edges {(k,k),(k+1,k)} and {(k,k),(k,k-1)}
for k <= -1."""

from __future__ import annotations

import math
import os
import threading
from fractions import Fraction

from .errors import FillFailure, OnSlit
from .exact import RingElem
from .green_plane import green
from .slit_square import gh

Point = tuple[int, int]
Face = tuple[int, int]

FACE0: Face = (-1, -1)
PRINCIPAL, OTHER = 1, -1


def max_recursion() -> int:
    return int(os.environ.get("LATTICE_ZIPPER_MAX_RECURSION", "100000"))


# zipper edge sets as predicates

def _in_s0(v1: Point, v2: Point) -> bool:
    a, b = (v1, v2) if v1 <= v2 else (v2, v1)
    (x1, y1), (x2, y2) = a, b
    if y1 == y2 and x2 == x1 + 1:
        return x1 == y1 and x1 <= -1
    if x1 == x2 and y2 == y1 + 1:
        return x2 == y2 and x2 <= -1
    return False


def _shift(face: Face) -> Point:
    return ((face[0] - FACE0[0]) // 2, (face[1] - FACE0[1]) // 2)


def in_zipper(face: Face, v1: Point, v2: Point) -> bool:
    """Is edge v1v2 crossed by the canonical zipper of ``face``?"""
    tx, ty = _shift(face)
    return _in_s0((v1[0] - tx, v1[1] - ty), (v2[0] - tx, v2[1] - ty))


def _rot(p: Point, k: int) -> Point:
    x, y = p
    for _ in range(k % 4):
        x, y = -y, x
    return (x, y)


def _crossings(pred, w: Point) -> int:
    """Parity of edges satisfying ``pred`` along the path 0 -> (wx,0) -> w."""
    n = 0
    x, y = 0, 0
    step = 1 if w[0] > 0 else -1
    while x != w[0]:
        if pred((x, y), (x + step, y)):
            n += 1
        x += step
    step = 1 if w[1] > 0 else -1
    while y != w[1]:
        if pred((x, y), (x, y + step)):
            n += 1
        y += step
    return n & 1


def _gauge(pred_a, pred_b, w: Point) -> int:
    """eps(0) * eps(w) for the vertex gauge taking zipper a to zipper b."""
    return -1 if _crossings(lambda p, q: pred_a(p, q) != pred_b(p, q), w) else 1


# the unit faces around the origin are rotations of FACE0

_UNIT = {_rot(FACE0, k): k for k in range(4)}


def _unit_face_value(face: Face, w: Point) -> RingElem:
    k = _UNIT[face]
    base = gz_origin(_rot(w, -k))
    if k == 0:
        return base

    def rotated(p, q):
        return _in_s0(_rot(p, -k), _rot(q, -k))

    def canonical(p, q):
        return in_zipper(face, p, q)

    return base if _gauge(rotated, canonical, w) > 0 else -base


def gz_origin(v: Point) -> RingElem:
    """G_Z((0,0), v) = G_H(a+b, |b-a|) / 2 for v = (a, b)."""
    a, b = v
    return gh((a + b, abs(b - a))) / 2


def _move_edge(face: Face, target: Face) -> tuple[Point, Point]:
    dx, dy = target[0] - face[0], target[1] - face[1]
    if abs(dx) + abs(dy) != 2 or dx * dy:
        raise ValueError("faces are not adjacent")
    if dx:
        x = (face[0] + dx // 2) // 2
        return (x, (face[1] - 1) // 2), (x, (face[1] + 1) // 2)
    ye = face[1] + dy // 2
    y = ye // 2
    return ((face[0] - 1) // 2, y), ((face[0] + 1) // 2, y)


def _path_prev(face: Face) -> Face:
    """Predecessor of ``face`` on the canonical route from FACE0 (x first, then y)."""
    if face[1] != FACE0[1]:
        return (face[0], face[1] - 2 if face[1] > FACE0[1] else face[1] + 2)
    return (face[0] - 2 if face[0] > FACE0[0] else face[0] + 2, face[1])


class ZipperTable:
    """H(c, w) = G_Z for the canonical zipper of face c, source 0, sink w."""

    def __init__(self):
        self._memo: dict = {}
        self._coef: dict[Face, tuple] = {}
        self._lock = threading.Lock()

    def _h_direct(self, face: Face, w: Point) -> RingElem | None:
        if face in _UNIT:
            return _unit_face_value(face, w)
        return None

    def _coefficients(self, face: Face):
        """(prev, p, q, a, b) for the move prev -> face."""
        c = self._coef.get(face)
        if c is not None:
            return c
        prev = _path_prev(face)
        p, q = _move_edge(prev, face)
        sigma = -1 if in_zipper(prev, p, q) else 1
        fp = (prev[0] - 2 * p[0], prev[1] - 2 * p[1])
        fq = (prev[0] - 2 * q[0], prev[1] - 2 * q[1])
        gpp = _unit_face_value(fp, (0, 0))
        gqq = _unit_face_value(fq, (0, 0))
        gpq = _unit_face_value(fp, (q[0] - p[0], q[1] - p[1]))
        gup = self.h(prev, p)
        guq = self.h(prev, q)
        s2 = 2 * sigma
        m11 = 1 + s2 * gpq
        m12 = s2 * gqq
        m21 = s2 * gpp
        m22 = 1 + s2 * gpq
        r1 = -s2 * guq
        r2 = -s2 * gup
        det = m11 * m22 - m12 * m21
        if det.is_zero():
            raise FillFailure(f"degenerate zipper move into face {face}")
        a = (r1 * m22 - m12 * r2) / det
        b = (m11 * r2 - m21 * r1) / det
        c = (prev, p, q, a, b, fp, fq)
        self._coef[face] = c
        return c

    def h(self, face: Face, w: Point) -> RingElem:
        direct = self._h_direct(face, w)
        if direct is not None:
            return direct
        key = (face, w)
        val = self._memo.get(key)
        if val is not None:
            return val
        # walk back to the nearest computed face along the canonical route
        chain = []
        f = face
        while f not in _UNIT and (f, w) not in self._memo:
            chain.append(f)
            if len(chain) > max_recursion():
                from .errors import RecursionBudgetExceeded
                raise RecursionBudgetExceeded(f"zipper route to {face} exceeds budget")
            f = _path_prev(f)
        for f in reversed(chain):
            prev, p, q, a, b, fp, fq = self._coefficients(f)
            hp = self.h(prev, w)
            val = hp + a * _unit_face_value(fp, (w[0] - p[0], w[1] - p[1])) \
                + b * _unit_face_value(fq, (w[0] - q[0], w[1] - q[1]))
            zp = _move_pred(prev, p, q)
            if _gauge(zp, lambda s, t, f=f: in_zipper(f, s, t), w) < 0:
                val = -val
            self._memo[(f, w)] = val
        return self._memo[key]


def _move_pred(prev: Face, p: Point, q: Point):
    pq = {p, q}

    def pred(s, t):
        flip = {s, t} == pq
        return in_zipper(prev, s, t) != flip

    return pred


_TABLE = ZipperTable()


def gz(u: Point, v: Point) -> RingElem:
    """G_Z(u, v) for the canonical zipper starting at face (-1/2, -1/2)."""
    u = (int(u[0]), int(u[1]))
    v = (int(v[0]), int(v[1]))
    if u == (0, 0):
        return gz_origin(v)
    if v == (0, 0):
        return gz_origin(u)
    # G_Z(u, v) = H(FACE0 - u, v - u) by translation
    face = (FACE0[0] - 2 * u[0], FACE0[1] - 2 * u[1])
    with _TABLE._lock:
        return _TABLE.h(face, (v[0] - u[0], v[1] - u[1]))


# branches

def principal_arg(v) -> float:
    """Argument of v in (-3pi/4, 5pi/4]; the cut runs just below the negative diagonal."""
    x, y = float(v[0]), float(v[1])
    t = math.atan2(y, x)
    if t <= -3 * math.pi / 4 + 1e-12:
        t += 2 * math.pi
    return t


def figure_to_cover(z: complex, half: bool = False) -> tuple[tuple, int]:
    """Map a point of the square-root embedding to (lattice point, branch)."""
    w = z * z
    if half:
        v = (Fraction(round(2 * w.real), 2), Fraction(round(2 * w.imag), 2))
    else:
        v = (round(w.real), round(w.imag))
    if abs(w) < 1e-9:
        return v, PRINCIPAL
    t = principal_arg(v)
    zp = complex(math.cos(t / 2), math.sin(t / 2))
    return v, PRINCIPAL if abs(z / abs(z) - zp) < 1e-3 else OTHER


def g_sigma_a(v: Point, w: Point, branches: tuple[int, int] = (PRINCIPAL, PRINCIPAL)) -> RingElem:
    """Antisymmetric Green's function on the cover branched at the origin."""
    v = (int(v[0]), int(v[1]))
    w = (int(w[0]), int(w[1]))
    if v == (0, 0) or w == (0, 0):
        return RingElem(0)
    g00 = gz_origin((0, 0))
    val = gz(v, w) - gz(v, (0, 0)) * gz((0, 0), w) / g00
    return val if branches[0] * branches[1] > 0 else -val


def _half(p) -> Point:
    x, y = Fraction(p[0]), Fraction(p[1])
    if x.denominator != 2 or y.denominator != 2:
        raise ValueError(f"{p} is not a point of (Z + 1/2)^2")
    return (int(x - Fraction(1, 2)), int(y - Fraction(1, 2)))


def g_xi_a(v, w, branches: tuple[int, int] = (PRINCIPAL, PRINCIPAL)) -> RingElem:
    """Antisymmetric Green's function on the cover branched at the face
    centred at the origin; v, w have half-integer coordinates."""
    val = gz(_half(v), _half(w))
    return val if branches[0] * branches[1] > 0 else -val


def on_d0(v: Point) -> bool:
    return v[0] == v[1] and v[0] <= 0


def g_slit(v: Point, w: Point):
    """Green's function of Z^2 with Dirichlet data on D0 = {(k,k): k <= 0}."""
    v = (int(v[0]), int(v[1]))
    w = (int(w[0]), int(w[1]))
    if on_d0(v) or on_d0(w):
        raise OnSlit(f"{v if on_d0(v) else w} lies on the slit")
    vt = (v[1], v[0])
    half = Fraction(1, 2)
    return (g_sigma_a(v, w) + g_sigma_a(vt, w)) * half + (green(v, w) - green(vt, w)) * half


def g_d(v: Point, w: Point):
    """Dirichlet Green's function on Z^2 minus {(k,k): k <= -1}."""
    return g_slit((v[0] + 1, v[1] + 1), (w[0] + 1, w[1] + 1))


def zipper_laplacian_residual(u: Point, v: Point) -> RingElem:
    """(Delta_Z G_Z(u, .))(v) - 1_{u=v}; exactly zero."""
    total = 4 * gz(u, v)
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        n = (v[0] + dx, v[1] + dy)
        s = -1 if in_zipper(FACE0, v, n) else 1
        total = total - s * gz(u, n)
    return total - (1 if u == v else 0)
