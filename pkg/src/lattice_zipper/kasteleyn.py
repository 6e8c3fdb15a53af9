"""Kasteleyn weights on the doubled lattice and inverse-Kasteleyn entries
built from branched-cover Green's functions.

Doubled coordinates: black vertices have x + y even (even-even ones are
primal, odd-odd ones are dual), white vertices have x + y odd.  The trunk
kernel removes the black vertex (0,0) and a boundary vertex at infinity; the
path joining them runs just below the negative diagonal."""

from __future__ import annotations

from fractions import Fraction

from .branched_square import _in_s0, g_sigma_a, g_xi_a
from .errors import NonRealProbability, NotAnEdge, RemovedVertex
from .exact import I, ComplexElem, PiPoly, RingElem, det, det_expand

Point = tuple[int, int]

HOLE: Point = (0, 0)
STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))
_BASE = {(1, 0): ComplexElem(1), (0, 1): I, (-1, 0): ComplexElem(-1), (0, -1): -I}


def is_black(p: Point) -> bool:
    return (p[0] + p[1]) % 2 == 0


def is_white(p: Point) -> bool:
    return not is_black(p)


def _pt(p) -> Point:
    return (int(p[0]), int(p[1]))


def base_weight(w: Point, b: Point) -> ComplexElem:
    """Weight without zipper: east 1, north i, west -1, south -i seen from w."""
    w, b = _pt(w), _pt(b)
    if not is_white(w) or not is_black(b):
        raise NotAnEdge(f"{w} must be white and {b} black")
    step = (b[0] - w[0], b[1] - w[1])
    if step not in _BASE:
        raise NotAnEdge(f"{w} and {b} are not adjacent")
    return _BASE[step]


def crossed(w: Point, b: Point) -> bool:
    """Is the doubled-lattice edge wb crossed by the path from the hole out?"""
    return _in_s0(_pt(w), _pt(b))


def k_weight(w: Point, b: Point) -> ComplexElem:
    """Kasteleyn weight of the trunk graph, zipper signs included."""
    val = base_weight(w, b)
    if _pt(b) == HOLE:
        raise NotAnEdge(f"{b} is the removed vertex")
    return -val if crossed(w, b) else val


def black_neighbors(w: Point) -> list[Point]:
    return [(w[0] + dx, w[1] + dy) for dx, dy in STEPS]


def _same_class(p: Point, q: Point) -> bool:
    return p[0] % 2 == q[0] % 2


def _g_antisym(p: Point, q: Point) -> RingElem:
    """G^A(p/2, q/2) on the Sigma cover (even-even) or the Xi cover (odd-odd)."""
    if p[0] % 2 == 0:
        return g_sigma_a((p[0] // 2, p[1] // 2), (q[0] // 2, q[1] // 2))
    h = Fraction(1, 2)
    return g_xi_a((p[0] * h, p[1] * h), (q[0] * h, q[1] * h))


def k_inverse_trunk(b: Point, w: Point) -> ComplexElem:
    """K^-1(b, w) = sum over b' ~ w in the class of b of conj(K(w,b')) G^A(b'/2, b/2)."""
    b, w = _pt(b), _pt(w)
    if not is_black(b) or not is_white(w):
        raise ValueError(f"need black b and white w, got {b}, {w}")
    if b == HOLE:
        raise RemovedVertex("the hole has no kernel row")
    total = ComplexElem(0)
    for bp in black_neighbors(w):
        if bp == HOLE or not _same_class(bp, b):
            continue
        total = total + k_weight(w, bp).conjugate() * _g_antisym(bp, b)
    return total


class Kernel:
    """Handle pairing a Kasteleyn matrix with its inverse."""

    name = "kernel"
    removed: tuple = ()

    def weight(self, w: Point, b: Point) -> ComplexElem:
        raise NotImplementedError

    def inverse(self, b: Point, w: Point) -> ComplexElem:
        raise NotImplementedError

    def row(self, w: Point) -> list[Point]:
        """Black vertices carrying a nonzero entry in row w of K."""
        return [b for b in black_neighbors(w) if b not in self.removed]


class TrunkKernel(Kernel):
    name = "trunk"
    removed = (HOLE,)

    def weight(self, w, b):
        return k_weight(w, b)

    def inverse(self, b, w):
        return k_inverse_trunk(b, w)


class MonomerKernel(TrunkKernel):
    """Dimers on Z^2 with a monomer at the origin: the same graph and kernel
    as the trunk, read as dimer statistics rather than tree edges."""

    name = "monomer"


TRUNK = TrunkKernel()
MONOMER = MonomerKernel()


def _check_event(event) -> list[tuple[Point, Point]]:
    pairs = []
    seen = set()
    for b, w in event:
        b, w = _pt(b), _pt(w)
        if not is_black(b) or not is_white(w):
            raise ValueError(f"dimer ({b}, {w}) must be (black, white)")
        if abs(b[0] - w[0]) + abs(b[1] - w[1]) != 1:
            raise NotAnEdge(f"{b} and {w} are not adjacent")
        if b in seen or w in seen:
            raise ValueError("dimers of an event must be disjoint")
        seen.update((b, w))
        pairs.append((b, w))
    return pairs


def _lift(z: ComplexElem) -> ComplexElem:
    return ComplexElem(PiPoly.coerce(z.re), PiPoly.coerce(z.im))


def event_probability(kernel: Kernel, event) -> RingElem | PiPoly:
    """det[K^-1(b_i, w_j)] * prod K(w_i, b_i) for the dimers (b_i, w_i)."""
    pairs = _check_event(event)
    if not pairs:
        return RingElem(1)
    for b, _ in pairs:
        if b in kernel.removed:
            raise RemovedVertex(f"{b} is removed")
    m = [[kernel.inverse(b, w) for _, w in pairs] for b, _ in pairs]
    if all(z.re.is_pi_free and z.im.is_pi_free for row in m for z in row):
        val = ComplexElem.coerce(det(m))
    else:
        # 1/pi entries: stay division-free so products land in PiPoly
        val = det_expand([[_lift(z) for z in row] for row in m])
    for b, w in pairs:
        val = val * kernel.weight(w, b)
    if not val.im.is_zero():
        raise NonRealProbability(f"imaginary part {val.im} for event {pairs}")
    re = val.re.simplify() if isinstance(val.re, PiPoly) else val.re
    x = float(re)
    if not -1e-12 <= x <= 1 + 1e-12:
        raise NonRealProbability(f"probability {x} outside [0,1] for event {pairs}")
    return re


def dimer_probability(kernel: Kernel, b: Point, w: Point):
    return event_probability(kernel, [(b, w)])


def identity_entry(kernel: Kernel, w: Point, w2: Point) -> ComplexElem:
    """(K K^-1)(w, w2), which must equal the Kronecker delta."""
    total = ComplexElem(0)
    for b in kernel.row(w):
        total = total + kernel.weight(w, b) * kernel.inverse(b, w2)
    return total


def flatness_defect(x: int, y: int) -> ComplexElem:
    """Kasteleyn-flatness of the unit face with lower-left corner (x, y).

    For a four-cycle w1 b1 w2 b2 the alternating product
    K(w1,b1) K(w2,b2) / (K(w2,b1) K(w1,b2)) must equal -1; returns that
    ratio plus one (zero when flat)."""
    corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
    if HOLE in corners:
        return ComplexElem(0)
    whites = [p for p in corners if is_white(p)]
    blacks = [p for p in corners if is_black(p)]
    w1, w2 = whites
    b1, b2 = blacks
    num = k_weight(w1, b1) * k_weight(w2, b2)
    den = k_weight(w2, b1) * k_weight(w1, b2)
    return num / den + 1
