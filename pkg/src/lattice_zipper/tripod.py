"""The UST on Z^2 conditioned to have a triple point at the origin.

Doubled coordinates with the tripod vertex v_t at (0,0); w1..w4 are its
E, N, W, S white neighbours and b1..b4 the black vertices beyond them.
There is no zipper here, so entries come from the plain Green's function.
These kernels use the gauge K -> -K relative to the trunk weights, which is
the convention in which K(w,b) = 1 for w = (-1,0), b = (-2,0)."""

from __future__ import annotations

from functools import lru_cache

from .errors import NotAnEdge, RemovedVertex
from .exact import I, ComplexElem, RingElem
from .green_plane import green
from .kasteleyn import Kernel, base_weight, black_neighbors, event_probability, is_black, is_white

Point = tuple[int, int]

VT: Point = (0, 0)
W = {1: (1, 0), 2: (0, 1), 3: (-1, 0), 4: (0, -1)}
B = {1: (2, 0), 2: (0, 2), 3: (-2, 0), 4: (0, -2)}
W0 = "w0"
# the w0 row is sum_i c_i * (row w_i), see the contraction figure
_C = {1: ComplexElem(1), 2: I, 3: ComplexElem(-1), 4: -I}
VARIANTS = {"NE": (1, 2), "NW": (3, 2), "SW": (3, 4), "SE": (1, 4)}


def plane_weight(w: Point, b: Point) -> ComplexElem:
    return -base_weight(w, b)


def _horizontal(w: Point) -> bool:
    # white (odd, even) points are horizontal primal edges or vertical dual ones;
    # both pair with w1, w3 in the limiting formulas
    return w[0] % 2 == 1


def k_inverse_plane(b: Point, w: Point) -> ComplexElem:
    """Full-plane entry: sum over b' ~ w of the class of b of conj(K(w,b')) G((b'-b)/2)."""
    return _plane_entry((int(b[0]), int(b[1])), (int(w[0]), int(w[1])))


@lru_cache(maxsize=None)
def _plane_entry(b: Point, w: Point) -> ComplexElem:
    if not is_black(b) or not is_white(w):
        raise NotAnEdge(f"need black b and white w, got {b}, {w}")
    total = ComplexElem(0)
    for bp in black_neighbors(w):
        if bp[0] % 2 != b[0] % 2:
            continue
        d = ((bp[0] - b[0]) // 2, (bp[1] - b[1]) // 2)
        total = total + plane_weight(w, bp).conjugate() * green((0, 0), d)
    return total


def k_inverse_directional(variant: str, b: Point, w: Point) -> ComplexElem:
    h, v = VARIANTS[variant]
    if w in (W[h], W[v]):
        raise RemovedVertex(f"{w} is removed in the {variant} graph")
    ref = W[h] if _horizontal(w) else W[v]
    return k_inverse_plane(b, w) - k_inverse_plane(b, ref)


def k_inverse_ne(b: Point, w: Point) -> ComplexElem:
    return k_inverse_directional("NE", b, w)


@lru_cache(maxsize=None)
def k_inverse_tr(b: Point, w) -> ComplexElem:
    """Limiting kernel of the contracted tripod graph; ``w`` may be W0."""
    if b == VT:
        raise RemovedVertex("the tripod vertex is contracted away")
    if w == W0:
        return (k_inverse_plane(b, W[1]) - k_inverse_plane(b, W[3])) / 2
    if _horizontal(w):
        return k_inverse_plane(b, w) - (k_inverse_plane(b, W[1]) + k_inverse_plane(b, W[3])) / 2
    return k_inverse_plane(b, w) - (k_inverse_plane(b, W[2]) + k_inverse_plane(b, W[4])) / 2


def w0_edges() -> list[tuple[int, Point, ComplexElem]]:
    """The 12 edges at w0 as (i, black, weight), i the w_i the edge came from."""
    return list(_w0_edges())


@lru_cache(maxsize=None)
def _w0_edges():
    out = []
    for i, wi in W.items():
        for b in black_neighbors(wi):
            if b != VT:
                out.append((i, b, _C[i] * plane_weight(wi, b)))
    return tuple(out)


def k_tr_weight(w, b: Point) -> ComplexElem:
    if w == W0:
        total = ComplexElem(0)
        found = False
        for _, bb, wt in w0_edges():
            if bb == b:
                total = total + wt
                found = True
        if not found:
            raise NotAnEdge(f"{b} is not adjacent to w0")
        return total
    if w in W.values():
        raise RemovedVertex(f"{w} is contracted into w0")
    if b == VT:
        raise RemovedVertex("the tripod vertex is contracted away")
    return plane_weight(w, b)


class TripodKernel(Kernel):
    name = "tripod"
    removed = (VT,)

    def weight(self, w, b):
        return k_tr_weight(w, b)

    def inverse(self, b, w):
        return k_inverse_tr(b, w)

    def row(self, w):
        if w == W0:
            return sorted({b for _, b, _ in w0_edges()})
        return [b for b in black_neighbors(w) if b != VT]


class DirectionalKernel(Kernel):
    """Limit of the graph with w_h, w_v and the boundary vertices removed."""

    removed = (VT,)

    def __init__(self, variant: str):
        self.variant = variant
        self.name = f"tripod-{variant}"

    def weight(self, w, b):
        return plane_weight(w, b)

    def inverse(self, b, w):
        return k_inverse_directional(self.variant, b, w)


TRIPOD = TripodKernel()


def tripod_identity_entry(w, w2) -> ComplexElem:
    total = ComplexElem(0)
    for b in TRIPOD.row(w):
        total = total + TRIPOD.weight(w, b) * TRIPOD.inverse(b, w2)
    return total


def _to_doubled(p: Point) -> Point:
    return (2 * p[0], 2 * p[1])


def tripod_edge_probability(tail: Point, direction: str) -> RingElem:
    """P(directed tree edge from ``tail``) given a tripod at the origin.

    Edges point towards infinity; an edge into the origin is w0 matched along
    the stub it came from."""
    from .trunk import DIRECTIONS
    if tuple(tail) == (0, 0):
        raise RemovedVertex("edges at the tripod vertex are the legs")
    dx, dy = DIRECTIONS[direction]
    b = _to_doubled(tail)
    w = (b[0] + dx, b[1] + dy)
    if w in W.values():
        i = next(k for k, v in W.items() if v == w)
        wt = _C[i] * plane_weight(w, b)
        val = wt * k_inverse_tr(b, W0)
    else:
        val = plane_weight(w, b) * k_inverse_tr(b, w)
    if not val.im.is_zero():
        from .errors import NonRealProbability
        raise NonRealProbability(f"edge {tail}{direction}: {val}")
    return val.re


def tripod_event_probability(event) -> RingElem:
    return event_probability(TRIPOD, event)


def tripod_statistics() -> dict[str, RingElem]:
    legs = [tripod_edge_probability(tuple(x // 2 for x in B[i]), d)
            for i, d in zip((1, 2, 3, 4), ("W", "S", "E", "N"))]
    if any(p != legs[0] for p in legs):
        raise AssertionError("incoming edge probabilities differ between directions")
    edge = legs[0]
    deg4 = 4 * edge
    return {
        "edge_probability": edge,
        "degree4_probability": deg4,
        "degree3_probability": 1 - deg4,
        "expected_degree": 3 + deg4,
    }


def tripod_table(x0: int, x1: int, y0: int, y1: int) -> dict[tuple[Point, str], RingElem]:
    from .trunk import DIRECTIONS
    out = {}
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            if (x, y) == (0, 0):
                continue
            for d in DIRECTIONS:
                out[((x, y), d)] = tripod_edge_probability((x, y), d)
    return out
