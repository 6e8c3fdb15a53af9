"""Local statistics of the UST trunk on Z^2 through the edge (-1,0)(0,0).

Tree vertex (a, b) sits at the white doubled point (2a+1, 2b); the trunk
edge itself is the removed black vertex (0,0).  A directed tree edge is the
dimer joining its tail to the black edge-vertex in its direction."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import RemovedVertex
from .exact import RingElem, SQRT2
from .kasteleyn import HOLE, MONOMER, TRUNK, event_probability, is_black

Point = tuple[int, int]

DIRECTIONS = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}
MAX_RUN = 12
STRAIGHT = SQRT2 - 1


@dataclass(frozen=True)
class TreeEdge:
    tail: Point
    direction: str

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of E, N, W, S, not {self.direction!r}")

    @property
    def head(self) -> Point:
        dx, dy = DIRECTIONS[self.direction]
        return (self.tail[0] + dx, self.tail[1] + dy)

    def dimer(self) -> tuple[Point, Point]:
        """(black, white) in doubled coordinates."""
        w = tree_to_doubled(self.tail)
        dx, dy = DIRECTIONS[self.direction]
        return (w[0] + dx, w[1] + dy), w


def tree_to_doubled(p: Point) -> Point:
    return (2 * p[0] + 1, 2 * p[1])


def dual_to_doubled(f: Point) -> Point:
    """Dual vertex (a, b), the face above and left of tree vertex (a, b)."""
    return (2 * f[0], 2 * f[1] + 1)


def is_trunk_edge(e: TreeEdge) -> bool:
    return e.dimer()[0] == HOLE


def _dimers(edges) -> list[tuple[Point, Point]]:
    out = []
    for e in edges:
        if isinstance(e, TreeEdge):
            if is_trunk_edge(e):
                raise RemovedVertex(f"{e} is the conditioned trunk edge")
            out.append(e.dimer())
        else:
            out.append(e)
    return out


def trunk_directed_edge_probability(e: TreeEdge) -> RingElem:
    return trunk_cylinder_probability([e])


def trunk_cylinder_probability(event) -> RingElem:
    """Probability that all the given tree edges (or raw dimers) are present."""
    return event_probability(TRUNK, _dimers(event))


# the trunk vertex (0,0): its outgoing edge is one of E, N, S; neighbours
# pointing back at it add to its degree
_INCOMING = [TreeEdge((1, 0), "W"), TreeEdge((0, 1), "S"), TreeEdge((0, -1), "N")]


def trunk_degree_distribution() -> dict[int, RingElem]:
    """P(degree = 2, 3, 4) of the trunk vertex (0,0) by inclusion-exclusion
    over the three possible incoming edges."""
    n = len(_INCOMING)
    joint = {}
    for mask in range(1 << n):
        sub = [_INCOMING[i] for i in range(n) if mask >> i & 1]
        joint[mask] = trunk_cylinder_probability(sub)
    exact = {}
    for j in range(n + 1):
        total = RingElem(0)
        for mask, p in joint.items():
            s = bin(mask).count("1")
            if s >= j:
                total = total + (-1) ** (s - j) * comb(s, j) * p
        exact[j] = total
    if not exact[3].is_zero():
        raise AssertionError("three incoming edges must be impossible")
    return {2 + j: exact[j] for j in range(3)}


def straight_run_probability(k: int, max_k: int = MAX_RUN) -> RingElem:
    """P(the trunk contains (0,0)(1,0)...(k,0)) in tree coordinates.

    Computed as a k x k kernel determinant and checked against (sqrt2-1)^k."""
    if k < 0 or k > max_k:
        raise ValueError(f"k must be in [0, {max_k}]")
    det_value = trunk_cylinder_probability([TreeEdge((j, 0), "E") for j in range(k)])
    closed = STRAIGHT ** k
    if det_value != closed:
        raise AssertionError(f"run determinant {det_value} differs from {closed}")
    return closed


def monomer_dimer_probability(p: Point, q: Point) -> RingElem:
    """Probability of the dimer pq for dimers on Z^2 with a monomer at 0."""
    p, q = (int(p[0]), int(p[1])), (int(q[0]), int(q[1]))
    b, w = (p, q) if is_black(p) else (q, p)
    if b == HOLE:
        raise RemovedVertex("edge touches the monomer")
    return event_probability(MONOMER, [(b, w)])


def trunk_table(x0: int, x1: int, y0: int, y1: int) -> dict[TreeEdge, RingElem]:
    """Directed edge probabilities for every tail in the window."""
    out = {}
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            for d in DIRECTIONS:
                e = TreeEdge((x, y), d)
                if not is_trunk_edge(e):
                    out[e] = trunk_directed_edge_probability(e)
    return out


def conservation_defect(p: Point) -> RingElem:
    """Sum of the outgoing probabilities at tree vertex p, minus one."""
    total = RingElem(0)
    for d in DIRECTIONS:
        e = TreeEdge(p, d)
        if not is_trunk_edge(e):
            total = total + trunk_directed_edge_probability(e)
    return total - 1
