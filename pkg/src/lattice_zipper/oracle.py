"""Brute-force checks: exact linear algebra on finite grids, large float
solves for convergence runs, Wilson's algorithm and numeric quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from .branched_square import _in_s0
from .errors import ConditioningTooRare, NoConvergence, Singular
from .kasteleyn import base_weight, crossed, is_black
from .triangular import NEIGHBORS as TRI_NEIGHBORS
from .triangular import zipper_crossed as tri_zipper_crossed

Point = tuple[int, int]

SQUARE_NEIGHBORS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class FiniteProblem:
    """Box |x|, |y| <= radius (wired-strip: x in [-radius, radius-1],
    |y| <= height) with optional Dirichlet slit, zipper and removed vertices."""

    lattice: str = "square"
    radius: int = 4
    boundary: str = "dirichlet-box"
    slit: frozenset = frozenset()
    zipper: bool = False
    removed: frozenset = frozenset()
    height: int | None = None

    def __post_init__(self):
        if self.lattice not in ("square", "triangular"):
            raise ValueError(f"unknown lattice {self.lattice!r}")
        if self.boundary not in ("dirichlet-box", "wired-strip"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.radius < 1:
            raise ValueError("radius must be positive")

    def steps(self):
        return SQUARE_NEIGHBORS if self.lattice == "square" else TRI_NEIGHBORS

    def inside(self, p: Point) -> bool:
        if self.boundary == "wired-strip":
            h = self.radius // 2 if self.height is None else self.height
            return -self.radius <= p[0] < self.radius and abs(p[1]) <= h
        return abs(p[0]) <= self.radius and abs(p[1]) <= self.radius

    def vertices(self) -> list[Point]:
        r = max(self.radius, self.height or 0)
        pts = [(x, y) for y in range(-r - 1, r + 2) for x in range(-r - 1, r + 2)]
        return [p for p in pts if self.inside(p) and p not in self.slit and p not in self.removed]

    def sign(self, p: Point, q: Point) -> int:
        if not self.zipper:
            return 1
        if self.lattice == "square":
            return -1 if _in_s0(p, q) else 1
        return -1 if tri_zipper_crossed(p, q) else 1


def slit_problem(radius: int) -> FiniteProblem:
    """Dirichlet data on {(k,k): k <= -1}, the slit of g_d."""
    return FiniteProblem(radius=radius, slit=frozenset((k, k) for k in range(-radius, 0)))


def zipper_problem(radius: int) -> FiniteProblem:
    return FiniteProblem(radius=radius, zipper=True)


def laplacian(p: FiniteProblem):
    """(index, rows) of the Dirichlet Laplacian, rows as {column: int}."""
    verts = p.vertices()
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        row = {index[v]: len(p.steps())}
        for dx, dy in p.steps():
            n = (v[0] + dx, v[1] + dy)
            j = index.get(n)
            if j is not None:
                row[j] = row.get(j, 0) - p.sign(v, n)
        rows.append(row)
    return index, rows


# exact elimination

class GaussQ:
    """Gaussian rational re + i*im with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def of(z) -> "GaussQ":
        if isinstance(z, GaussQ):
            return z
        if hasattr(z, "re") and hasattr(z, "im"):
            return GaussQ(z.re.a, z.im.a)
        return GaussQ(z)

    def __add__(self, o):
        o = GaussQ.of(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussQ.of(o)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussQ.of(o) - self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussQ.of(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussQ.of(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return GaussQ((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __eq__(self, o):
        o = GaussQ.of(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"


def exact_solve(rows: list[dict], rhs: list[list], want_det: bool = False):
    """Solve A X = B exactly; rows are sparse {column: value} dicts and
    rhs a list of right-hand-side columns.  Row pivoting on exact zero
    pivots, choosing the nearest nonzero row to keep the band narrow.

    Returns (solutions, det) with det None unless requested."""
    n = len(rows)
    a = [dict(r) for r in rows]
    b = [[col[i] for col in rhs] for i in range(n)]
    below: dict[int, set] = {}
    for i, r in enumerate(a):
        for j in r:
            below.setdefault(j, set()).add(i)
    det = 1
    for k in range(n):
        cand = sorted(i for i in below.get(k, ()) if i >= k and a[i].get(k))
        if not cand:
            raise Singular(f"no nonzero pivot in column {k}")
        r = cand[0]
        if r != k:
            a[k], a[r] = a[r], a[k]
            b[k], b[r] = b[r], b[k]
            now_k, now_r = set(a[k]), set(a[r])
            for j in now_k - now_r:
                below[j].discard(r)
                below[j].add(k)
            for j in now_r - now_k:
                below[j].discard(k)
                below[j].add(r)
            det = -det
        piv = a[k][k]
        if want_det:
            det = det * piv
        pivrow = [(j, v) for j, v in a[k].items() if j > k]
        for i in cand:
            if i == k:
                continue
            f = a[i].pop(k) / piv
            below[k].discard(i)
            row = a[i]
            for j, v in pivrow:
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                    below.setdefault(j, set()).add(i)
                elif j in row:
                    del row[j]
                    below[j].discard(i)
            bi, bk = b[i], b[k]
            b[i] = [x - f * y for x, y in zip(bi, bk)]
    x = [None] * n
    for k in range(n - 1, -1, -1):
        acc = list(b[k])
        for j, v in a[k].items():
            if j > k:
                acc = [s - v * t for s, t in zip(acc, x[j])]
        x[k] = [s / a[k][k] for s in acc]
    sols = [[x[i][c] for i in range(n)] for c in range(len(rhs))]
    return sols, (det if want_det else None)


def exact_green_solve(p: FiniteProblem, u: Point, v: Point) -> Fraction:
    """G(u, v): the value at v of the solution of Delta f = 1_u."""
    index, rows = laplacian(p)
    for q in (u, v):
        if q not in index:
            raise ValueError(f"{q} is not an interior vertex")
    n = len(rows)
    rows = [{j: Fraction(c) for j, c in r.items()} for r in rows]
    e = [Fraction(0)] * n
    e[index[u]] = Fraction(1)
    sols, _ = exact_solve(rows, [e])
    return sols[0][index[v]]


def float_green_solve(p: FiniteProblem, u: Point, points) -> dict[Point, float]:
    """Double-precision sparse LU for boxes too large for exact elimination."""
    index, rows = laplacian(p)
    if u not in index:
        raise ValueError(f"{u} is not an interior vertex")
    lu = splu(_csc(rows, len(rows), float))
    rhs = np.zeros(len(rows))
    rhs[index[u]] = 1.0
    x = lu.solve(rhs)
    return {q: float(x[index[q]]) for q in points}


def _csc(rows, n, dtype):
    ri, ci, vals = [], [], []
    for i, r in enumerate(rows):
        for j, v in r.items():
            ri.append(i)
            ci.append(j)
            vals.append(complex(v) if dtype is complex else float(v))
    m = csc_matrix((np.array(vals, dtype=dtype), (ri, ci)), shape=(n, n))
    return m


# finite Kasteleyn matrices on the doubled lattice

@dataclass
class DimerRegion:
    """Doubled-lattice points in [x0, x1] x [y0, y1] minus ``removed``;
    with ``zipper`` set, edges crossed by the path from (0,0) down the
    negative diagonal are negated."""

    x0: int
    x1: int
    y0: int
    y1: int
    removed: frozenset = frozenset()
    zipper: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def points(self):
        return [(x, y) for y in range(self.y0, self.y1 + 1) for x in range(self.x0, self.x1 + 1)
                if (x, y) not in self.removed]

    def blacks(self):
        return [p for p in self.points() if is_black(p)]

    def whites(self):
        return [p for p in self.points() if not is_black(p)]

    def contains(self, p):
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1 and p not in self.removed

    def weight(self, w: Point, b: Point):
        val = GaussQ.of(base_weight(w, b))
        if self.zipper and crossed(w, b):
            val = -val
        return val

    def matrix(self):
        """(white index, black index, rows of K as sparse dicts)."""
        if "k" in self._cache:
            return self._cache["k"]
        whites, blacks = self.whites(), self.blacks()
        if len(whites) != len(blacks):
            raise Singular(f"{len(whites)} white and {len(blacks)} black vertices")
        wi = {w: i for i, w in enumerate(whites)}
        bi = {b: i for i, b in enumerate(blacks)}
        rows = []
        for w in whites:
            row = {}
            for dx, dy in SQUARE_NEIGHBORS:
                b = (w[0] + dx, w[1] + dy)
                if b in bi:
                    row[bi[b]] = self.weight(w, b)
            rows.append(row)
        self._cache["k"] = (wi, bi, rows)
        return self._cache["k"]


def temperleyan_region(n: int) -> DimerRegion:
    """G+ for the n x n grid with the corner primal vertex (0,0) removed."""
    m = 2 * n - 2
    return DimerRegion(0, m, 0, m, frozenset({(0, 0)}))


def monomer_region(radius: int) -> DimerRegion:
    """Square [-radius, radius]^2 (radius even) with the hole at the origin."""
    if radius % 2:
        raise ValueError("radius must be even so the corners are primal")
    return DimerRegion(-radius, radius, -radius, radius, frozenset({(0, 0)}), zipper=True)


def kasteleyn_columns(region: DimerRegion, ws) -> dict:
    """Exact K^-1(., w) for each w in ws as {black: GaussQ}."""
    wi, bi, rows = region.matrix()
    n = len(rows)
    rhs = []
    for w in ws:
        e = [GaussQ(0)] * n
        e[wi[w]] = GaussQ(1)
        rhs.append(e)
    # K x = e_w gives the column of K^-1 indexed by w
    sols, _ = exact_solve(rows, rhs)
    return {w: {b: s[j] for b, j in bi.items()} for w, s in zip(ws, sols)}


def exact_kasteleyn_solve(region: DimerRegion, b: Point, w: Point) -> GaussQ:
    """K^-1(b, w) on a finite region, exactly."""
    if not region.contains(b) or not region.contains(w):
        raise ValueError(f"{b} or {w} is not in the region")
    return kasteleyn_columns(region, [w])[w][b]


def kasteleyn_det(region: DimerRegion) -> GaussQ:
    _, _, rows = region.matrix()
    n = len(rows)
    _, d = exact_solve(rows, [[GaussQ(0)] * n], want_det=True)
    return GaussQ.of(d)


def float_kasteleyn_columns(region: DimerRegion, ws) -> dict:
    """K^-1(., w) in complex double precision, for large regions."""
    whites, blacks = region.whites(), region.blacks()
    if len(whites) != len(blacks):
        raise Singular(f"{len(whites)} white and {len(blacks)} black vertices")
    wi = {w: i for i, w in enumerate(whites)}
    bi = {b: i for i, b in enumerate(blacks)}
    rows = []
    for w in whites:
        row = {}
        for dx, dy in SQUARE_NEIGHBORS:
            b = (w[0] + dx, w[1] + dy)
            if b in bi:
                row[bi[b]] = complex(region.weight(w, b))
        rows.append(row)
    lu = splu(_csc(rows, len(rows), complex))
    out = {}
    for w in ws:
        e = np.zeros(len(rows), dtype=complex)
        e[wi[w]] = 1
        x = lu.solve(e)
        out[w] = {b: complex(x[j]) for b, j in bi.items()}
    return out


# Green-difference formula on a Temperleyan region

def _grid_laplacians(n: int):
    """Exact inverse Laplacians: primal n x n grid grounded at the corner
    (0,0), dual inner faces grounded at the outer face.  Keys are doubled
    coordinates."""
    prim = [(2 * x, 2 * y) for y in range(n) for x in range(n) if (x, y) != (0, 0)]
    dual = [(2 * x + 1, 2 * y + 1) for y in range(n - 1) for x in range(n - 1)]
    m = 2 * n - 2
    out = {}
    for verts, grounded in ((prim, False), (dual, True)):
        index = {v: i for i, v in enumerate(verts)}
        rows = []
        for v in verts:
            row = {}
            deg = 0
            for dx, dy in SQUARE_NEIGHBORS:
                q = (v[0] + 2 * dx, v[1] + 2 * dy)
                inside = 0 <= q[0] <= m and 0 <= q[1] <= m
                if grounded or inside:
                    deg += 1
                if q in index:
                    row[index[q]] = Fraction(-1)
            row[index[v]] = Fraction(deg)
            rows.append(row)
        rhs = [[Fraction(int(i == j)) for i in range(len(verts))] for j in range(len(verts))]
        sols, _ = exact_solve(rows, rhs)
        for a, i in index.items():
            for c, j in index.items():
                out[(a, c)] = sols[j][i]
    return out


def green_difference_kinverse(n: int, b: Point, w: Point) -> GaussQ:
    """sum over b' ~ w of the class of b of conj(K(w,b')) G(b', b)."""
    region = temperleyan_region(n)
    key = ("green", n)
    cache = _GREEN_CACHE
    if key not in cache:
        cache[key] = _grid_laplacians(n)
    g = cache[key]
    total = GaussQ(0)
    for dx, dy in SQUARE_NEIGHBORS:
        bp = (w[0] + dx, w[1] + dy)
        if not region.contains(bp) or bp[0] % 2 != b[0] % 2:
            continue
        total = total + region.weight(w, bp).conjugate() * g[(bp, b)]
    return total


_GREEN_CACHE: dict = {}


# tripod lemma on a finite grid

def _abs2(z: GaussQ) -> Fraction:
    return z.re * z.re + z.im * z.im


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def tripod_lemma_check(n: int, b: Point | None = None, w: Point | None = None) -> dict:
    """Evaluate the 3x3 / 2x2 minor ratio for K^-1_NE on the n x n grid with
    v1, v2, v3 the SW, SE, NE corners and the tripod at the centre, next to
    a direct solve of the graph with w1, w2, v2, v3 removed.

    Returns the ratio, the direct value, the denominator, and
    |det K_NE| / |det K| squared (the squared tree probability)."""
    m = 2 * n - 2
    c = 2 * ((n - 1) // 2)
    vt = (c, c)
    v1, v2, v3 = (0, 0), (m, 0), (m, m)
    w1, w2 = (c + 1, c), (c, c + 1)
    b = b or (c - 2, c)
    w = w or (c - 1, c)
    full = DimerRegion(0, m, 0, m, frozenset({v1}))
    cols = kasteleyn_columns(full, [w, w1, w2])
    rows_b = (b, v2, v3)
    num = _det3([[cols[ww][bb] for ww in (w, w1, w2)] for bb in rows_b])
    den = cols[w1][v2] * cols[w2][v3] - cols[w2][v2] * cols[w1][v3]
    ne = DimerRegion(0, m, 0, m, frozenset({v1, v2, v3, w1, w2}))
    direct = exact_kasteleyn_solve(ne, b, w)
    det_full = kasteleyn_det(full)
    det_ne = kasteleyn_det(ne)
    return {
        "vt": vt,
        "ratio": num / den,
        "direct": direct,
        "denominator": den,
        "trees": det_full,
        "z_ne": det_ne,
        "prob_sq": _abs2(det_ne) / _abs2(det_full),
    }


def spanning_tree_count(n: int) -> int:
    """Matrix-tree theorem on the n x n grid."""
    verts = [(x, y) for y in range(n) for x in range(n)][1:]
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        row = {}
        deg = 0
        for dx, dy in SQUARE_NEIGHBORS:
            q = (v[0] + dx, v[1] + dy)
            if 0 <= q[0] < n and 0 <= q[1] < n:
                deg += 1
                if q in index:
                    row[index[q]] = Fraction(-1)
        row[index[v]] = Fraction(deg)
        rows.append(row)
    _, d = exact_solve(rows, [[Fraction(0)] * len(rows)], want_det=True)
    return int(d)


def _grid_edges(n):
    out = []
    for y in range(n):
        for x in range(n):
            if x + 1 < n:
                out.append(((x, y), (x + 1, y)))
            if y + 1 < n:
                out.append(((x, y), (x, y + 1)))
    return out


def enumerate_spanning_trees(n: int):
    """Every spanning tree of the n x n grid as an adjacency dict (tiny n only)."""
    edges = _grid_edges(n)
    verts = [(x, y) for y in range(n) for x in range(n)]
    for sub in combinations(edges, len(verts) - 1):
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        ok = True
        for a, b in sub:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            adj = {v: [] for v in verts}
            for a, b in sub:
                adj[a].append(b)
                adj[b].append(a)
            yield adj


def _first_step(adj, start, target):
    prev = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        for q in adj[v]:
            if q not in prev:
                prev[q] = v
                stack.append(q)
    v = target
    while prev[v] != start:
        v = prev[v]
    return (v[0] - start[0], v[1] - start[1])


def count_tripod_trees(n: int, dirs=((1, 0), (0, 1))) -> tuple[int, int]:
    """(trees with a tripod at the centre joining the SW, SE, NE corners whose
    first steps include ``dirs``, all trees), by enumeration."""
    c = (n - 1) // 2
    corners = [(0, 0), (n - 1, 0), (n - 1, n - 1)]
    good = total = 0
    for adj in enumerate_spanning_trees(n):
        total += 1
        steps = {_first_step(adj, (c, c), t) for t in corners}
        if len(steps) == 3 and all(d in steps for d in dirs):
            good += 1
    return good, total


# Wilson's algorithm

@dataclass
class WilsonResult:
    counts: dict
    accepted: int
    trials: int
    seed: int

    def frequency(self, key) -> float:
        return self.counts[key] / self.accepted

    def stderr(self, key) -> float:
        p = self.frequency(key)
        return (p * (1 - p) / self.accepted) ** 0.5


def _wilson_graph(p: FiniteProblem, cut=()):
    """Vertex index, padded neighbour table, degrees and number of roots.

    dirichlet-box: everything outside is one root; wired-strip: the columns
    left and right of the strip are two roots.  Edges in ``cut`` are absent."""
    if p.lattice != "square":
        raise ValueError("Wilson sampling is implemented for the square lattice")
    verts = p.vertices()
    index = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    cut = {frozenset(e) for e in cut}
    nbr = np.full((nv, 4), -1, dtype=np.int32)
    deg = np.zeros(nv, dtype=np.int32)
    for v, i in index.items():
        k = 0
        for dx, dy in SQUARE_NEIGHBORS:
            q = (v[0] + dx, v[1] + dy)
            if frozenset((v, q)) in cut:
                continue
            if q in index:
                nbr[i, k] = index[q]
            elif p.boundary == "wired-strip":
                if q[1] != v[1]:
                    continue
                nbr[i, k] = nv if q[0] < v[0] else nv + 1
            else:
                nbr[i, k] = nv
            k += 1
        deg[i] = k
    return index, nbr, deg, (2 if p.boundary == "wired-strip" else 1)


def _walk(rng, nbr, deg, nxt, label, rows, start):
    """Random walks from ``start`` for the sample rows not yet in the tree,
    then loop-erase by retracing; returns the root label reached per row."""
    nv = nbr.shape[0]
    live = rows[label[rows, start] < 0]
    idx = live
    pos = np.full(idx.size, start, dtype=np.int64)
    while idx.size:
        k = (rng.random(idx.size) * deg[pos]).astype(np.int64)
        new = nbr[pos, k].astype(np.int64)
        nxt[idx, pos] = new
        stop = label[idx, new] >= 0
        pos = new[~stop]
        idx = idx[~stop]
    # find the label at the end of each loop-erased path, then paint it
    end = np.empty(live.size, dtype=np.int8)
    cur = np.full(live.size, start, dtype=np.int64)
    todo = np.arange(live.size)
    while todo.size:
        lab = label[live[todo], cur[todo]]
        done = lab >= 0
        end[todo[done]] = lab[done]
        todo = todo[~done]
        cur[todo] = nxt[live[todo], cur[todo]]
    cur = np.full(live.size, start, dtype=np.int64)
    todo = np.arange(live.size)
    while todo.size:
        label[live[todo], cur[todo]] = end[todo]
        cur[todo] = nxt[live[todo], cur[todo]]
        todo = todo[cur[todo] < nv]
        todo = todo[label[live[todo], cur[todo]] < 0]
    return label[rows, start]


def wilson_sample(p: FiniteProblem, events: dict, seed: int, n: int,
                  conditioning: tuple | None = None, batch: int = 4096,
                  max_trials: int | None = None) -> WilsonResult:
    """Sample spanning forests rooted at the wired boundary and count events.

    ``events`` maps a name to a list of directed edges (tail, head); the
    event holds when any of them is a parent pointer (the head may be the
    string "L", "R" or "root").  ``conditioning`` = (u, v) removes the edge
    uv and keeps forests with u and v joined to different roots, which is
    the UST conditioned on uv lying on the left-right path.  Stops after n
    accepted samples."""
    if n < 1:
        raise ValueError("n must be at least 1")
    cut = [conditioning] if conditioning else []
    index, nbr, deg, nroots = _wilson_graph(p, cut)
    nv = len(index)
    roots = {"root": nv, "L": nv, "R": nv + 1}
    starts = []
    if conditioning:
        starts += [index[conditioning[0]], index[conditioning[1]]]
    checks = {}
    for name, edges in events.items():
        pairs = []
        for t, h in edges:
            pairs.append((index[t], roots[h] if isinstance(h, str) else index[h]))
            if index[t] not in starts:
                starts.append(index[t])
        checks[name] = pairs
    rng = np.random.default_rng(seed)
    counts = {k: 0 for k in events}
    accepted = trials = 0
    limit = max_trials if max_trials is not None else max(100 * n, 10 ** 5)
    while accepted < n:
        if trials >= limit:
            break
        m = batch
        trials += m
        nxt = np.full((m, nv), -1, dtype=np.int32)
        label = np.full((m, nv + nroots), -1, dtype=np.int8)
        for r in range(nroots):
            label[:, nv + r] = r
        rows = np.arange(m)
        for j, s in enumerate(starts):
            lab = _walk(rng, nbr, deg, nxt, label, rows, s)
            if conditioning and j == 1:
                rows = rows[lab != label[rows, starts[0]]]
        rows = rows[: n - accepted]
        accepted += rows.size
        for name, pairs in checks.items():
            hit = np.zeros(rows.size, dtype=bool)
            for t, h in pairs:
                hit |= nxt[rows, t] == h
            counts[name] += int(hit.sum())
    if accepted == 0 or accepted / trials < 1e-4:
        raise ConditioningTooRare(f"accepted {accepted} of {trials} samples")
    if accepted < n:
        raise ConditioningTooRare(f"only {accepted} accepted in {trials} trials")
    return WilsonResult(counts, accepted, trials, seed)


def trunk_strip(half_width: int = 40, half_height: int = 40) -> FiniteProblem:
    """80 columns by 81 rows, each side wired to a root: 81 horizontal
    edges per row.  Free boundary at the top and bottom."""
    return FiniteProblem(radius=half_width, boundary="wired-strip", height=half_height)


TRUNK_EDGE = ((-1, 0), (0, 0))
_DIRS = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}


def _fig1_checks():
    """Directed edges with tails in [-1,1] x [0,1], keyed like "(0,0)E"."""
    out = {}
    for y in (0, 1):
        for x in (-1, 0, 1):
            for d, (dx, dy) in _DIRS.items():
                e = ((x, y), (x + dx, y + dy))
                if set(e) != set(TRUNK_EDGE):
                    out[f"({x},{y}){d}"] = [e]
    return out


FIG1_CHECKS = _fig1_checks()


def trunk_monte_carlo(seed: int = 1, n: int = 10_000, **kw) -> WilsonResult:
    return wilson_sample(trunk_strip(), FIG1_CHECKS, seed, n, conditioning=TRUNK_EDGE, **kw)


def box_edge_monte_carlo(seed: int = 1, n: int = 10_000, radius: int = 10) -> WilsonResult:
    """Unconditioned UST of the (2r+1)^2 box with wired boundary; the centre edge."""
    events = {"edge": [((0, 0), (1, 0)), ((1, 0), (0, 0))]}
    return wilson_sample(FiniteProblem(radius=radius), events, seed, n)


# quadrature

def quadrature_green(lattice: str, p: Point, tol: float = 1e-10) -> float:
    """G(p) = -(1/4pi^2) * double integral of (1 - cos(x a + y b)) / D(a, b)
    with D = 4 - 2cos a - 2cos b (square) or 6 - 2cos a - 2cos b - 2cos(a+b)."""
    if tol < 1e-10:
        raise ValueError("tol must be at least 1e-10")
    x, y = int(p[0]), int(p[1])
    pi = mpmath.pi
    with mpmath.workdps(20):
        if lattice == "square":
            def f(a, b):
                d = 4 - 2 * mpmath.cos(a) - 2 * mpmath.cos(b)
                return 0 if d == 0 else (1 - mpmath.cos(x * a) * mpmath.cos(y * b)) / d
            # the integrand is even in each variable separately
            val, err = mpmath.quad(f, [0, pi], [0, pi], error=True)
            val, err = val / pi ** 2, err / pi ** 2
        elif lattice == "triangular":
            def f(a, b):
                d = 6 - 2 * mpmath.cos(a) - 2 * mpmath.cos(b) - 2 * mpmath.cos(a + b)
                return 0 if d == 0 else (1 - mpmath.cos(x * a + y * b)) / d
            val, err = mpmath.quad(f, [0, pi], [-pi, 0, pi], error=True)
            val, err = val / (2 * pi ** 2), err / (2 * pi ** 2)
        else:
            raise ValueError(f"unknown lattice {lattice!r}")
    if not err <= tol:
        raise NoConvergence(f"quadrature error estimate {err} above {tol}")
    return -float(val)


def quadrature_axis_difference(x: int, tol: float = 1e-12) -> float:
    """G((x,0)) - G((x+1,0)) on the triangular lattice from the one-variable
    integral of sin((x + 1/2) t) / sqrt(14 - 2 cos t) over [0, 2pi]."""
    with mpmath.workdps(25):
        f = lambda t: mpmath.sin((x + mpmath.mpf(1) / 2) * t) / mpmath.sqrt(14 - 2 * mpmath.cos(t))
        val, err = mpmath.quad(f, [0, mpmath.pi, 2 * mpmath.pi], error=True)
        val, err = val / (2 * mpmath.pi), err / (2 * mpmath.pi)
    if not err <= tol:
        raise NoConvergence(f"quadrature error estimate {err} above {tol}")
    return float(val)


# convergence of box solves to the closed forms

CONVERGENCE_KINDS = ("slit", "zipper", "monomer")


def _near_points(r: int):
    return [(x, y) for y in range(-r, r + 1) for x in range(-r, r + 1)]


def convergence_error(kind: str, radius: int) -> float:
    """Largest |box value - closed form| near the origin.

    slit: G_D(0, v) on the box with Dirichlet data on {(k,k): k <= -1}
    against gh(a + b, |b - a|) / 2, |v| <= 2.  zipper: the zipper box
    against G_Z(0, v), |v| <= 2.  monomer: dimer probabilities on the
    doubled box with the hole against the limit, whites within 3."""
    from .branched_square import gz
    from .slit_square import gh
    if kind == "slit":
        p = slit_problem(radius)
        pts = [v for v in _near_points(2) if not (v[0] == v[1] and v[0] < 0)]
        got = float_green_solve(p, (0, 0), pts)
        return max(abs(got[v] - float(gh((v[0] + v[1], abs(v[1] - v[0])))) / 2) for v in pts)
    if kind == "zipper":
        pts = _near_points(2)
        got = float_green_solve(zipper_problem(radius), (0, 0), pts)
        return max(abs(got[v] - float(gz((0, 0), v))) for v in pts)
    if kind == "monomer":
        from .trunk import monomer_dimer_probability
        region = monomer_region(radius)
        pairs = []
        for w in _near_points(3):
            if is_black(w):
                continue
            for dx, dy in SQUARE_NEIGHBORS:
                b = (w[0] + dx, w[1] + dy)
                if b != (0, 0):
                    pairs.append((b, w))
        cols = float_kasteleyn_columns(region, sorted({w for _, w in pairs}))
        err = 0.0
        for b, w in pairs:
            z = complex(region.weight(w, b)) * cols[w][b]
            err = max(err, abs(z.imag), abs(z.real - float(monomer_dimer_probability(b, w))))
        return err
    raise ValueError(f"unknown convergence run {kind!r}")


def calibrate(radii=(16, 32, 48, 64)) -> dict:
    """Measured errors and the tolerances derived from them (5% headroom,
    rounded up in the fourth significant digit)."""
    out = {}
    for kind in CONVERGENCE_KINDS:
        rows = {}
        for r in radii:
            err = convergence_error(kind, r)
            tol = float(f"{err * 1.05:.3e}")
            if tol < err * 1.05:
                tol = float(f"{tol + 10 ** (math.floor(math.log10(tol)) - 3):.3e}")
            rows[str(r)] = {"error": err, "tolerance": tol}
        out[kind] = rows
    return out
