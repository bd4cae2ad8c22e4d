"""Planar primitives: point clouds, convex hulls, hull-boundary sampling,
circumcircles, minimum enclosing balls and Delaunay triangulation.

All predicates are tolerance-based; coordinates are pixel-scale floats.
Orientation follows the usual mathematical convention (positive signed
area = counterclockwise), independent of how image rows are displayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay as _QhullDelaunay
from scipy.spatial import QhullError, cKDTree

from .errors import CollinearInput, DegenerateHull

# Points closer than this after ingestion are considered the same point.
DEDUP_TOL = 1e-9


def _dedup_keep_first(points: np.ndarray, tol: float) -> np.ndarray:
    """Indices of points to keep, dropping later points within `tol` of an
    earlier one. Clusters are resolved transitively (union-find)."""
    n = len(points)
    if n <= 1:
        return np.arange(n)
    pairs = cKDTree(points).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        return np.arange(n)
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the smaller (earlier) index as representative
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    keep = [i for i in range(n) if find(i) == i]
    return np.array(keep, dtype=int)


@dataclass(frozen=True)
class PointCloud:
    """A finite set of 2D points in pixel units.

    Construct via :meth:`from_points`, which enforces finiteness and removes
    duplicates within ``DEDUP_TOL`` (keeping first occurrences, so the point
    order of the source sequence is preserved).
    """

    points: np.ndarray  # (n, 2) float64

    @classmethod
    def from_points(cls, pts) -> "PointCloud":
        arr = np.asarray(pts, dtype=float)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("expected an (n, 2) array of points")
        if not np.all(np.isfinite(arr)):
            raise ValueError("point coordinates must be finite")
        keep = _dedup_keep_first(arr, DEDUP_TOL)
        out = np.array(arr[keep], dtype=float)
        out.setflags(write=False)
        return cls(points=out)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class HullPolygon:
    """Convex hull boundary: vertices in CCW order, anchor vertex first.

    The anchor is the vertex minimizing (y, then x). ``vertex_indices``
    point back into the source cloud.
    """

    vertices: np.ndarray        # (m, 2) float64, CCW, anchor first
    vertex_indices: np.ndarray  # (m,) int, indices into the source cloud

    @property
    def anchor_index(self) -> int:
        return int(self.vertex_indices[0])

    def edge_lengths(self) -> np.ndarray:
        nxt = np.roll(self.vertices, -1, axis=0)
        return np.hypot(*(nxt - self.vertices).T)

    def perimeter(self) -> float:
        return float(self.edge_lengths().sum())

    def signed_area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(cloud: PointCloud) -> HullPolygon:
    """Convex hull by monotone chain. Raises DegenerateHull for < 3 points
    or an all-collinear cloud. Strictly collinear points interior to hull
    edges are not reported as vertices."""
    pts = cloud.points
    n = len(pts)
    if n < 3:
        raise DegenerateHull(f"need at least 3 points, got {n}")
    order = np.lexsort((pts[:, 1], pts[:, 0]))  # by x, then y

    def half(indices):
        chain: list[int] = []
        for i in indices:
            while len(chain) >= 2 and _cross(pts[chain[-2]], pts[chain[-1]], pts[i]) <= 0.0:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(order[::-1])
    hull_idx = lower[:-1] + upper[:-1]
    if len(hull_idx) < 3:
        raise DegenerateHull("all points are collinear")
    # rotate so the (y, then x)-smallest vertex comes first; chain order is CCW
    hv = pts[hull_idx]
    anchor_pos = int(np.lexsort((hv[:, 0], hv[:, 1]))[0])
    hull_idx = hull_idx[anchor_pos:] + hull_idx[:anchor_pos]
    verts = np.array(pts[hull_idx], dtype=float)
    verts.setflags(write=False)
    return HullPolygon(vertices=verts, vertex_indices=np.array(hull_idx, dtype=int))


def sample_hull_boundary(hull: HullPolygon, interval: float) -> np.ndarray:
    """Points along the closed hull boundary at arc lengths 0, interval,
    2*interval, ... starting from the anchor vertex, traversing CCW.

    Count is max(1, floor(perimeter / interval)); the gap closing the walk
    back to the anchor absorbs the remainder.
    """
    if not interval > 0:
        raise ValueError("interval must be positive")
    verts = hull.vertices
    lengths = hull.edge_lengths()
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    perimeter = cum[-1]
    count = max(1, int(math.floor(perimeter / interval + 1e-9)))
    out = np.empty((count, 2), dtype=float)
    for k in range(count):
        s = k * interval
        e = int(np.searchsorted(cum, s, side="right")) - 1
        e = min(e, len(lengths) - 1)
        t = (s - cum[e]) / lengths[e]
        a = verts[e]
        b = verts[(e + 1) % len(verts)]
        out[k, 0] = a[0] + t * (b[0] - a[0])
        out[k, 1] = a[1] + t * (b[1] - a[1])
    return out


def circumcircle(a, b, c):
    """Circumcenter and circumradius of the triangle abc.

    Raises CollinearInput when twice the signed area is within
    1e-12 * scale^2 of zero (scale = bounding-box diagonal of the triple).
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]) - ax, float(b[1]) - ay
    cx, cy = float(c[0]) - ax, float(c[1]) - ay
    d = 2.0 * (bx * cy - by * cx)
    pts = np.array([[0.0, 0.0], [bx, by], [cx, cy]])
    span = pts.max(axis=0) - pts.min(axis=0)
    scale2 = span[0] ** 2 + span[1] ** 2
    if abs(d) <= 2e-12 * scale2:
        raise CollinearInput("circumcircle of (near-)collinear points")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return (ax + ux, ay + uy), math.hypot(ux, uy)


def half_distance(p, q) -> float:
    """Half the Euclidean distance. All filtration values derived from point
    pairs route through this one expression so that equal quantities come
    out bit-equal."""
    return 0.5 * math.hypot(float(q[0]) - float(p[0]), float(q[1]) - float(p[1]))


def min_enclosing_ball_radius(points) -> float:
    """Radius of the smallest ball enclosing 2 or 3 points.

    For 3 points: the circumradius if the triangle is non-obtuse, else half
    the longest edge. Collinear triples degrade to half the longest edge.
    """
    pts = list(points)
    if len(pts) == 2:
        return half_distance(pts[0], pts[1])
    if len(pts) != 3:
        raise ValueError("expected 2 or 3 points")
    halves = sorted(
        half_distance(pts[i], pts[j]) for i, j in ((0, 1), (0, 2), (1, 2))
    )
    # non-obtuse test on squared half-lengths
    if halves[2] ** 2 >= halves[0] ** 2 + halves[1] ** 2:
        return halves[2]
    _, radius = circumcircle(pts[0], pts[1], pts[2])
    return radius


def _incircle(pa, pb, pc, pd) -> float:
    """Incircle predicate: positive iff pd lies inside the circumcircle of
    the CCW triangle (pa, pb, pc)."""
    adx, ady = pa[0] - pd[0], pa[1] - pd[1]
    bdx, bdy = pb[0] - pd[0], pb[1] - pd[1]
    cdx, cdy = pc[0] - pd[0], pc[1] - pd[1]
    ad2 = adx * adx + ady * ady
    bd2 = bdx * bdx + bdy * bdy
    cd2 = cdx * cdx + cdy * cdy
    return (
        adx * (bdy * cd2 - cdy * bd2)
        - ady * (bdx * cd2 - cdx * bd2)
        + ad2 * (bdx * cdy - cdx * bdy)
    )


def _diag_key(pts, u, v):
    pu = (pts[u][0], pts[u][1])
    pv = (pts[v][0], pts[v][1])
    return (pu, pv) if pu <= pv else (pv, pu)


def delaunay_triangles(cloud: PointCloud) -> list[tuple[int, int, int]]:
    """Delaunay triangulation as sorted index triples.

    Near-cocircular quads (ties) are canonicalized deterministically: the
    chosen diagonal is the one whose lexicographically smallest endpoint
    (by coordinates) is smallest. Ties are resolved by edge flips processed
    in deterministic rounds, so the result is independent of the underlying
    Qhull output order.
    """
    if len(cloud) < 3:
        raise DegenerateHull(f"need at least 3 points, got {len(cloud)}")
    try:
        qh = _QhullDelaunay(cloud.points)
    except QhullError as exc:
        raise DegenerateHull("degenerate input (collinear points?)") from exc

    P = [(float(x), float(y)) for x, y in cloud.points]

    def degenerate(a, b, c) -> bool:
        # same relative collinearity cut as circumcircle(), with 2x margin;
        # Qhull emits such slivers for points lying exactly on hull chords
        xs = (a[0], b[0], c[0])
        ys = (a[1], b[1], c[1])
        scale2 = (max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2
        return abs(_cross(a, b, c)) <= 2e-12 * scale2

    tris = set()
    for s in qh.simplices:
        t = tuple(sorted(int(i) for i in s))
        if not degenerate(P[t[0]], P[t[1]], P[t[2]]):
            tris.add(t)
    if not tris:
        raise DegenerateHull("no non-degenerate triangles")

    def tri_edges(t):
        return ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))

    emap: dict[tuple[int, int], list] = {}
    for t in tris:
        for e in tri_edges(t):
            emap.setdefault(e, []).append(t)

    def key(i, j):
        return (P[i], P[j]) if P[i] <= P[j] else (P[j], P[i])

    # Canonicalize cocircular ties by flipping toward the preferred diagonal.
    # Each flip strictly decreases the flipped diagonal's key, so the
    # worklist drains. Rounds keep the processing order deterministic.
    dirty = sorted(emap)
    while dirty:
        requeue = set()
        for e in dirty:
            ts = emap.get(e)
            if ts is None or len(ts) != 2:
                continue
            u, v = e
            t1, t2 = ts
            c = t1[0] if t1[0] not in e else (t1[1] if t1[1] not in e else t1[2])
            d = t2[0] if t2[0] not in e else (t2[1] if t2[1] not in e else t2[2])
            pu, pv, pc, pd = P[u], P[v], P[c], P[d]
            if key(c, d) >= key(u, v):
                continue  # current diagonal already preferred
            xs = (pu[0], pv[0], pc[0], pd[0])
            ys = (pu[1], pv[1], pc[1], pd[1])
            scale = max(max(xs) - min(xs), max(ys) - min(ys), 1e-300)
            # orient (u, v, c) CCW before the incircle test
            if _cross(pu, pv, pc) > 0:
                pred = _incircle(pu, pv, pc, pd)
            else:
                pred = _incircle(pv, pu, pc, pd)
            if abs(pred) > 1e-9 * scale**4:
                continue  # not a tie
            # flip is valid only if u and v straddle line (c, d) strictly
            # and neither replacement triangle is degenerate
            s1 = _cross(pc, pd, pu)
            s2 = _cross(pc, pd, pv)
            if not (s1 * s2 < 0.0):
                continue
            if degenerate(pc, pd, pu) or degenerate(pc, pd, pv):
                continue
            new1 = tuple(sorted((c, d, u)))
            new2 = tuple(sorted((c, d, v)))
            tris.discard(t1)
            tris.discard(t2)
            tris.add(new1)
            tris.add(new2)
            del emap[e]
            diag = (c, d) if c < d else (d, c)
            emap[diag] = [new1, new2]
            requeue.add(diag)
            for old, rim, new in (
                (t1, (u, c), new1),
                (t1, (v, c), new2),
                (t2, (u, d), new1),
                (t2, (v, d), new2),
            ):
                re = rim if rim[0] < rim[1] else (rim[1], rim[0])
                emap[re] = [new if t is old or t == old else t for t in emap[re]]
                requeue.add(re)
        dirty = sorted(requeue)
    return sorted(tris)


def jitter_cloud(cloud: PointCloud, eps: float, seed: int = 0) -> PointCloud:
    """Deterministic per-index perturbation in [-eps, eps]^2 for breaking
    pathological cocircularities. Hash-based (splitmix64), so the result
    depends only on (points, eps, seed)."""
    if eps == 0:
        return cloud

    def mix(x: int) -> int:
        x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        return z ^ (z >> 31)

    pts = np.array(cloud.points, dtype=float)
    for i in range(len(pts)):
        hx = mix(seed * 0x100000001 + 2 * i)
        hy = mix(seed * 0x100000001 + 2 * i + 1)
        pts[i, 0] += eps * (2.0 * (hx / 2**64) - 1.0)
        pts[i, 1] += eps * (2.0 * (hy / 2**64) - 1.0)
    return PointCloud.from_points(pts)
