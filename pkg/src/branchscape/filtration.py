"""Filtered simplicial complexes over a planar point cloud.

Two constructions are provided: the 2D alpha complex (production path,
built on the Delaunay triangulation) and a brute-force Cech complex
(oracle path, exponential enumeration behind a size guard). Filtration
values are radii in pixels, not squared radii.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyCloud, TooLarge
from .geometry import (
    PointCloud,
    circumcircle,
    delaunay_triangles,
    half_distance,
    min_enclosing_ball_radius,
)
from .errors import DegenerateHull

Simplex = tuple  # sorted ascending vertex ids, length 1, 2 or 3

CECH_MAX_POINTS = 25


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices (dim <= 2) with real filtration radii.

    ``entries`` is sorted by (value, dim, ids) so faces precede cofaces at
    equal values, which is the order required for a valid reduction.
    """

    entries: tuple  # of (Simplex, float)

    def __len__(self) -> int:
        return len(self.entries)

    def simplices_of_dim(self, dim: int):
        return [(s, v) for s, v in self.entries if len(s) == dim + 1]

    def value_of(self) -> dict:
        return {s: v for s, v in self.entries}

    def validate(self) -> None:
        """Check face-closure, monotonicity and vertex values; for tests."""
        values = self.value_of()
        for s, v in self.entries:
            if len(s) == 1 and v != 0.0:
                raise AssertionError(f"vertex {s} has nonzero value {v}")
            if list(s) != sorted(set(s)):
                raise AssertionError(f"simplex ids not strictly increasing: {s}")
            if len(s) > 1:
                for face in combinations(s, len(s) - 1):
                    if face not in values:
                        raise AssertionError(f"missing face {face} of {s}")
                    if values[face] > v:
                        raise AssertionError(
                            f"monotonicity violated: {face}@{values[face]} > {s}@{v}"
                        )


def _sorted_entries(entries):
    entries.sort(key=lambda sv: (sv[1], len(sv[0]), sv[0]))
    return tuple(entries)


def _gabriel_edges_bruteforce(pts: np.ndarray) -> list:
    """All Gabriel pairs of a cloud (used on degenerate clouds with no
    triangulation). A pair is Gabriel when no third point lies strictly
    inside its open diametral disc."""
    n = len(pts)
    tree = cKDTree(pts)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            mid = 0.5 * (pts[i] + pts[j])
            r = half_distance(pts[i], pts[j])
            blocked = False
            for k in tree.query_ball_point(mid, r * (1 + 1e-9)):
                if k in (i, j):
                    continue
                d2 = float(np.dot(pts[k] - mid, pts[k] - mid))
                if d2 < r * r * (1 - 1e-12):
                    blocked = True
                    break
            if not blocked:
                out.append(((i, j), r))
    return out


def alpha_complex(cloud: PointCloud) -> FilteredComplex:
    """2D alpha complex of the cloud.

    Vertices enter at 0. Delaunay triangles enter at their circumradius.
    A Delaunay edge enters at half its length when Gabriel (open diametral
    disc empty of other cloud points), otherwise at the minimum of its
    incident triangles' values. Degenerate clouds (< 3 points or all
    collinear) yield vertices and Gabriel edges only.
    """
    pts = cloud.points
    n = len(pts)
    if n == 0:
        raise EmptyCloud("alpha complex of an empty cloud")
    entries = [((i,), 0.0) for i in range(n)]
    if n == 1:
        return FilteredComplex(entries=_sorted_entries(entries))

    try:
        tris = delaunay_triangles(cloud)
    except DegenerateHull:
        tris = None
    if tris is None:
        entries.extend(_gabriel_edges_bruteforce(pts))
        return FilteredComplex(entries=_sorted_entries(entries))

    tri_value = {}
    edge_min_tri: dict[tuple, float] = {}
    for t in tris:
        _, r = circumcircle(pts[t[0]], pts[t[1]], pts[t[2]])
        tri_value[t] = r
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            if e not in edge_min_tri or r < edge_min_tri[e]:
                edge_min_tri[e] = r

    tree = cKDTree(pts)
    for e, min_tri in edge_min_tri.items():
        i, j = e
        mid = 0.5 * (pts[i] + pts[j])
        half = half_distance(pts[i], pts[j])
        gabriel = True
        for k in tree.query_ball_point(mid, half * (1 + 1e-9)):
            if k in (i, j):
                continue
            d2 = float(np.dot(pts[k] - mid, pts[k] - mid))
            if d2 < half * half * (1 - 1e-12):
                gabriel = False
                break
        # clamp guards monotonicity against rounding when half == circumradius
        value = min(half, min_tri) if gabriel else min_tri
        entries.append((e, value))
    entries.extend((t, v) for t, v in tri_value.items())
    return FilteredComplex(entries=_sorted_entries(entries))


def cech_complex_brute_force(cloud: PointCloud, max_dim: int = 2) -> FilteredComplex:
    """Cech complex by full enumeration: every pair at half its distance,
    every triple at its minimum-enclosing-ball radius. Guarded to small
    clouds; this is the oracle side of the alpha construction."""
    pts = cloud.points
    n = len(pts)
    if n == 0:
        raise EmptyCloud("Cech complex of an empty cloud")
    if n > CECH_MAX_POINTS:
        raise TooLarge(f"brute-force Cech guard: {n} > {CECH_MAX_POINTS} points")
    if max_dim not in (1, 2):
        raise ValueError("max_dim must be 1 or 2")
    entries = [((i,), 0.0) for i in range(n)]
    half = {}
    for i, j in combinations(range(n), 2):
        half[i, j] = half_distance(pts[i], pts[j])
        entries.append(((i, j), half[i, j]))
    if max_dim == 2:
        for i, j, k in combinations(range(n), 3):
            r = min_enclosing_ball_radius((pts[i], pts[j], pts[k]))
            # clamp guards monotonicity against rounding in the circumradius
            r = max(r, half[i, j], half[i, k], half[j, k])
            entries.append(((i, j, k), r))
    return FilteredComplex(entries=_sorted_entries(entries))
