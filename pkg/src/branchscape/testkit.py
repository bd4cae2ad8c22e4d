"""Deterministic fixture generators and an independent diagram oracle.

Fixtures are pure functions of their spec. The oracle computes the
dimension-1 diagram of a small cloud through a code path sharing nothing
with the production reduction: brute-force Cech complex, GF(2) ranks of
the boundary and inclusion maps, and pairing by second differences of the
persistent rank function over the critical-value grid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec, TooLarge
from .filtration import cech_complex_brute_force
from .geometry import PointCloud
from .persistence import PersistenceDiagram, PersistencePair, gf2_rank

FIXTURE_KINDS = ("ring", "cShape", "figureEight", "fig4ThreeStage", "branchModel")


@dataclass(frozen=True)
class FixtureSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def load_fixture_spec(path: str) -> FixtureSpec:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return FixtureSpec(
        kind=doc.get("kind", ""),
        params=doc.get("params", {}),
        seed=int(doc.get("seed", 0)),
    )


def ring_cloud(n: int, radius: float, center=(0.0, 0.0), phase: float = 0.0) -> PointCloud:
    if n < 3 or radius <= 0:
        raise InvalidSpec("ring needs n >= 3 and radius > 0")
    ang = phase + 2.0 * math.pi * np.arange(n) / n
    pts = np.column_stack(
        [center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)]
    )
    return PointCloud.from_points(pts)


def c_shape_cloud(
    n: int,
    radius: float,
    gap: float,
    gap_center: float | None = None,
    center=(0.0, 0.0),
) -> PointCloud:
    """Ring minus an angular sector of width ``gap`` (radians). By default
    the sector is centered midway between two adjacent vertices, so a gap
    of 2*pi*k/n removes exactly k points."""
    if n < 3 or radius <= 0 or not 0 < gap < 2 * math.pi:
        raise InvalidSpec("cShape needs n >= 3, radius > 0, 0 < gap < 2*pi")
    if gap_center is None:
        gap_center = math.pi / n
    pts = []
    for k in range(n):
        ang = 2.0 * math.pi * k / n
        delta = (ang - gap_center + math.pi) % (2.0 * math.pi) - math.pi
        if abs(delta) < gap / 2.0:
            continue
        pts.append((center[0] + radius * math.cos(ang), center[1] + radius * math.sin(ang)))
    if len(pts) < 3:
        raise InvalidSpec("gap removes too many points")
    return PointCloud.from_points(pts)


def figure_eight_cloud(n_per_ring: int = 8, radius: float = 40.0) -> PointCloud:
    """Two tangent rings sharing the origin (the two-cavity fixture)."""
    if n_per_ring < 3 or radius <= 0:
        raise InvalidSpec("figureEight needs n_per_ring >= 3 and radius > 0")
    left = ring_cloud(n_per_ring, radius, center=(-radius, 0.0), phase=0.0)
    right = ring_cloud(n_per_ring, radius, center=(radius, 0.0), phase=math.pi)
    return PointCloud.from_points(np.vstack([left.points, right.points]))


def fig4_three_stage(n: int = 24, radius: float = 50.0) -> tuple:
    """Three staged clouds: (a) a ring with a left opening and a lower
    opening, (b) = (a) plus one point halving the left opening, (c) = (b)
    plus the two points that close the lower opening."""
    if n % 8 != 0 or n < 16:
        raise InvalidSpec("fig4ThreeStage needs n divisible by 8, n >= 16")
    step = 2.0 * math.pi / n
    left_gap = {n // 2 - 1, n // 2}          # around angle pi
    lower_gap = {3 * n // 4 - 1, 3 * n // 4}  # around angle 3*pi/2

    def pt(ang):
        return (radius * math.cos(ang), radius * math.sin(ang))

    base = [pt(k * step) for k in range(n) if k not in left_gap | lower_gap]
    stage_a = PointCloud.from_points(np.array(base))
    left_center = (n // 2 - 0.5) * step
    stage_b = PointCloud.from_points(np.array(base + [pt(left_center)]))
    closing = [pt(k * step) for k in sorted(lower_gap)]
    stage_c = PointCloud.from_points(np.array(base + [pt(left_center)] + closing))
    return stage_a, stage_b, stage_c


def _branch_segments(arm_length: float, center=(70.0, 70.0)):
    cx, cy = center
    out = []
    for deg in (90.0, 210.0, 330.0):
        a = math.radians(deg)
        out.append(((cx, cy), (cx + arm_length * math.cos(a), cy + arm_length * math.sin(a))))
    return out


def _distance_to_segment(px, py, seg) -> float:
    (ax, ay), (bx, by) = seg
    vx, vy = bx - ax, by - ay
    t = ((px - ax) * vx + (py - ay) * vy) / (vx * vx + vy * vy)
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def branch_model_image(width: float, arm_length: float = 55.0, canvas: int = 140):
    """Y-shaped strokes rasterized at the given stroke width: a pixel is
    foreground when its center lies within width/2 of the stroke skeleton.
    Returns a BinaryImage."""
    from .fileio import BinaryImage

    if width <= 0:
        raise InvalidSpec("branchModel needs width > 0")
    segs = _branch_segments(arm_length, center=(canvas / 2.0, canvas / 2.0))
    mask = np.zeros((canvas, canvas), dtype=bool)
    half = width / 2.0
    for row in range(canvas):
        for col in range(canvas):
            d = min(_distance_to_segment(float(col), float(row), s) for s in segs)
            if d <= half:
                mask[row, col] = True
    return BinaryImage(width=canvas, height=canvas, mask=mask)


def branch_model_cloud(width: float, arm_length: float = 55.0, canvas: int = 140) -> PointCloud:
    img = branch_model_image(width, arm_length=arm_length, canvas=canvas)
    return PointCloud.from_points(img.foreground_points())


def generate_fixture(spec: FixtureSpec) -> PointCloud:
    """Deterministic cloud for a fixture spec. fig4ThreeStage takes a
    ``stage`` parameter ("a", "b" or "c")."""
    p = dict(spec.params)
    try:
        if spec.kind == "ring":
            return ring_cloud(
                int(p.get("n", 16)), float(p.get("radius", 50.0)),
                phase=float(p.get("phase", 0.0)),
            )
        if spec.kind == "cShape":
            return c_shape_cloud(
                int(p.get("n", 16)),
                float(p.get("radius", 50.0)),
                float(p.get("gap", math.pi / 4)),
            )
        if spec.kind == "figureEight":
            return figure_eight_cloud(
                int(p.get("n_per_ring", 8)), float(p.get("radius", 40.0))
            )
        if spec.kind == "fig4ThreeStage":
            stages = fig4_three_stage(
                int(p.get("n", 24)), float(p.get("radius", 50.0))
            )
            stage = str(p.get("stage", "a"))
            try:
                return stages["abc".index(stage)]
            except ValueError:
                raise InvalidSpec(f"stage must be a, b or c, got {stage!r}")
        if spec.kind == "branchModel":
            return branch_model_cloud(
                float(p.get("width", 1.0)),
                arm_length=float(p.get("arm_length", 55.0)),
                canvas=int(p.get("canvas", 140)),
            )
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad parameters for {spec.kind}: {exc}") from exc
    raise InvalidSpec(f"unknown fixture kind {spec.kind!r} (one of {FIXTURE_KINDS})")


# --------------------------------------------------------------------------
# independent diagram oracle

ORACLE_MAX_POINTS = 10


def brute_force_diagram_oracle(cloud: PointCloud) -> PersistenceDiagram:
    """Dimension-1 diagram via persistent GF(2) ranks on the brute-force
    Cech complex.

    For radii r <= s, the persistent Betti number is
        beta(r, s) = dim Z1(r) - dim(Z1(r) cap B1(s))
    with dim Z1(r) = #edges(r) - rank d1(r) and
        dim(Z1(r) cap B1(s)) = rank d2(s) - rank(d2(s) restricted to the
                                                 rows of edges absent at r).
    The multiplicity of a diagram point (b, d) over the critical-value grid
    is the inclusion-exclusion second difference of beta, which handles
    simultaneous critical values and nested bars without any pairing
    heuristics.
    """
    if len(cloud) > ORACLE_MAX_POINTS:
        raise TooLarge(f"oracle guard: {len(cloud)} > {ORACLE_MAX_POINTS} points")
    cx = cech_complex_brute_force(cloud)
    edges = [(s, v) for s, v in cx.entries if len(s) == 2]
    tris = [(s, v) for s, v in cx.entries if len(s) == 3]
    edge_row = {s: i for i, (s, _) in enumerate(edges)}
    criticals = sorted({v for _, v in cx.entries})

    def dim_z1(r: float) -> int:
        cols = [(1 << s[0]) | (1 << s[1]) for s, v in edges if v <= r]
        return len(cols) - gf2_rank(cols)

    def boundary_cols(s_limit: float) -> list:
        return [
            (1 << edge_row[(s[0], s[1])])
            | (1 << edge_row[(s[0], s[2])])
            | (1 << edge_row[(s[1], s[2])])
            for s, v in tris
            if v <= s_limit
        ]

    z1_cache: dict = {}
    rank2_cache: dict = {}

    def beta(r: float, s: float) -> int:
        """Persistent Betti number from radius r to radius s (r <= s)."""
        if r < 0:
            return 0
        if r not in z1_cache:
            z1_cache[r] = dim_z1(r)
        z1 = z1_cache[r]
        key = (r, s)
        if key not in rank2_cache:
            cols = boundary_cols(s)
            full = gf2_rank(cols)
            late_rows = 0
            for i, (_, v) in enumerate(edges):
                if v > r:
                    late_rows |= 1 << i
            cut = gf2_rank([c & late_rows for c in cols])
            rank2_cache[key] = full - cut
        return z1 - rank2_cache[key]

    # births can only happen when edges arrive; deaths only when triangles do
    birth_vals = sorted({v for _, v in edges})
    death_vals = sorted({v for _, v in tris})
    idx = {v: i for i, v in enumerate(criticals)}

    def prev_critical(v: float) -> float:
        i = idx[v]
        return criticals[i - 1] if i > 0 else -1.0

    pairs = []
    for b in birth_vals:
        b_prev = prev_critical(b)

        def born_alive(d_prime: float) -> int:
            # bars born exactly at b and still alive at d' (non-increasing)
            return beta(b, d_prime) - beta(b_prev, d_prime)

        g = born_alive(b)
        if g <= 0:
            continue
        dvals = [d for d in death_vals if d > b]
        # bars never killed by any triangle are infinite (cannot happen for
        # a full Cech complex, kept for completeness)
        final = born_alive(dvals[-1]) if dvals else g
        lo = 0
        while g > final:
            # binary search the leftmost drop below the current level g
            a, z = lo, len(dvals) - 1
            while a < z:
                mid = (a + z) // 2
                if born_alive(dvals[mid]) < g:
                    z = mid
                else:
                    a = mid + 1
            d = dvals[a]
            g_new = born_alive(d)
            pairs.extend(
                PersistencePair(birth=b, death=d, dim=1) for _ in range(g - g_new)
            )
            g = g_new
            lo = a + 1
        pairs.extend(
            PersistencePair(birth=b, death=math.inf, dim=1) for _ in range(final)
        )
    pairs.sort(key=lambda p: (p.birth, p.death))
    return PersistenceDiagram(dim=1, pairs=pairs)
