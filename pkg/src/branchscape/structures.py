"""Internal/external branch-structure classification.

The cloud's persistence diagram is compared against the diagram of the
cloud augmented with points sampled along its convex hull. Diagram points
present in both (up to a matching tolerance) are internal structures;
points appearing only after augmentation are external structures; points
of the plain diagram that disappear are reported as vanished. Features
are localized at the circumcenter of their death triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoDeathSimplex
from .geometry import PointCloud, circumcircle, convex_hull, sample_hull_boundary
from .filtration import alpha_complex
from .persistence import PersistenceDiagram, PersistencePair, compute_persistence

INTERNAL = "internal"
EXTERNAL = "external"
VANISHED = "vanished"


@dataclass(frozen=True)
class AnalysisParams:
    """Parameters of one classification run.

    hull_interval: arc-length spacing of the hull plots, pixels.
    match_tol: L-infinity tolerance for identifying diagram points across
        the two diagrams. The default only absorbs floating-point noise;
        features whose death triangle touches the hull shift by a visible
        amount under augmentation and need a looser tolerance.
    persistence_min_internal / persistence_min_external: class-specific
        persistence thresholds; features at or below are excluded from
        counts (but retained, marked below-threshold).
    """

    hull_interval: float
    match_tol: float = 1e-6
    persistence_min_internal: float = 0.0
    persistence_min_external: float = 0.0

    def __post_init__(self):
        if not self.hull_interval > 0:
            raise ValueError("hull_interval must be positive")
        if self.match_tol < 0:
            raise ValueError("match_tol must be nonnegative")
        if self.persistence_min_internal < 0 or self.persistence_min_external < 0:
            raise ValueError("persistence thresholds must be nonnegative")


@dataclass(frozen=True)
class ClassifiedFeature:
    pair: PersistencePair
    label: str  # INTERNAL, EXTERNAL or VANISHED
    location: tuple | None  # circumcenter of the death triangle
    below_threshold: bool
    # for internal features: the plain-diagram point this one matched;
    # unlike `pair` it does not depend on the hull interval
    matched_pair: PersistencePair | None = None


@dataclass
class AnalysisResult:
    cloud: PointCloud
    augmented: PointCloud
    hull_points: np.ndarray
    diagram_x: PersistenceDiagram
    diagram_xu: PersistenceDiagram
    features: list = field(default_factory=list)


def augment_with_hull(cloud: PointCloud, interval: float):
    """Cloud union hull samples (deduplicated against the cloud), plus the
    raw hull sample points for reporting."""
    hull = convex_hull(cloud)
    samples = sample_hull_boundary(hull, interval)
    augmented = PointCloud.from_points(np.vstack([cloud.points, samples]))
    return augmented, samples


def match_diagrams(pd_x: PersistenceDiagram, pd_xu: PersistenceDiagram, tol: float):
    """Greedy tolerant multiset matching of two diagrams.

    Both diagrams are sorted lexicographically by (birth, death); each
    augmented-diagram point consumes the first unconsumed plain-diagram
    point within L-infinity distance tol. Returns (matched, unmatched_x,
    unmatched_xu) where matched is a list of (pair_x, pair_xu).
    """
    if pd_x.dim != pd_xu.dim:
        raise ValueError("diagrams have different dimensions")
    xs = pd_x.sorted_pairs()
    xus = pd_xu.sorted_pairs()
    consumed = [False] * len(xs)
    matched = []
    unmatched_xu = []
    for q in xus:
        hit = None
        for i, p in enumerate(xs):
            if consumed[i]:
                continue
            if max(abs(p.birth - q.birth), abs(p.death - q.death)) <= tol:
                hit = i
                break
        if hit is None:
            unmatched_xu.append(q)
        else:
            consumed[hit] = True
            matched.append((xs[hit], q))
    unmatched_x = [p for i, p in enumerate(xs) if not consumed[i]]
    return matched, unmatched_x, unmatched_xu


def death_location(pair: PersistencePair, cloud: PointCloud) -> tuple:
    """Circumcenter of the pair's death triangle, in the coordinates of the
    cloud the pair was computed from."""
    if pair.death_simplex is None or len(pair.death_simplex) != 3:
        raise NoDeathSimplex("pair has no death triangle")
    a, b, c = (cloud.points[i] for i in pair.death_simplex)
    center, _ = circumcircle(a, b, c)
    return center


def analyze_cloud(cloud: PointCloud, params: AnalysisParams) -> AnalysisResult:
    """Run the full two-diagram comparison and classify every feature."""
    augmented, hull_points = augment_with_hull(cloud, params.hull_interval)
    diagram_x = compute_persistence(alpha_complex(cloud))
    diagram_xu = compute_persistence(alpha_complex(augmented))
    matched, unmatched_x, unmatched_xu = match_diagrams(
        diagram_x, diagram_xu, params.match_tol
    )

    def feature(pair, label, source_cloud, threshold, matched_pair=None):
        loc = None
        if pair.death_simplex is not None:
            loc = death_location(pair, source_cloud)
        return ClassifiedFeature(
            pair=pair,
            label=label,
            location=loc,
            below_threshold=not pair.persistence > threshold,
            matched_pair=matched_pair,
        )

    features = []
    # matched features keep the augmented computation's coordinates so all
    # internal/external locations come from one consistent complex
    for p, q in matched:
        features.append(
            feature(q, INTERNAL, augmented, params.persistence_min_internal, p)
        )
    for q in unmatched_xu:
        features.append(feature(q, EXTERNAL, augmented, params.persistence_min_external))
    for p in unmatched_x:
        features.append(feature(p, VANISHED, cloud, params.persistence_min_internal))
    features.sort(key=lambda f: (f.pair.birth, f.pair.death, f.label))
    return AnalysisResult(
        cloud=cloud,
        augmented=augmented,
        hull_points=hull_points,
        diagram_x=diagram_x,
        diagram_xu=diagram_xu,
        features=features,
    )


def classify_structures(cloud: PointCloud, params: AnalysisParams) -> list:
    """Classified features of the cloud (see :func:`analyze_cloud`)."""
    return analyze_cloud(cloud, params).features


def count_by_class(features, params: AnalysisParams) -> dict:
    """Counts of internal/external features above their persistence
    thresholds. Vanished features are reported but never counted."""
    internal = sum(
        1
        for f in features
        if f.label == INTERNAL and f.pair.persistence > params.persistence_min_internal
    )
    external = sum(
        1
        for f in features
        if f.label == EXTERNAL and f.pair.persistence > params.persistence_min_external
    )
    return {"internal": internal, "external": external}


def area_ratio(image) -> float:
    """Foreground pixel count divided by the area of the convex hull of the
    foreground pixel centers (the density baseline this method is compared
    against)."""
    pts = image.foreground_points()
    cloud = PointCloud.from_points(pts)
    hull = convex_hull(cloud)
    area = abs(hull.signed_area())
    return float(len(pts)) / area
