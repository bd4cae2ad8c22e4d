#!/usr/bin/env python3
"""Classifying loops as internal or external structures.

The method: plot points along the convex hull of the cloud at a fixed
arc-length interval, compute the dimension-1 persistence diagram with and
without those plots, and compare. Diagram points present in both runs are
internal structures; points that only exist after hull augmentation are
external structures (openings that the hull closes off).

Writes overlay figures next to this script:

    python3 demos/02_internal_external_classification.py
"""

import math
import os

from branchscape import AnalysisParams, analyze_cloud, count_by_class
from branchscape.fileio import write_overlay_svg
from branchscape.testkit import c_shape_cloud, ring_cloud

OUT_DIR = os.path.dirname(os.path.abspath(__file__))

# A closed ring keeps its cavity with or without hull plots -> internal.
# A C-shape's cavity only closes once the hull plots bridge the gap -> the
# augmented diagram has a new point with no partner -> external.
#
# match_tol = 2.0 px: plots on the hull sit on chords slightly inside a
# cavity whose boundary IS the hull, eroding its death radius by the chord
# sagitta (~0.7 px here); the genuinely-new C-shape point is ~20 px away
# from anything in the plain diagram, so the two cases stay separable.
params = AnalysisParams(
    hull_interval=20.0,
    match_tol=2.0,
    persistence_min_internal=5.0,
    persistence_min_external=5.0,
)

for name, cloud in [
    ("ring", ring_cloud(16, 50.0)),
    ("c_shape", c_shape_cloud(16, 50.0, math.pi / 4)),
]:
    result = analyze_cloud(cloud, params)
    counts = count_by_class(result.features, params)
    print(f"--- {name} ({len(cloud)} points, {len(result.hull_points)} hull plots)")
    print(f"    plain diagram    : {len(result.diagram_x.pairs)} pairs")
    print(f"    augmented diagram: {len(result.diagram_xu.pairs)} pairs")
    print(f"    counts           : {counts}")
    for f in result.features:
        if f.below_threshold:
            continue
        x, y = f.location
        print(
            f"    {f.label:8s} birth={f.pair.birth:7.3f} death={f.pair.death:7.3f}"
            f" persistence={f.pair.persistence:7.3f} at ({x:.1f}, {y:.1f})"
        )
    svg = os.path.join(OUT_DIR, f"{name}_overlay.svg")
    write_overlay_svg(result.cloud, result.hull_points, result.features, svg)
    print(f"    overlay written to {svg}")

print(
    "\nThe ring's single cavity matches across both diagrams (internal, blue"
    "\nmarker at the center); the C-shape's cavity appears only after the"
    "\nhull plots close its gap (external, red marker)."
)
