"""Objective classification of branch structures in 2D point clouds.

Persistence diagrams are computed with and without points plotted along
the convex hull of the cloud; diagram points present in both are internal
structures, points appearing only after augmentation are external
structures. Persistence-landscape analytics (including a two-parameter
re-baselined generalization) operate on the resulting diagrams.
"""

from .errors import (
    BranchscapeError,
    CollinearInput,
    DegenerateHull,
    EmptyCloud,
    InfinitePair,
    InvalidSpec,
    NoDeathSimplex,
    ParameterMismatch,
    ParseError,
    SeparationTooSmall,
    TooLarge,
)
from .geometry import (
    HullPolygon,
    PointCloud,
    circumcircle,
    convex_hull,
    delaunay_triangles,
    jitter_cloud,
    min_enclosing_ball_radius,
    sample_hull_boundary,
)
from .filtration import FilteredComplex, alpha_complex, cech_complex_brute_force
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    betti_curve,
    compute_persistence,
    representative_cycle,
)
from .structures import (
    EXTERNAL,
    INTERNAL,
    VANISHED,
    AnalysisParams,
    ClassifiedFeature,
    analyze_cloud,
    area_ratio,
    augment_with_hull,
    classify_structures,
    count_by_class,
    death_location,
    match_diagrams,
)
from .landscape import (
    GeneralizedLandscape,
    Landscape,
    PiecewiseLinearFn,
    average,
    build_generalized_landscape,
    build_landscape,
    classify_by_nearest_average,
    derivative_check,
    evaluate,
    integral_of_square,
    l2_distance,
    linear_combination,
    recover_diagram,
    recover_generalized_diagram,
)
from .fileio import (
    AnalysisReport,
    BinaryImage,
    load_binary_image,
    load_point_cloud,
    write_overlay_svg,
    write_report,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
