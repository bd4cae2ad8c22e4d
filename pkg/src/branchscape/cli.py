"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 input/parse error, 4 degenerate
geometry.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import fileio, landscape as lsc, structures
from .errors import (
    BranchscapeError,
    CollinearInput,
    DegenerateHull,
    EmptyCloud,
    ParseError,
)
from .filtration import alpha_complex
from .geometry import jitter_cloud
from .persistence import compute_persistence

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_GEOMETRY = 4


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="input file")
    p.add_argument(
        "--format", required=True, choices=("csv", "pgm", "png"), help="input format"
    )
    p.add_argument(
        "--binarize-threshold",
        type=float,
        default=fileio.DEFAULT_BINARIZE_THRESHOLD,
        help="foreground luminance threshold for images (default 128)",
    )
    p.add_argument(
        "--stride",
        type=int,
        default=1,
        help="keep every Nth foreground pixel, row-major (default 1 = all)",
    )
    p.add_argument(
        "--jitter",
        type=float,
        default=0.0,
        help="deterministic per-index perturbation radius for pathological "
        "inputs (default 0 = off)",
    )


def _load_cloud(args):
    cloud = fileio.load_point_cloud(
        args.input, args.format, threshold=args.binarize_threshold, stride=args.stride
    )
    if args.jitter:
        cloud = jitter_cloud(cloud, args.jitter)
    return cloud


def _cmd_analyze(args) -> int:
    cloud = _load_cloud(args)
    pmin_int = (
        args.persistence_min_internal
        if args.persistence_min_internal is not None
        else args.persistence_min
    )
    pmin_ext = (
        args.persistence_min_external
        if args.persistence_min_external is not None
        else args.persistence_min
    )
    params = structures.AnalysisParams(
        hull_interval=args.hull_interval,
        match_tol=args.match_tol,
        persistence_min_internal=pmin_int if args.units == "radius" else 0.0,
        persistence_min_external=pmin_ext if args.units == "radius" else 0.0,
    )
    result = structures.analyze_cloud(cloud, params)
    features = result.features
    if args.units == "radius2":
        # re-flag and count on squared-unit persistences
        def sq_pers(pair):
            return pair.death * pair.death - pair.birth * pair.birth

        relabeled = []
        for f in features:
            thr = pmin_ext if f.label == structures.EXTERNAL else pmin_int
            relabeled.append(
                structures.ClassifiedFeature(
                    pair=f.pair,
                    label=f.label,
                    location=f.location,
                    below_threshold=not sq_pers(f.pair) > thr,
                )
            )
        features = relabeled
        counts = {
            "internal": sum(
                1
                for f in features
                if f.label == structures.INTERNAL and not f.below_threshold
            ),
            "external": sum(
                1
                for f in features
                if f.label == structures.EXTERNAL and not f.below_threshold
            ),
        }
    else:
        counts = structures.count_by_class(features, params)

    area_ratio = None
    if args.area_ratio:
        if args.format == "csv":
            print("--area-ratio requires an image input (pgm/png)", file=sys.stderr)
            return EXIT_USAGE
        image = fileio.load_binary_image(
            args.input, args.format, threshold=args.binarize_threshold
        )
        area_ratio = structures.area_ratio(image)

    lambda1_sq = None
    if args.landscape_integral:
        internal_pairs = [
            (f.pair.birth, f.pair.death)
            for f in features
            if f.label == structures.INTERNAL and not f.below_threshold
        ]
        lambda1_sq = lsc.integral_of_square(lsc.build_landscape(internal_pairs))

    report = fileio.AnalysisReport(
        parameters={
            "input": args.input,
            "format": args.format,
            "hull_interval": args.hull_interval,
            "match_tol": args.match_tol,
            "persistence_min_internal": pmin_int,
            "persistence_min_external": pmin_ext,
            "units": args.units,
            "binarize_threshold": args.binarize_threshold,
            "stride": args.stride,
            "jitter": args.jitter,
        },
        hull_points=result.hull_points,
        diagram_x=result.diagram_x,
        diagram_xu=result.diagram_xu,
        features=features,
        counts=counts,
        area_ratio=area_ratio,
        lambda1_sq_integral=lambda1_sq,
    )
    if args.out_json:
        fileio.write_report(report, args.out_json, units=args.units)
    if args.out_svg:
        fileio.write_overlay_svg(
            result.cloud, result.hull_points, features, args.out_svg
        )
    print(
        f"internal={counts['internal']} external={counts['external']} "
        f"vanished={sum(1 for f in features if f.label == structures.VANISHED)}"
    )
    return EXIT_OK


def _cmd_diagram(args) -> int:
    cloud = _load_cloud(args)
    if args.augment_hull is not None:
        cloud, _ = structures.augment_with_hull(cloud, args.augment_hull)
    diagram = compute_persistence(alpha_complex(cloud))
    fileio.write_diagram(diagram, args.out_json)
    print(f"pairs={len(diagram)}")
    return EXIT_OK


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc}") from exc


def _cmd_landscape(args) -> int:
    pairs = fileio.diagram_pairs_from_dict(_read_json(args.diagram))
    ls = lsc.build_landscape(pairs)
    doc = fileio.landscape_to_dict(ls)
    if args.integral_of_square:
        doc["integral_of_square"] = lsc.integral_of_square(ls)
    with open(args.out_json, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(fileio.dumps_json(doc) + "\n")
    print(f"levels={ls.level_count()}")
    return EXIT_OK


def _cmd_glandscape(args) -> int:
    pairs = fileio.diagram_pairs_from_dict(_read_json(args.diagram))
    gl = lsc.build_generalized_landscape(pairs, args.theta, args.y)
    with open(args.out_json, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(fileio.dumps_json(fileio.glandscape_to_dict(gl)) + "\n")
    print(f"pos_levels={gl.pos.level_count()} neg_levels={gl.neg.level_count()}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    inp = fileio.landscape_from_dict(_read_json(args.input))
    groups = [fileio.landscape_from_dict(_read_json(g)) for g in args.groups]
    index = lsc.classify_by_nearest_average(inp, groups)
    print(index)
    return EXIT_OK


def _cmd_derivcheck(args) -> int:
    doc = _read_json(args.scenario)
    mode = doc.get("mode", "points")
    vels = doc.get("velocities", {})
    report = lsc.derivative_check(
        doc["diagram"],
        doc["groups"],
        velocities=vels.get("diagram"),
        group_velocities=vels.get("groups"),
        mode=mode,
        theta=float(doc.get("theta", math.pi / 4)),
        y=float(doc.get("y", 0.0)),
        scale=doc.get("scale"),
    )
    print(f"mode={report['mode']} d(0)={report['distance_at_zero']:.12g}")
    print(f"{'eps':>16} {'forward':>18} {'backward':>18}")
    for e, f, b in zip(
        report["epsilons"], report["forward_slopes"], report["backward_slopes"]
    ):
        print(f"{e:>16.10g} {f:>18.12g} {b:>18.12g}")
    print(f"limit_estimate={report['limit_estimate']:.12g}")
    print(f"converged={str(report['converged']).lower()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchscape",
        description="Classify branch structures in 2D point clouds as "
        "internal or external by comparing persistence diagrams computed "
        "with and without points plotted on the convex hull.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full internal/external classification")
    _add_input_args(p)
    p.add_argument("--hull-interval", type=float, required=True,
                   help="arc-length spacing of hull plots, pixels")
    p.add_argument("--persistence-min", type=float, default=0.0,
                   help="persistence threshold for both classes")
    p.add_argument("--persistence-min-internal", type=float, default=None,
                   help="override threshold for internal structures")
    p.add_argument("--persistence-min-external", type=float, default=None,
                   help="override threshold for external structures")
    p.add_argument("--match-tol", type=float, default=1e-6,
                   help="diagram matching tolerance, pixels (default 1e-6)")
    p.add_argument("--out-json", default=None, help="write the report here")
    p.add_argument("--out-svg", default=None, help="write an overlay figure here")
    p.add_argument("--area-ratio", action="store_true",
                   help="also report foreground area over hull area")
    p.add_argument("--landscape-integral", action="store_true",
                   help="also report the squared-first-level landscape "
                   "integral of the internal structures")
    p.add_argument("--units", choices=("radius", "radius2"), default="radius",
                   help="output units for birth/death; persistence "
                   "thresholds are interpreted in these units (default radius)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("diagram", help="raw dimension-1 persistence diagram")
    _add_input_args(p)
    p.add_argument("--augment-hull", type=float, default=None,
                   help="augment with hull plots at this interval first")
    p.add_argument("--out-json", required=True)
    p.set_defaults(func=_cmd_diagram)

    p = sub.add_parser("landscape", help="persistence landscape of a diagram JSON")
    p.add_argument("--diagram", required=True, help="diagram JSON file")
    p.add_argument("--out-json", required=True)
    p.add_argument("--integral-of-square", action="store_true",
                   help="include the integral of the squared first level")
    p.set_defaults(func=_cmd_landscape)

    p = sub.add_parser("glandscape", help="generalized landscape of a diagram JSON")
    p.add_argument("--diagram", required=True, help="diagram JSON file")
    p.add_argument("--theta", type=float, required=True, help="baseline angle, radians")
    p.add_argument("--y", type=float, required=True, help="baseline vertical shift")
    p.add_argument("--out-json", required=True)
    p.set_defaults(func=_cmd_glandscape)

    p = sub.add_parser("classify", help="nearest-average landscape classification")
    p.add_argument("--input", required=True, help="landscape JSON to classify")
    p.add_argument("--groups", required=True, nargs="+",
                   help="group-average landscape JSON files")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("derivcheck",
                       help="two-sided secant slopes of the landscape distance")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.set_defaults(func=_cmd_derivcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (DegenerateHull, CollinearInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (ParseError, EmptyCloud, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BranchscapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
