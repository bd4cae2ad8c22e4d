"""File ingestion (CSV / PGM / PNG), JSON report and diagram serialization,
and SVG overlay output.

All reals are serialized with 17 significant digits and every array is
emitted in a deterministic order, so identical inputs produce byte-identical
output files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCloud, ParseError
from .geometry import PointCloud
from .persistence import PersistenceDiagram
from .structures import EXTERNAL, INTERNAL

DEFAULT_BINARIZE_THRESHOLD = 128.0

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class BinaryImage:
    """A binarized raster: foreground mask in row-major order, pixel (col,
    row) maps to the point (x=col, y=row) with y increasing downward."""

    width: int
    height: int
    mask: np.ndarray  # (height, width) bool

    def foreground_points(self, stride: int = 1) -> np.ndarray:
        """Foreground pixel centers in row-major order, keeping every
        stride-th one."""
        if stride < 1:
            raise ValueError("stride must be >= 1")
        rows, cols = np.nonzero(self.mask)
        pts = np.column_stack([cols.astype(float), rows.astype(float)])
        return pts[::stride]


# --------------------------------------------------------------------------
# ingestion


def _parse_csv(text: str) -> np.ndarray:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 'x,y', got {raw!r}", line=lineno)
        try:
            pts.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {raw!r}", line=lineno)
    return np.array(pts, dtype=float).reshape(-1, 2)


def _parse_pgm(data: bytes) -> np.ndarray:
    """P2 (ASCII) / P5 (binary) PGM to a float grayscale array scaled to
    0..255."""
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            if data[pos : pos + 1].isspace():
                pos += 1
            elif data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ParseError("unexpected end of PGM header", offset=start)
        return data[start:pos]

    magic = token()
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"not a PGM file (magic {magic!r})", offset=0)
    try:
        width = int(token())
        height = int(token())
        maxval = int(token())
    except ValueError:
        raise ParseError("malformed PGM header", offset=pos)
    if width < 1 or height < 1 or maxval < 1:
        raise ParseError("non-positive PGM dimensions", offset=pos)
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        bpp = 1 if maxval < 256 else 2
        need = width * height * bpp
        raw = data[pos : pos + need]
        if len(raw) != need:
            raise ParseError(
                f"PGM pixel data truncated ({len(raw)} of {need} bytes)", offset=pos
            )
        dt = np.uint8 if bpp == 1 else np.dtype(">u2")
        gray = np.frombuffer(raw, dtype=dt).astype(float).reshape(height, width)
    else:
        values = []
        while len(values) < width * height:
            try:
                values.append(int(token()))
            except ParseError:
                raise ParseError(
                    f"PGM pixel data truncated ({len(values)} of {width * height})",
                    offset=pos,
                )
        gray = np.array(values, dtype=float).reshape(height, width)
    return gray * (255.0 / maxval)


def _load_png_gray(path: str) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as img:
        if img.mode == "L":
            return np.asarray(img, dtype=float)
        if img.mode in ("I;16", "I;16B", "I;16L"):
            return np.asarray(img, dtype=float) * (255.0 / 65535.0)
        rgb = np.asarray(img.convert("RGB"), dtype=float)
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def load_binary_image(
    path: str, fmt: str, threshold: float = DEFAULT_BINARIZE_THRESHOLD
) -> BinaryImage:
    """Read a PGM or PNG file and binarize at the luminance threshold
    (foreground iff luminance >= threshold, default 128 on a 0..255 scale)."""
    if fmt == "pgm":
        with open(path, "rb") as fh:
            gray = _parse_pgm(fh.read())
    elif fmt == "png":
        gray = _load_png_gray(path)
    else:
        raise ValueError(f"not an image format: {fmt!r}")
    mask = gray >= threshold
    return BinaryImage(width=mask.shape[1], height=mask.shape[0], mask=mask)


def load_point_cloud(
    path: str,
    fmt: str,
    threshold: float = DEFAULT_BINARIZE_THRESHOLD,
    stride: int = 1,
) -> PointCloud:
    """Read a point cloud from a CSV file ("x,y" per line, '#' comments) or
    from the foreground pixels of a PGM/PNG image."""
    if fmt == "csv":
        with open(path, "r", encoding="utf-8") as fh:
            pts = _parse_csv(fh.read())
        if stride > 1:
            pts = pts[::stride]
    elif fmt in ("pgm", "png"):
        pts = load_binary_image(path, fmt, threshold).foreground_points(stride)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if len(pts) == 0:
        raise EmptyCloud(f"no points in {path}")
    return PointCloud.from_points(pts)


# --------------------------------------------------------------------------
# JSON emission (deterministic, 17 significant digits)


def format_real(x: float) -> str:
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def _to_json(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_real(float(obj)))
    elif isinstance(obj, str):
        out.append(
            '"'
            + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
            + '"'
        )
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            _to_json(str(k), out)
            out.append(": ")
            _to_json(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _to_json(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_json(obj) -> str:
    out: list = []
    _to_json(obj, out)
    return "".join(out)


def float_from_json(v) -> float:
    # infinities are serialized as the strings "inf" / "-inf"
    return float(v)


# --------------------------------------------------------------------------
# reports


@dataclass
class AnalysisReport:
    parameters: dict
    hull_points: np.ndarray
    diagram_x: PersistenceDiagram
    diagram_xu: PersistenceDiagram
    features: list
    counts: dict
    area_ratio: float | None = None
    lambda1_sq_integral: float | None = None


def _diagram_pairs_sorted(diagram: PersistenceDiagram) -> list:
    return [[p.birth, p.death] for p in diagram.sorted_pairs()]


def report_to_dict(report: AnalysisReport, units: str = "radius") -> dict:
    """JSON-ready dict of a report. With units='radius2' every birth/death
    is squared on output (the computation itself always runs on radii)."""
    if units not in ("radius", "radius2"):
        raise ValueError(f"unknown units {units!r}")

    def u(x: float) -> float:
        return x * x if units == "radius2" else x

    features = sorted(
        report.features, key=lambda f: (f.pair.birth, f.pair.death, f.label)
    )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "units": units,
        "parameters": report.parameters,
        "hull_points": [[float(p[0]), float(p[1])] for p in report.hull_points],
        "diagram_x": [[u(b), u(d)] for b, d in _diagram_pairs_sorted(report.diagram_x)],
        "diagram_xu": [
            [u(b), u(d)] for b, d in _diagram_pairs_sorted(report.diagram_xu)
        ],
        "features": [
            {
                "class": f.label,
                "birth": u(f.pair.birth),
                "death": u(f.pair.death),
                "persistence": u(f.pair.death) - u(f.pair.birth),
                "location": (
                    [float(f.location[0]), float(f.location[1])]
                    if f.location is not None
                    else None
                ),
                "below_threshold": f.below_threshold,
            }
            for f in features
        ],
        "counts": {
            "internal": report.counts["internal"],
            "external": report.counts["external"],
        },
    }
    if report.area_ratio is not None:
        doc["area_ratio"] = report.area_ratio
    if report.lambda1_sq_integral is not None:
        doc["lambda1_sq_integral"] = report.lambda1_sq_integral
    return doc


def write_report(report: AnalysisReport, path: str, units: str = "radius") -> None:
    text = dumps_json(report_to_dict(report, units=units)) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# diagram / landscape JSON

def diagram_to_dict(diagram: PersistenceDiagram) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": diagram.dim,
        "pairs": [[p.birth, p.death] for p in diagram.sorted_pairs()],
    }


def write_diagram(diagram: PersistenceDiagram, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(diagram_to_dict(diagram)) + "\n")


def diagram_pairs_from_dict(doc: dict) -> list:
    """Accepts either a diagram document ({"pairs": ...}) or a full analysis
    report (uses its "diagram_xu")."""
    if "pairs" in doc:
        raw = doc["pairs"]
    elif "diagram_xu" in doc:
        raw = doc["diagram_xu"]
    else:
        raise ParseError("no 'pairs' or 'diagram_xu' key in diagram JSON")
    return [(float_from_json(b), float_from_json(d)) for b, d in raw]


def landscape_to_dict(ls) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "levels": [
            [[float(t), float(v)] for t, v in fn.breakpoints] for fn in ls.levels
        ],
    }


def glandscape_to_dict(gl) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "theta": gl.theta,
        "y": gl.y_shift,
        "pos_levels": landscape_to_dict(gl.pos)["levels"],
        "neg_levels": landscape_to_dict(gl.neg)["levels"],
    }


def landscape_from_dict(doc: dict):
    from .landscape import GeneralizedLandscape, Landscape, PiecewiseLinearFn

    def levels_of(key):
        fns = []
        for level in doc.get(key, []):
            arr = np.array([[float(t), float(v)] for t, v in level], dtype=float)
            arr = arr.reshape(-1, 2)
            arr.setflags(write=False)
            fns.append(PiecewiseLinearFn(breakpoints=arr))
        return tuple(fns)

    if "pos_levels" in doc or "neg_levels" in doc:
        return GeneralizedLandscape(
            theta=float(doc.get("theta", math.pi / 4)),
            y_shift=float(doc.get("y", 0.0)),
            pos=Landscape(levels=levels_of("pos_levels")),
            neg=Landscape(levels=levels_of("neg_levels")),
        )
    return Landscape(levels=levels_of("levels"))


# --------------------------------------------------------------------------
# SVG overlay


def write_overlay_svg(cloud, hull_points, features, path: str) -> None:
    """Overlay figure in image coordinates (y down): gray dots for cloud
    points, hollow markers for hull plots, red/blue filled circles at the
    external/internal feature locations (features below threshold are not
    drawn), plus a small legend."""
    pts = cloud.points
    xs = list(pts[:, 0]) + [float(p[0]) for p in hull_points]
    ys = list(pts[:, 1]) + [float(p[1]) for p in hull_points]
    if not xs:
        xs, ys = [0.0], [0.0]
    margin = 10.0
    x0, x1 = min(xs) - margin, max(xs) + margin
    y0, y1 = min(ys) - margin, max(ys) + margin
    w, h = x1 - x0, y1 - y0

    def fmt(v: float) -> str:
        return f"{v:.3f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(x0)} {fmt(y0)} '
        f'{fmt(w)} {fmt(h + 18)}" width="640" height="640">',
        f'<rect x="{fmt(x0)}" y="{fmt(y0)}" width="{fmt(w)}" height="{fmt(h + 18)}" fill="white"/>',
    ]
    for p in pts:
        lines.append(
            f'<circle cx="{fmt(p[0])}" cy="{fmt(p[1])}" r="1.2" fill="#888888"/>'
        )
    for p in hull_points:
        lines.append(
            f'<circle cx="{fmt(float(p[0]))}" cy="{fmt(float(p[1]))}" r="2.0" '
            'fill="none" stroke="#444444" stroke-width="0.6"/>'
        )
    for f in sorted(features, key=lambda f: (f.pair.birth, f.pair.death, f.label)):
        if f.location is None or f.below_threshold:
            continue
        if f.label == EXTERNAL:
            color = "#d62728"
        elif f.label == INTERNAL:
            color = "#1f77b4"
        else:
            continue
        lines.append(
            f'<circle cx="{fmt(float(f.location[0]))}" cy="{fmt(float(f.location[1]))}" '
            f'r="3.0" fill="{color}" fill-opacity="0.85"/>'
        )
    ly = y1 + 10
    legend = [
        ("#888888", "cloud"),
        ("#444444", "hull plots"),
        ("#1f77b4", "internal"),
        ("#d62728", "external"),
    ]
    lx = x0 + 4
    for color, label in legend:
        lines.append(f'<circle cx="{fmt(lx)}" cy="{fmt(ly)}" r="3.0" fill="{color}"/>')
        lines.append(
            f'<text x="{fmt(lx + 5)}" y="{fmt(ly + 2.5)}" font-size="8" '
            f'font-family="sans-serif" fill="#222222">{label}</text>'
        )
        lx += float(w) / 4.0
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
