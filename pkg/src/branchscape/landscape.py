"""Persistence landscapes as exact piecewise-linear objects.

Levels are never grid-sampled: construction, algebra, norms and integrals
all work on breakpoints, so the diagram-recovery round trip and the
identity between the ordinary landscape and the generalized landscape at
baseline (pi/4, 0) hold exactly (up to float arithmetic), not just on a
mesh.

The generalized landscape re-baselines the diagram: translate by -y along
the vertical axis, rotate by (pi/4 - theta) about the origin, then build
one level family from the points on or above the diagonal and a second
(negative-index) family from the coordinate-swapped points below it.
"""

from __future__ import annotations

import math
from bisect import insort_right
from dataclasses import dataclass

import numpy as np

from .errors import InfinitePair, ParameterMismatch, SeparationTooSmall
from .persistence import PersistenceDiagram


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """A piecewise-linear function given by breakpoints (t, v), zero outside
    [first t, last t]. Breakpoint abscissae are strictly increasing and the
    first and last values are zero, so np.interp's edge clamping agrees
    with the zero extension."""

    breakpoints: np.ndarray  # (m, 2) float64

    def value(self, t: float) -> float:
        bp = self.breakpoints
        if len(bp) == 0:
            return 0.0
        return float(np.interp(t, bp[:, 0], bp[:, 1]))

    def support(self):
        bp = self.breakpoints
        if len(bp) == 0:
            return (0.0, 0.0)
        return (float(bp[0, 0]), float(bp[-1, 0]))


def _pl(points) -> PiecewiseLinearFn:
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    arr.setflags(write=False)
    return PiecewiseLinearFn(breakpoints=arr)


_ZERO_FN = _pl(np.empty((0, 2)))


@dataclass(frozen=True)
class Landscape:
    """Indexed family of piecewise-linear levels, pointwise non-increasing
    in the level index. ``nonnegative`` is False for raw families produced
    by linear combinations with negative coefficients."""

    levels: tuple
    nonnegative: bool = True

    def level_count(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> PiecewiseLinearFn:
        """1-based level access; levels beyond the family are zero."""
        if k < 1:
            raise ValueError("level index is 1-based")
        if k > len(self.levels):
            return _ZERO_FN
        return self.levels[k - 1]

    def value(self, k: int, t: float) -> float:
        return self.level(k).value(t)


@dataclass(frozen=True)
class GeneralizedLandscape:
    """Landscape pair for a re-baselined diagram: ``pos`` holds the levels
    of the points on or above the new baseline, ``neg`` the levels of the
    swapped points below it (indexed -1, -2, ... conceptually)."""

    theta: float
    y_shift: float
    pos: Landscape
    neg: Landscape

    def value(self, k: int, t: float) -> float:
        """Signed level access: k >= 1 positive family, k <= -1 negative."""
        if k >= 1:
            return self.pos.value(k, t)
        if k <= -1:
            return self.neg.value(-k, t)
        raise ValueError("level index 0 is not defined")


def _diagram_pairs(diagram) -> list:
    if isinstance(diagram, PersistenceDiagram):
        pts = [(p.birth, p.death) for p in diagram.pairs]
    else:
        pts = [(float(b), float(d)) for b, d in diagram]
    for b, d in pts:
        if math.isinf(b) or math.isinf(d):
            raise InfinitePair("landscapes require finite pairs")
    return pts


def build_landscape(diagram) -> Landscape:
    """Exact landscape of a finite diagram by the sort-and-sweep stacking
    construction. The number of levels equals the maximum bar overlap."""
    bars = sorted((b, d) for b, d in _diagram_pairs(diagram) if d > b)
    # sort by (birth asc, death desc)
    key = lambda bd: (bd[0], -bd[1])
    bars.sort(key=key)
    levels = []
    while bars:
        b, d = bars.pop(0)
        pts = [(b, 0.0), (0.5 * (b + d), 0.5 * (d - b))]
        while True:
            nxt = next((i for i, bd in enumerate(bars) if bd[1] > d), None)
            if nxt is None:
                pts.append((d, 0.0))
                break
            b2, d2 = bars.pop(nxt)
            if b2 > d:
                pts.append((d, 0.0))
                pts.append((b2, 0.0))
            elif b2 == d:
                pts.append((d, 0.0))
            else:
                pts.append((0.5 * (b2 + d), 0.5 * (d - b2)))
                insort_right(bars, (b2, d), key=key)
            pts.append((0.5 * (b2 + d2), 0.5 * (d2 - b2)))
            b, d = b2, d2
        levels.append(_pl(pts))
    return Landscape(levels=tuple(levels))


def evaluate(landscape, k: int, t: float) -> float:
    """Level-k landscape value at t (0 when k exceeds the level count).
    For generalized landscapes, negative k reads the negative family."""
    return landscape.value(k, t)


def _local_maxima(fn: PiecewiseLinearFn):
    """Corners (t, v) with v > 0 strictly above both neighbors. Landscape
    levels have slopes of magnitude 1 on their support, so positive-height
    plateaus cannot occur and strict maxima enumerate all corners."""
    bp = fn.breakpoints
    out = []
    for i in range(1, len(bp) - 1):
        v = bp[i, 1]
        if v > 0.0 and v > bp[i - 1, 1] and v > bp[i + 1, 1]:
            out.append((float(bp[i, 0]), float(v)))
    return out


def recover_diagram(landscape: Landscape, eps_probe: float | None = None) -> list:
    """Invert a landscape back to its diagram, as a sorted list of
    (birth, death) tuples with multiplicity.

    Candidate corners (t, u) are the local maxima of all levels; the
    multiplicity of the point (b, d) = (t - u, t + u) is the second
    difference of the level-rank function n over probes shifted by
    eps_probe (default 1e-9 times the diagram diameter): shifting the
    corner to (b - eps, d) / (b, d + eps) / (b - eps, d + eps) is shifting
    (t, u) by (-eps/2, +eps/2) / (+eps/2, +eps/2) / (0, +eps). Probes work
    directly in corner coordinates so no precision is lost converting back
    and forth. Distinct corners closer than 10 * eps_probe are refused.
    """
    corners = []
    for fn in landscape.levels:
        corners.extend(_local_maxima(fn))
    if not corners:
        return []
    uniq = sorted(set(corners))
    lo = min(t - u for t, u in uniq)
    hi = max(t + u for t, u in uniq)
    eps = eps_probe if eps_probe is not None else 1e-9 * max(hi - lo, 1e-12)
    for i in range(len(uniq)):
        for j in range(i + 1, len(uniq)):
            bi, di = uniq[i][0] - uniq[i][1], uniq[i][0] + uniq[i][1]
            bj, dj = uniq[j][0] - uniq[j][1], uniq[j][0] + uniq[j][1]
            if max(abs(bi - bj), abs(di - dj)) < 10 * eps:
                raise SeparationTooSmall(
                    f"corners {uniq[i]} and {uniq[j]} collide within {10 * eps:g}"
                )

    slack = 1e-3 * eps  # absorbs interpolation rounding, far below eps

    def rank(t: float, u: float) -> int:
        k = 0
        while k < landscape.level_count() and landscape.value(k + 1, t) >= u - slack:
            k += 1
        return k

    out = []
    for t, u in uniq:
        half = 0.5 * eps
        mult = (
            rank(t, u)
            - rank(t - half, u + half)
            - rank(t + half, u + half)
            + rank(t, u + eps)
        )
        if mult > 0:
            out.extend([(t - u, t + u)] * mult)
    return sorted(out)


def _merged_grid(fns) -> np.ndarray:
    ts: set[float] = set()
    for fn in fns:
        ts.update(float(t) for t in fn.breakpoints[:, 0])
    return np.array(sorted(ts))


def linear_combination(coeffs, landscapes) -> Landscape:
    """Per-level linear combination on the merged breakpoint grid. Missing
    levels act as the zero function. Combinations with negative
    coefficients may dip below zero; the result is flagged raw."""
    coeffs = [float(c) for c in coeffs]
    if len(coeffs) != len(landscapes):
        raise ValueError("one coefficient per landscape")
    depth = max((ls.level_count() for ls in landscapes), default=0)
    levels = []
    for k in range(1, depth + 1):
        fns = [ls.level(k) for ls in landscapes]
        grid = _merged_grid(fns)
        if len(grid) == 0:
            levels.append(_ZERO_FN)
            continue
        vals = np.zeros_like(grid)
        for c, fn in zip(coeffs, fns):
            if len(fn.breakpoints):
                vals += c * np.interp(grid, fn.breakpoints[:, 0], fn.breakpoints[:, 1])
        levels.append(_pl(np.column_stack([grid, vals])))
    return Landscape(levels=tuple(levels), nonnegative=all(c >= 0 for c in coeffs))


def average(landscapes) -> Landscape:
    landscapes = list(landscapes)
    if not landscapes:
        raise ValueError("average of no landscapes")
    w = 1.0 / len(landscapes)
    return linear_combination([w] * len(landscapes), landscapes)


def average_generalized(gls) -> GeneralizedLandscape:
    gls = list(gls)
    if not gls:
        raise ValueError("average of no landscapes")
    _check_same_baseline(gls)
    w = [1.0 / len(gls)] * len(gls)
    return GeneralizedLandscape(
        theta=gls[0].theta,
        y_shift=gls[0].y_shift,
        pos=linear_combination(w, [g.pos for g in gls]),
        neg=linear_combination(w, [g.neg for g in gls]),
    )


def _sq_integral_of_difference(fa: PiecewiseLinearFn, fb: PiecewiseLinearFn) -> float:
    """Exact integral of (fa - fb)^2: the difference is linear between
    merged breakpoints, each piece integrates in closed form."""
    grid = _merged_grid([fa, fb])
    if len(grid) < 2:
        return 0.0
    va = (
        np.interp(grid, fa.breakpoints[:, 0], fa.breakpoints[:, 1])
        if len(fa.breakpoints)
        else np.zeros_like(grid)
    )
    vb = (
        np.interp(grid, fb.breakpoints[:, 0], fb.breakpoints[:, 1])
        if len(fb.breakpoints)
        else np.zeros_like(grid)
    )
    g = va - vb
    h = np.diff(grid)
    g1, g2 = g[:-1], g[1:]
    return float(np.sum(h * (g1 * g1 + g1 * g2 + g2 * g2) / 3.0))


def _check_same_baseline(gls):
    t0, y0 = gls[0].theta, gls[0].y_shift
    for g in gls[1:]:
        if g.theta != t0 or g.y_shift != y0:
            raise ParameterMismatch(
                f"baselines differ: ({t0}, {y0}) vs ({g.theta}, {g.y_shift})"
            )


def l2_distance(a, b) -> float:
    """L2 distance between two landscapes of the same kind: the square root
    of the summed squared-difference integrals over all levels (both
    families for generalized landscapes)."""
    if isinstance(a, GeneralizedLandscape) != isinstance(b, GeneralizedLandscape):
        raise ParameterMismatch("cannot mix plain and generalized landscapes")
    if isinstance(a, GeneralizedLandscape):
        _check_same_baseline([a, b])
        total = 0.0
        for fam_a, fam_b in ((a.pos, b.pos), (a.neg, b.neg)):
            depth = max(fam_a.level_count(), fam_b.level_count())
            for k in range(1, depth + 1):
                total += _sq_integral_of_difference(fam_a.level(k), fam_b.level(k))
        return math.sqrt(total)
    depth = max(a.level_count(), b.level_count())
    total = 0.0
    for k in range(1, depth + 1):
        total += _sq_integral_of_difference(a.level(k), b.level(k))
    return math.sqrt(total)


def integral_of_square(landscape: Landscape) -> float:
    """Integral of the squared first level (0 for an empty landscape)."""
    if landscape.level_count() == 0:
        return 0.0
    return _sq_integral_of_difference(landscape.level(1), _ZERO_FN)


def _transform_points(points, theta: float, y_shift: float):
    phi = math.pi / 4.0 - theta
    c, s = math.cos(phi), math.sin(phi)
    out = []
    for x, y in points:
        ys = y - y_shift
        out.append((x * c - ys * s, x * s + ys * c))
    return out


def _untransform_points(points, theta: float, y_shift: float):
    phi = math.pi / 4.0 - theta
    c, s = math.cos(phi), math.sin(phi)
    out = []
    for x, y in points:
        rx = x * c + y * s
        ry = -x * s + y * c
        out.append((rx, ry + y_shift))
    return out


def build_generalized_landscape(diagram, theta: float, y: float) -> GeneralizedLandscape:
    """Landscape of a diagram after re-baselining by (theta, y). Points
    landing exactly on the diagonal after the transform belong to the
    positive family (closed x <= y split)."""
    pts = _transform_points(_diagram_pairs(diagram), theta, y)
    above = [(x, yy) for x, yy in pts if x <= yy]
    below = [(yy, x) for x, yy in pts if x > yy]  # coordinate swap
    return GeneralizedLandscape(
        theta=float(theta),
        y_shift=float(y),
        pos=build_landscape(above),
        neg=build_landscape(below),
    )


def recover_generalized_diagram(gl: GeneralizedLandscape) -> list:
    """Invert a generalized landscape back to the original diagram by
    recovering both families and undoing the baseline transform."""
    pts = list(recover_diagram(gl.pos))
    pts.extend((d, b) for b, d in recover_diagram(gl.neg))  # undo the swap
    return sorted(_untransform_points(pts, gl.theta, gl.y_shift))


def classify_by_nearest_average(input_landscape, group_averages) -> int:
    """Index of the group whose average landscape is L2-closest to the
    input; ties break toward the lowest group index."""
    group_averages = list(group_averages)
    if not group_averages:
        raise ValueError("no group averages given")
    best = 0
    best_d = l2_distance(input_landscape, group_averages[0])
    for i, g in enumerate(group_averages[1:], start=1):
        d = l2_distance(input_landscape, g)
        if d < best_d:
            best, best_d = i, d
    return best


def _moved(points, velocities, eps: float):
    return [(b + a * eps, d + bb * eps) for (b, d), (a, bb) in zip(points, velocities)]


def derivative_check(
    diagram,
    group_diagrams,
    velocities=None,
    group_velocities=None,
    mode: str = "points",
    theta: float = math.pi / 4.0,
    y: float = 0.0,
    scale: float | None = None,
    exponents=range(5, 16),
    rel_tol: float = 1e-4,
) -> dict:
    """Two-sided secant-slope probe of the landscape-distance map.

    mode="points": every diagram point p moves to p + eps * (alpha, beta)
    with per-point rates from ``velocities`` / ``group_velocities``; the
    probed map is eps -> distance between the moved diagram's landscape and
    the average landscape of the moved group diagrams, at fixed baseline
    (theta, y). mode="theta" / mode="y": points stay fixed and the baseline
    parameter is perturbed instead.

    Reports forward/backward slopes over eps = 2^-5 ... 2^-15 times scale,
    a limit estimate, and whether the two one-sided slopes agree within
    rel_tol (relative) at the finest step.
    """
    base_pts = _diagram_pairs(diagram)
    group_pts = [_diagram_pairs(g) for g in group_diagrams]
    if mode == "points":
        if velocities is None or group_velocities is None:
            raise ValueError("mode='points' requires velocities")
        velocities = [(float(a), float(b)) for a, b in velocities]
        group_velocities = [
            [(float(a), float(b)) for a, b in vs] for vs in group_velocities
        ]

    if scale is None:
        if mode == "theta":
            # a rotation by phi moves a point at radius R by R*phi, so probe
            # with angles scaled to the farthest point; eps then perturbs
            # point positions by ~2^-5 .. 2^-15 units in every mode
            r_max = max((math.hypot(b, d) for g in [base_pts] + group_pts
                         for b, d in g), default=1.0)
            scale = 1.0 / max(r_max, 1e-9)
        else:
            scale = 1.0

    def distance_at(eps: float) -> float:
        if mode == "points":
            d_pts = _moved(base_pts, velocities, eps)
            g_pts = [_moved(g, vs, eps) for g, vs in zip(group_pts, group_velocities)]
            th, yy = theta, y
        elif mode == "theta":
            d_pts, g_pts, th, yy = base_pts, group_pts, theta + eps, y
        elif mode == "y":
            d_pts, g_pts, th, yy = base_pts, group_pts, theta, y + eps
        else:
            raise ValueError(f"unknown mode {mode!r}")
        gl = build_generalized_landscape(d_pts, th, yy)
        avg = average_generalized(
            [build_generalized_landscape(g, th, yy) for g in g_pts]
        )
        return l2_distance(gl, avg)

    d0 = distance_at(0.0)
    eps_values = [scale * 2.0 ** (-e) for e in exponents]
    forward = [(distance_at(e) - d0) / e for e in eps_values]
    backward = [(distance_at(-e) - d0) / (-e) for e in eps_values]
    f_last, b_last = forward[-1], backward[-1]
    denom = max(abs(f_last), abs(b_last))
    converged = (
        abs(f_last - b_last) <= rel_tol * denom if denom > 0 else f_last == b_last
    )
    return {
        "mode": mode,
        "scale": scale,
        "distance_at_zero": d0,
        "epsilons": eps_values,
        "forward_slopes": forward,
        "backward_slopes": backward,
        "limit_estimate": 0.5 * (f_last + b_last),
        "converged": converged,
    }
