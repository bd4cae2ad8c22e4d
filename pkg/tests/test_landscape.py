import math

import numpy as np
import pytest

from branchscape.errors import InfinitePair, ParameterMismatch, SeparationTooSmall
from branchscape.landscape import (
    GeneralizedLandscape,
    Landscape,
    average,
    average_generalized,
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


def sup_definition(bars, k, t):
    """The defining supremum, evaluated directly by scanning all bars."""
    depths = sorted(
        (min(t - b, d - t) for b, d in bars if b <= t <= d), reverse=True
    )
    depths = [u for u in depths if u >= 0]
    return depths[k - 1] if len(depths) >= k else 0.0


def match_multisets(got, want, tol=1e-9):
    if len(got) != len(want):
        return False
    remaining = list(want)
    for g in got:
        hit = next(
            (i for i, w in enumerate(remaining)
             if max(abs(g[0] - w[0]), abs(g[1] - w[1])) <= tol),
            None,
        )
        if hit is None:
            return False
        remaining.pop(hit)
    return True


def random_bars(rng, max_n=15, grid=None):
    m = int(rng.integers(1, max_n))
    bars = set()
    while len(bars) < m:
        b = float(rng.uniform(0, 50))
        p = float(rng.uniform(0.1, 20))
        if grid:
            b, p = round(b, grid), max(round(p, grid), 10.0 ** -grid)
        bars.add((b, b + p))
    return sorted(bars)


class TestBuildLandscape:
    def test_single_bar_tent(self):
        ls = build_landscape([(0, 2)])
        assert ls.level_count() == 1
        assert ls.levels[0].breakpoints.tolist() == [[0, 0], [1, 1], [2, 0]]

    def test_empty(self):
        assert build_landscape([]).level_count() == 0

    def test_two_overlapping_bars(self):
        ls = build_landscape([(0, 2), (1, 3)])
        assert ls.levels[0].breakpoints.tolist() == \
            [[0, 0], [1, 1], [1.5, 0.5], [2, 1], [3, 0]]
        assert ls.levels[1].breakpoints.tolist() == [[1, 0], [1.5, 0.5], [2, 0]]

    def test_infinite_pair_rejected(self):
        with pytest.raises(InfinitePair):
            build_landscape([(0, math.inf)])

    def test_level_nesting_and_lipschitz(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            bars = random_bars(rng)
            ls = build_landscape(bars)
            grid = np.linspace(min(b for b, _ in bars) - 1,
                               max(d for _, d in bars) + 1, 400)
            for k in range(1, ls.level_count()):
                vk = [evaluate(ls, k, float(t)) for t in grid]
                vk1 = [evaluate(ls, k + 1, float(t)) for t in grid]
                assert all(a >= b - 1e-12 for a, b in zip(vk, vk1))
            span = max(d for _, d in bars) - min(b for b, _ in bars)
            for fn in ls.levels:
                bp = fn.breakpoints
                dt = np.diff(bp[:, 0])
                dv = np.diff(bp[:, 1])
                # slope magnitude 1 up to closed-form corner rounding
                assert np.all(np.abs(dv) - dt <= 1e-9 * (1 + span))


class TestEvaluate:
    def test_examples(self):
        ls = build_landscape([(0, 2)])
        assert evaluate(ls, 1, 1.0) == 1.0
        assert evaluate(ls, 2, 1.0) == 0.0
        two = build_landscape([(0, 2), (1, 3)])
        assert evaluate(two, 1, 1.5) == 0.5

    def test_matches_sup_definition_on_grid(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            bars = random_bars(rng)
            ls = build_landscape(bars)
            lo = min(b for b, _ in bars) - 1
            hi = max(d for _, d in bars) + 1
            for t in np.linspace(lo, hi, 250):
                for k in range(1, ls.level_count() + 2):
                    assert abs(evaluate(ls, k, float(t))
                               - sup_definition(bars, k, float(t))) < 1e-12


class TestRecoverDiagram:
    def test_round_trip_single(self):
        assert recover_diagram(build_landscape([(0, 2)])) == [(0, 2)]

    def test_multiplicity_two(self):
        assert recover_diagram(build_landscape([(0, 2), (0, 2)])) == \
            [(0, 2), (0, 2)]

    def test_three_points(self):
        bars = [(0, 2), (1, 3), (1.2, 2.8)]
        assert match_multisets(recover_diagram(build_landscape(bars)), bars)

    def test_separation_guard(self):
        ls = build_landscape([(0, 2), (1e-12, 2)])
        with pytest.raises(SeparationTooSmall):
            recover_diagram(ls)

    def test_round_trip_seeded(self):
        for trial in range(100):
            rng = np.random.default_rng(4000 + trial)
            bars = random_bars(rng, max_n=21, grid=3)
            rec = recover_diagram(build_landscape(bars))
            assert match_multisets(rec, bars), (bars, rec)


class TestAlgebra:
    def test_average_with_itself(self):
        ls = build_landscape([(0, 2), (1, 3)])
        avg = average([ls, ls])
        for a, b in zip(avg.levels, ls.levels):
            grid = np.union1d(a.breakpoints[:, 0], b.breakpoints[:, 0])
            assert all(abs(a.value(float(t)) - b.value(float(t))) < 1e-12 for t in grid)

    def test_self_difference_is_zero(self):
        ls = build_landscape([(0, 2), (1, 3)])
        diff = linear_combination([1.0, -1.0], [ls, ls])
        assert not diff.nonnegative
        for fn in diff.levels:
            assert np.all(np.abs(fn.breakpoints[:, 1]) < 1e-15)

    def test_average_of_two_tents(self):
        # pointwise mean on the merged grid {0, 1, 2, 4}: the [0,4] tent has
        # value 1 at t=1, so the mean peaks at 1 there as well
        avg = average([build_landscape([(0, 2)]), build_landscape([(0, 4)])])
        assert avg.levels[0].breakpoints.tolist() == \
            [[0, 0], [1, 1], [2, 1], [4, 0]]

    def test_missing_levels_treated_as_zero(self):
        deep = build_landscape([(0, 2), (0, 2)])
        shallow = build_landscape([(0, 2)])
        combo = linear_combination([1.0, 1.0], [deep, shallow])
        assert combo.level_count() == 2
        assert evaluate(combo, 2, 1.0) == 1.0


class TestL2Distance:
    def test_zero_on_self(self):
        ls = build_landscape([(0, 2), (1, 3)])
        assert l2_distance(ls, ls) == 0.0

    def test_tent_vs_zero(self):
        d = l2_distance(build_landscape([(0, 2)]), build_landscape([]))
        assert abs(d - math.sqrt(2.0 / 3.0)) < 1e-12

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            a, b, c = (build_landscape(random_bars(rng, 8)) for _ in range(3))
            assert abs(l2_distance(a, b) - l2_distance(b, a)) < 1e-9
            assert l2_distance(a, c) <= l2_distance(a, b) + l2_distance(b, c) + 1e-9

    def test_kind_mismatch(self):
        ls = build_landscape([(0, 2)])
        gl = build_generalized_landscape([(0, 2)], math.pi / 4, 0.0)
        with pytest.raises(ParameterMismatch):
            l2_distance(ls, gl)

    def test_baseline_mismatch(self):
        a = build_generalized_landscape([(0, 2)], math.pi / 4, 0.0)
        b = build_generalized_landscape([(0, 2)], 0.5, 0.0)
        with pytest.raises(ParameterMismatch):
            l2_distance(a, b)


class TestIntegralOfSquare:
    def test_single_bar(self):
        assert abs(integral_of_square(build_landscape([(0, 2)])) - 2.0 / 3.0) < 1e-12

    def test_empty(self):
        assert integral_of_square(build_landscape([])) == 0.0

    def test_cubic_scaling(self):
        base = integral_of_square(build_landscape([(0, 2)]))
        for c in (0.5, 2.0, 3.0):
            scaled = integral_of_square(build_landscape([(0, 2 * c)]))
            assert abs(scaled - c**3 * base) < 1e-9 * max(1.0, scaled)


class TestGeneralized:
    def test_identity_at_baseline(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            bars = random_bars(rng, 10)
            gl = build_generalized_landscape(bars, math.pi / 4, 0.0)
            pl = build_landscape(bars)
            assert gl.neg.level_count() == 0
            assert gl.pos.level_count() == pl.level_count()
            for a, b in zip(gl.pos.levels, pl.levels):
                assert np.array_equal(a.breakpoints, b.breakpoints)

    def test_point_pushed_below_diagonal(self):
        # shifting down by 3 sends (0, 2) to (0, -1): below the diagonal, so
        # the positive family empties and the swapped point (-1, 0) builds
        # the negative family
        gl = build_generalized_landscape([(0, 2)], math.pi / 4, 3.0)
        assert gl.pos.level_count() == 0
        assert gl.neg.level_count() == 1
        assert gl.neg.levels[0].breakpoints.tolist() == [[-1, 0], [-0.5, 0.5], [0, 0]]

    def test_signed_level_access(self):
        gl = build_generalized_landscape([(0, 2)], math.pi / 4, 3.0)
        assert evaluate(gl, -1, -0.5) == 0.5
        assert evaluate(gl, 1, -0.5) == 0.0
        with pytest.raises(ValueError):
            evaluate(gl, 0, 0.0)

    def test_round_trip_through_inverse_transform(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(1, 8))
            pts = [(float(rng.uniform(0, 10)), float(rng.uniform(0, 10)))
                   for _ in range(n)]
            pts = sorted(set(pts))
            theta = float(rng.uniform(0.2, 1.4))
            y = float(rng.uniform(-3, 3))
            gl = build_generalized_landscape(pts, theta, y)
            rec = recover_generalized_diagram(gl)
            assert match_multisets(rec, sorted(pts), tol=1e-8)

    def test_transform_points_on_diagonal_go_positive(self):
        gl = build_generalized_landscape([(1.0, 1.0)], math.pi / 4, 0.0)
        # zero-persistence tents are empty, but nothing lands in the negative
        # family either
        assert gl.neg.level_count() == 0


class TestClassifyByNearestAverage:
    def test_exact_group_member(self):
        gls = [build_generalized_landscape([(0, 2)], math.pi / 4, 0.0),
               build_generalized_landscape([(0, 6)], math.pi / 4, 0.0)]
        assert classify_by_nearest_average(gls[0], gls) == 0
        assert classify_by_nearest_average(gls[1], gls) == 1

    def test_tie_breaks_to_lowest_index(self):
        a = build_generalized_landscape([(0, 2)], math.pi / 4, 0.0)
        assert classify_by_nearest_average(a, [a, a]) == 0

    def test_leave_one_out_seeded_groups(self):
        rng = np.random.default_rng(123)

        def sample(kind):
            # group 0: bars near [0, 2]; group 1: bars near [0, 4]
            base = 2.0 if kind == 0 else 4.0
            return [(float(rng.uniform(0, 0.3)),
                     float(base + rng.uniform(-0.3, 0.3)))
                    for _ in range(3)]

        members = [(k, build_generalized_landscape(sample(k), math.pi / 4, 0.0))
                   for k in (0, 1) for _ in range(10)]
        correct = 0
        for i, (kind, gl) in enumerate(members):
            rest = [m for j, m in enumerate(members) if j != i]
            avgs = [
                average_generalized([g for k, g in rest if k == 0]),
                average_generalized([g for k, g in rest if k == 1]),
            ]
            correct += classify_by_nearest_average(gl, avgs) == kind
        assert correct / len(members) >= 0.9


class TestDerivativeCheck:
    def test_zero_velocities(self):
        rep = derivative_check(
            [(1, 3)], [[(0, 2)], [(1, 4)]],
            velocities=[(0.0, 0.0)],
            group_velocities=[[(0.0, 0.0)], [(0.0, 0.0)]],
            mode="points",
        )
        assert all(s == 0 for s in rep["forward_slopes"])
        assert all(s == 0 for s in rep["backward_slopes"])
        assert rep["converged"]

    def test_coincident_diagrams_have_a_kink(self):
        # when the moving diagram equals the group average, d(0) = 0 and
        # d(eps) = |eps| * c: the one-sided slopes converge to opposite signs
        rep = derivative_check(
            [(0, 2)], [[(0, 2)]],
            velocities=[(1.0, 1.0)], group_velocities=[[(0.0, 0.0)]],
            mode="points",
        )
        assert not rep["converged"]
        assert rep["forward_slopes"][-1] > 0 > rep["backward_slopes"][-1]

    def test_two_sided_convergence_generic(self):
        rng = np.random.default_rng(77)
        d = [(b, b + p) for b, p in zip(rng.uniform(0, 5, 4), rng.uniform(1, 3, 4))]
        groups = [
            [(b, b + p) for b, p in
             zip(rng.uniform(20, 25, 3), rng.uniform(1, 3, 3))]
            for _ in range(2)
        ]
        vels = [(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))) for _ in d]
        gvels = [[(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
                  for _ in g] for g in groups]
        rep = derivative_check(d, groups, velocities=vels, group_velocities=gvels,
                               mode="points")
        assert rep["converged"], (rep["forward_slopes"][-1], rep["backward_slopes"][-1])

    def test_theta_and_y_modes(self):
        rng = np.random.default_rng(78)
        d = [(b, b + p) for b, p in zip(rng.uniform(0, 5, 4), rng.uniform(1, 3, 4))]
        groups = [
            [(b, b + p) for b, p in
             zip(rng.uniform(20, 25, 3), rng.uniform(1, 3, 3))]
            for _ in range(2)
        ]
        for mode in ("theta", "y"):
            rep = derivative_check(d, groups, mode=mode)
            assert rep["converged"], (mode, rep)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            derivative_check([(0, 2)], [[(0, 2)]], mode="sideways",
                             velocities=[(0, 0)], group_velocities=[[(0, 0)]])
