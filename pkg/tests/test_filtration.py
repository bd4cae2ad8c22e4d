import math

import numpy as np
import pytest

from branchscape.errors import EmptyCloud, TooLarge
from branchscape.filtration import alpha_complex, cech_complex_brute_force
from branchscape.geometry import PointCloud
from branchscape.persistence import compute_persistence

SQRT2_2 = math.sqrt(2) / 2


def cloud(pts):
    return PointCloud.from_points(pts)


def values(cx):
    return dict(cx.entries)


class TestAlphaComplex:
    def test_unit_square(self):
        cx = alpha_complex(cloud([(0, 0), (1, 0), (1, 1), (0, 1)]))
        v = values(cx)
        for i in range(4):
            assert v[(i,)] == 0.0
        for e in [(0, 1), (0, 3), (1, 2), (2, 3)]:
            assert v[e] == 0.5
        # canonical diagonal and both triangles enter at the circumradius
        assert abs(v[(0, 2)] - SQRT2_2) < 1e-12
        assert abs(v[(0, 1, 2)] - SQRT2_2) < 1e-12
        assert abs(v[(0, 2, 3)] - SQRT2_2) < 1e-12
        assert len(cx) == 11

    def test_two_points(self):
        cx = alpha_complex(cloud([(0, 0), (0, 2)]))
        assert values(cx) == {(0,): 0.0, (1,): 0.0, (0, 1): 1.0}

    def test_equilateral(self):
        s3 = math.sqrt(3)
        cx = alpha_complex(cloud([(0, 0), (1, 0), (0.5, s3 / 2)]))
        v = values(cx)
        for e in [(0, 1), (0, 2), (1, 2)]:
            assert abs(v[e] - 0.5) < 1e-12
        assert abs(v[(0, 1, 2)] - 1 / s3) < 1e-12

    def test_single_point(self):
        cx = alpha_complex(cloud([(3, 4)]))
        assert cx.entries == (((0,), 0.0),)

    def test_collinear_cloud_path_only(self):
        cx = alpha_complex(cloud([(0, 0), (1, 0), (2, 0)]))
        v = values(cx)
        # only consecutive Gabriel pairs, no triangles
        assert set(v) == {(0,), (1,), (2,), (0, 1), (1, 2)}
        assert v[(0, 1)] == 0.5 and v[(1, 2)] == 0.5

    def test_empty_raises(self):
        with pytest.raises(EmptyCloud):
            alpha_complex(cloud([]))

    def test_valid_on_random_clouds(self):
        for seed in range(30):
            rng = np.random.default_rng(seed)
            pts = rng.uniform(0, 100, size=(rng.integers(1, 30), 2))
            alpha_complex(cloud(pts)).validate()

    def test_deterministic(self):
        rng = np.random.default_rng(42)
        pts = rng.uniform(0, 100, size=(25, 2))
        a = alpha_complex(cloud(pts))
        b = alpha_complex(cloud(pts))
        assert a.entries == b.entries


class TestCechBruteForce:
    def test_unit_square_has_both_diagonals(self):
        cx = cech_complex_brute_force(cloud([(0, 0), (1, 0), (1, 1), (0, 1)]))
        v = values(cx)
        assert abs(v[(0, 2)] - SQRT2_2) < 1e-12
        assert abs(v[(1, 3)] - SQRT2_2) < 1e-12

    def test_collinear_triple(self):
        cx = cech_complex_brute_force(cloud([(0, 0), (1, 0), (2, 0)]))
        v = values(cx)
        assert v[(0, 1)] == 0.5 and v[(1, 2)] == 0.5 and v[(0, 2)] == 1.0
        assert v[(0, 1, 2)] == 1.0

    def test_single_point(self):
        cx = cech_complex_brute_force(cloud([(5, 5)]))
        assert cx.entries == (((0,), 0.0),)

    def test_size_guard(self):
        pts = np.random.default_rng(0).uniform(0, 10, size=(26, 2))
        with pytest.raises(TooLarge):
            cech_complex_brute_force(cloud(pts))

    def test_valid_on_random_clouds(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            pts = rng.uniform(0, 50, size=(rng.integers(1, 12), 2))
            cech_complex_brute_force(cloud(pts)).validate()


class TestAlphaCechAgreement:
    def test_diagrams_agree_on_small_clouds(self):
        for seed in range(40):
            rng = np.random.default_rng(500 + seed)
            c = cloud(rng.uniform(0, 100, size=(rng.integers(4, 11), 2)))
            da = compute_persistence(alpha_complex(c)).as_tuples()
            dc = compute_persistence(cech_complex_brute_force(c)).as_tuples()
            assert len(da) == len(dc)
            for (a, b), (x, y) in zip(da, dc):
                assert max(abs(a - x), abs(b - y)) < 1e-9
