import json
import math

import numpy as np
import pytest

from branchscape.cli import main
from branchscape.testkit import c_shape_cloud, ring_cloud


def write_csv(path, cloud):
    with open(path, "w") as fh:
        for x, y in cloud.points:
            fh.write(f"{float(x)!r},{float(y)!r}\n")
    return str(path)


@pytest.fixture
def ring_csv(tmp_path):
    return write_csv(tmp_path / "ring.csv", ring_cloud(16, 50.0))


@pytest.fixture
def cshape_csv(tmp_path):
    return write_csv(tmp_path / "c.csv", c_shape_cloud(16, 50.0, math.pi / 4))


def analyze_args(inp, out, extra=()):
    return [
        "analyze", "--input", inp, "--format", "csv",
        "--hull-interval", "20", "--persistence-min", "5",
        "--match-tol", "2.0", "--out-json", out, *extra,
    ]


class TestAnalyze:
    def test_ring_counts(self, ring_csv, tmp_path, capsys):
        out = str(tmp_path / "r.json")
        assert main(analyze_args(ring_csv, out)) == 0
        doc = json.loads(open(out).read())
        assert doc["counts"] == {"internal": 1, "external": 0}
        assert capsys.readouterr().out.startswith("internal=1 external=0")

    def test_cshape_counts(self, cshape_csv, tmp_path):
        out = str(tmp_path / "c.json")
        assert main(analyze_args(cshape_csv, out)) == 0
        doc = json.loads(open(out).read())
        assert doc["counts"]["external"] >= 1

    def test_byte_identical_outputs(self, ring_csv, tmp_path):
        o1, o2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        s1, s2 = str(tmp_path / "a.svg"), str(tmp_path / "b.svg")
        assert main(analyze_args(ring_csv, o1, ["--out-svg", s1])) == 0
        assert main(analyze_args(ring_csv, o2, ["--out-svg", s2])) == 0
        assert open(o1, "rb").read() == open(o2, "rb").read()
        assert open(s1, "rb").read() == open(s2, "rb").read()

    def test_units_radius2(self, ring_csv, tmp_path):
        out_r = str(tmp_path / "r.json")
        out_s = str(tmp_path / "s.json")
        assert main(analyze_args(ring_csv, out_r)) == 0
        # thresholds are read in output units: 25 in squared units matches
        # the same features as 5 in radius units for this fixture
        args = analyze_args(ring_csv, out_s, ["--units", "radius2"])
        args[args.index("--persistence-min") + 1] = "1000"
        assert main(args) == 0
        lin = json.loads(open(out_r).read())
        sq = json.loads(open(out_s).read())
        for (b1, d1), (b2, d2) in zip(lin["diagram_xu"], sq["diagram_xu"]):
            assert abs(b2 - b1 * b1) < 1e-9 and abs(d2 - d1 * d1) < 1e-9
        assert sq["counts"] == {"internal": 1, "external": 0}

    def test_missing_file_exit_3(self, tmp_path, capsys):
        assert main(analyze_args(str(tmp_path / "nope.csv"), "o.json")) == 3

    def test_collinear_exit_4(self, tmp_path, capsys):
        path = tmp_path / "line.csv"
        path.write_text("0,0\n1,1\n2,2\n")
        assert main(analyze_args(str(path), str(tmp_path / "o.json"))) == 4

    def test_usage_error_exit_2(self):
        assert main(["analyze", "--input"]) == 2
        assert main([]) == 2

    def test_area_ratio_requires_image(self, ring_csv, tmp_path):
        args = analyze_args(ring_csv, str(tmp_path / "o.json"), ["--area-ratio"])
        assert main(args) == 2

    def test_landscape_integral_flag(self, ring_csv, tmp_path):
        out = str(tmp_path / "r.json")
        assert main(analyze_args(ring_csv, out, ["--landscape-integral"])) == 0
        doc = json.loads(open(out).read())
        assert doc["lambda1_sq_integral"] > 0


class TestDiagramLandscapeChain:
    def test_chain(self, ring_csv, tmp_path, capsys):
        d = str(tmp_path / "d.json")
        assert main(["diagram", "--input", ring_csv, "--format", "csv",
                     "--out-json", d]) == 0
        l = str(tmp_path / "l.json")
        assert main(["landscape", "--diagram", d, "--out-json", l,
                     "--integral-of-square"]) == 0
        ldoc = json.loads(open(l).read())
        assert ldoc["levels"] and ldoc["integral_of_square"] > 0

        g = str(tmp_path / "g.json")
        assert main(["glandscape", "--diagram", d,
                     "--theta", repr(math.pi / 4), "--y", "0",
                     "--out-json", g]) == 0
        gdoc = json.loads(open(g).read())
        # at the baseline the positive family equals the plain landscape
        assert gdoc["pos_levels"] == ldoc["levels"]
        assert gdoc["neg_levels"] == []

    def test_diagram_with_hull_augmentation(self, ring_csv, tmp_path):
        d0 = str(tmp_path / "d0.json")
        d1 = str(tmp_path / "d1.json")
        assert main(["diagram", "--input", ring_csv, "--format", "csv",
                     "--out-json", d0]) == 0
        assert main(["diagram", "--input", ring_csv, "--format", "csv",
                     "--augment-hull", "20", "--out-json", d1]) == 0
        assert json.loads(open(d0).read()) != json.loads(open(d1).read())


class TestClassify:
    def test_prints_group_index(self, tmp_path, capsys):
        from branchscape.fileio import dumps_json, glandscape_to_dict
        from branchscape.landscape import build_generalized_landscape

        paths = []
        for i, bar in enumerate([(0.0, 2.0), (0.0, 6.0)]):
            gl = build_generalized_landscape([bar], math.pi / 4, 0.0)
            p = str(tmp_path / f"g{i}.json")
            open(p, "w").write(dumps_json(glandscape_to_dict(gl)))
            paths.append(p)
        inp = str(tmp_path / "in.json")
        gl = build_generalized_landscape([(0.1, 5.8)], math.pi / 4, 0.0)
        open(inp, "w").write(dumps_json(glandscape_to_dict(gl)))
        assert main(["classify", "--input", inp, "--groups", *paths]) == 0
        assert capsys.readouterr().out.strip() == "1"


class TestDerivcheck:
    def test_scenario_run(self, tmp_path, capsys):
        scenario = {
            "mode": "points",
            "scale": 1.0,
            "diagram": [[0.0, 2.0], [1.0, 4.0]],
            "groups": [[[10.0, 12.0]], [[11.0, 13.5]]],
            "velocities": {
                "diagram": [[1.0, 0.5], [-0.25, 0.75]],
                "groups": [[[0.0, 0.0]], [[0.5, -0.5]]],
            },
        }
        p = str(tmp_path / "s.json")
        open(p, "w").write(json.dumps(scenario))
        assert main(["derivcheck", "--scenario", p]) == 0
        out = capsys.readouterr().out
        assert "converged=true" in out
        assert "limit_estimate=" in out

    def test_bad_json_exit_3(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{не json")
        assert main(["derivcheck", "--scenario", str(p)]) == 3
