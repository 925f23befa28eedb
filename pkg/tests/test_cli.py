import csv
import io
import json
import math
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from rotquad import cli
from rotquad.cli import (
    displacement_from_json,
    dumps,
    line_to_json,
    quad_from_doc,
    quad_to_doc,
)


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


class TestSerialization:
    def test_float_format_round_trips(self):
        values = [0.1, 1.0 / 3.0, -2.5e-17, 1234567.891, math.pi]
        text = dumps(values)
        back = json.loads(text)
        assert back == values

    def test_doc_round_trip(self, quad42):
        doc = quad_to_doc(quad42, {"seed": 42, "scale": 1.0})
        text = dumps(doc)
        parsed = json.loads(text)
        assert parsed == json.loads(dumps(parsed))
        rebuilt = quad_from_doc(parsed)
        for a, b in zip(rebuilt.displacements, quad42.displacements):
            assert a.isclose(b, tol=1e-15)

    def test_displacement_dq_form(self, quad42):
        dq = [0.0] * 8
        dq[3] = 1.0  # half turn about z
        d = displacement_from_json({"dq": dq})
        assert np.allclose(d.rotation, np.diag([-1.0, -1.0, 1.0]))

    def test_schema_violations(self):
        with pytest.raises(ValueError):
            displacement_from_json({"rotation": [1] * 9, "dq": [0] * 8})
        with pytest.raises(ValueError):
            displacement_from_json({"translation": [0, 0, 0]})
        with pytest.raises(ValueError):
            quad_from_doc({"version": "1", "displacements": []})


class TestConstructCommand:
    def test_random_deterministic(self):
        code1, out1, _ = run_cli(["construct", "--random", "--seed", "42"])
        code2, out2, _ = run_cli(["construct", "--random", "--seed", "42"])
        assert code1 == code2 == 0
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["version"] == "1"
        assert len(doc["displacements"]) == 4

    def test_v1_from_file(self, tmp_path, quad42):
        data = {
            "alpha": {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 0]},
            "index": 0,
            "axes": [line_to_json(a) for a in quad42.rel_axes_moving[:3]],
            "angles": [quad42.rel_angles[0], quad42.rel_angles[1]],
        }
        path = tmp_path / "v1.json"
        path.write_text(json.dumps(data))
        code, out, _ = run_cli(["construct", "--variant", "v1", "-i", str(path)])
        assert code == 0
        rebuilt = quad_from_doc(json.loads(out))
        for a, b in zip(rebuilt.displacements, quad42.displacements):
            assert a.isclose(b, tol=1e-9)

    def test_zero_angle_exit_2(self, tmp_path, quad42):
        data = {
            "alpha": {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 0]},
            "axes": [line_to_json(a) for a in quad42.rel_axes_moving[:3]],
            "angles": [0.0, 1.0],
        }
        path = tmp_path / "v1.json"
        path.write_text(json.dumps(data))
        code, out, err = run_cli(["construct", "--variant", "v1", "-i", str(path)])
        assert code == 2
        assert out == ""
        msg = json.loads(err)
        assert msg["error"] == "degenerate"
        assert "zero angle" in msg["message"]

    def test_malformed_exit_1(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run_cli(["construct", "--variant", "v1", "-i", str(path)])
        assert code == 1
        assert json.loads(err)["error"] == "malformed-input"

    def test_v2_round_trip_through_files(self, tmp_path, quad42):
        data = {
            "alpha_i": cli.displacement_to_json(quad42.displacements[0]),
            "alpha_i2": cli.displacement_to_json(quad42.displacements[2]),
            "axis_first": line_to_json(quad42.rel_axes_moving[0]),
            "axis_third": line_to_json(quad42.rel_axes_moving[2]),
        }
        path = tmp_path / "v2.json"
        path.write_text(json.dumps(data))
        code, out, _ = run_cli(["construct", "--variant", "v2", "-i", str(path)])
        assert code == 0
        rebuilt = quad_from_doc(json.loads(out))
        for a, b in zip(rebuilt.displacements, quad42.displacements):
            assert a.isclose(b, tol=1e-9)


@pytest.fixture(scope="module")
def doc_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("docs") / "doc42.json"
    code, _, _ = run_cli(["construct", "--random", "--seed", "42", "-o", str(path)])
    assert code == 0
    return str(path)


class TestLocusCommand:
    def test_full_report(self, doc_path, tmp_path):
        csv_path = tmp_path / "samples.csv"
        code, out, _ = run_cli(
            ["locus", "--kind", "all", "-i", doc_path, "--samples-csv", str(csv_path)]
        )
        assert code == 0
        report = json.loads(out)
        assert report["transversal_reality"] == "real_pair"
        assert len(report["point_locus"]) == 6
        assert all(e["max_concyclicity_residual"] <= 1e-8 for e in report["point_locus"])
        assert report["plane_locus"]["total_multiplicity"] == 12
        assert report["plane_locus"]["valid_count"] == 6
        assert [e["verdict"] for e in report["line_locus"]] == [True, True]
        assert all(e["max_incidence_residual"] <= 1e-9 for e in report["line_locus"])
        assert len(report["hyperboloids"]) == 2
        for h in report["hyperboloids"]:
            assert h["criterion_gap"] <= 1e-9 * max(1.0, *h["edge_sums"])

        with open(csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["locus_id", "t", "x", "y", "z"]
        assert len(rows) > 100
        ids = {r[0].split(":")[0] for r in rows[1:]}
        assert ids == {"point", "circle"}
        for r in rows[1:5]:
            [float(v) for v in r[1:]]

    def test_kind_selection(self, doc_path):
        code, out, _ = run_cli(["locus", "--kind", "point", "-i", doc_path])
        assert code == 0
        report = json.loads(out)
        assert "point_locus" in report and "plane_locus" not in report

    def test_report_deterministic(self, doc_path):
        _, out1, _ = run_cli(["locus", "--kind", "all", "-i", doc_path])
        _, out2, _ = run_cli(["locus", "--kind", "all", "-i", doc_path])
        assert out1 == out2

    def test_invalid_doc_exit_1(self, tmp_path):
        path = tmp_path / "nodoc.json"
        path.write_text('{"version": "1"}')
        code, _, err = run_cli(["locus", "-i", str(path)])
        assert code == 1

    def test_complex_transversals_reported(self, tmp_path):
        # seed 4 has a complex-conjugate transversal pair: still exit 0, the
        # report carries the reality flag and only the four axis lines
        path = tmp_path / "doc4.json"
        code, _, _ = run_cli(["construct", "--random", "--seed", "4", "-o", str(path)])
        assert code == 0
        code, out, _ = run_cli(["locus", "--kind", "all", "-i", str(path)])
        assert code == 0
        report = json.loads(out)
        assert report["transversals_real"] is False
        assert report["transversal_reality"] == "complex_pair"
        assert len(report["point_locus"]) == 4
        assert report["line_locus"] == []
        assert "hyperboloids" not in report

    def test_tol_config_overrides(self, doc_path, tmp_path):
        cfg = tmp_path / "tols.json"
        cfg.write_text('{"concyclic": 1e-7}')
        code, out, _ = run_cli(
            ["locus", "--kind", "point", "-i", doc_path, "--tol-config", str(cfg)]
        )
        assert code == 0
        cfg.write_text('{"nonsense": 1.0}')
        code, _, err = run_cli(
            ["locus", "--kind", "point", "-i", doc_path, "--tol-config", str(cfg)]
        )
        assert code == 1


class TestVerifyCommand:
    def test_random_pass(self):
        code, out, err = run_cli(["verify", "--random-count", "3"])
        assert code == 0
        summary = json.loads(out)
        assert summary["all_pass"]
        assert summary["checks"]["construction"]["pass"] == 3
        assert "construction: 3 pass" in err

    def test_corrupted_doc_exit_3(self, tmp_path):
        _, out, _ = run_cli(["construct", "--random", "--seed", "7"])
        doc = json.loads(out)
        doc["displacements"][1]["translation"][0] += 0.01
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["verify", "--doc", str(path)])
        assert code == 3
        summary = json.loads(out)
        assert not summary["all_pass"]
        assert summary["failures"][0]["invariant"] == "construction"
        assert "rotation" in summary["failures"][0]["details"][0]

    def test_doc_verification_stable(self, tmp_path):
        path = tmp_path / "good.json"
        run_cli(["construct", "--random", "--seed", "11", "-o", str(path)])
        code1, out1, _ = run_cli(["verify", "--doc", str(path)])
        code2, out2, _ = run_cli(["verify", "--doc", str(path)])
        assert code1 == code2 == 0
        assert out1 == out2
