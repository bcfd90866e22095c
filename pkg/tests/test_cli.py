import json

import pytest

from bottrig.cli import build_parser, main
from bottrig.harness import RigidityReport

CP1_JSON = {"n": 1, "coeffs": []}


def bundle_json(c, a, y):
    return {"base": CP1_JSON, "c1": [c], "a": a, "y": [y]}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestRingMul:
    def test_inline_json(self, capsys):
        payload = {
            "tower": {"n": 2, "coeffs": [[2, 1, 3]]},
            "e1": [[[1], 1], [[2], 1]],
            "e2": [[[2], 1]],
        }
        code, out, _ = run(capsys, ["ring-mul", json.dumps(payload), "--format", "json"])
        assert code == 0
        assert json.loads(out) == {"product": [[[1, 2], 4]]}

    def test_file_input(self, tmp_path, capsys):
        path = tmp_path / "in.json"
        path.write_text(
            json.dumps({"tower": CP1_JSON, "e1": [[[1], 2]], "e2": [[[], 3]]})
        )
        code, out, _ = run(capsys, ["ring-mul", str(path), "--format", "json"])
        assert code == 0
        assert json.loads(out)["product"] == [[[1], 6]]

    def test_bad_json_exits_2(self, capsys):
        code, _, err = run(capsys, ["ring-mul", "{not json"])
        assert code == 2 and err


class TestAutos:
    def test_contains_reflection_matrix(self, capsys):
        code, out, _ = run(capsys, ["autos", "1", "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["surface_type"] == "odd"
        assert [[1, 0], [-2, -1]] in [e["matrix"] for e in payload["automorphisms"]]
        assert len(payload["automorphisms"]) == 8

    def test_table_and_json_carry_identical_data(self, capsys):
        code, table_out, _ = run(capsys, ["autos", "2"])
        assert code == 0
        code, json_out, _ = run(capsys, ["autos", "2", "--format", "json"])
        payload = json.loads(json_out)
        for entry in payload["automorphisms"]:
            (r1, r2) = entry["matrix"]
            line = f"({r1[0]:>3} {r1[1]:>3}; {r2[0]:>3} {r2[1]:>3})"
            assert line in table_out


class TestExtend:
    def test_does_not_extend_explains(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "extend",
                json.dumps(bundle_json(1, 2, 0)),
                "--matrix", "-1", "0", "0", "-1",
            ],
        )
        assert code == 0
        assert "DoesNotExtend" in out and "y = -(a/2)*c1" in out

    def test_extends_with_corrections(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "extend",
                json.dumps(bundle_json(2, 1, -1)),
                "--matrix", "1", "0", "-2", "-1",
                "--format", "json",
            ],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload == {
            "extends": True,
            "matrix": [[1, 0], [-2, -1]],
            "u1": [0],
            "u2": [0],
        }

    def test_non_automorphism_matrix_exits_2(self, capsys):
        code, _, err = run(
            capsys,
            ["extend", json.dumps(bundle_json(0, 0, 0)), "--matrix", "1", "1", "0", "1"],
        )
        assert code == 2 and "not an automorphism" in err


class TestClassify:
    def test_crossed_swap_certificate(self, capsys):
        spec = {
            "d1": bundle_json(1, 0, 1),
            "d2": bundle_json(1, 0, 1),
            "iso": [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
        }
        code, out, _ = run(capsys, ["classify", json.dumps(spec), "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["conclusion"] == "isomorphic-over-base"
        assert [s["move"] for s in payload["steps"]] == [
            "tensor-twist",
            "decomposable-swap",
            "tensor-twist",
            "decomposable-swap",
        ]

    def test_explain_adds_text(self, capsys):
        spec = {
            "d1": bundle_json(0, 1, 0),
            "d2": bundle_json(0, 1, 0),
            "iso": [[1, 0, 0], [0, 1, 1], [0, 0, -1]],
        }
        code, out, _ = run(capsys, ["classify", json.dumps(spec), "--explain"])
        assert code == 0
        assert "upper triangular" in out

    def test_invalid_iso_exits_2(self, capsys):
        spec = {
            "d1": bundle_json(0, 0, 0),
            "d2": bundle_json(0, 0, 0),
            "iso": [[1, 0, 0], [0, 1, 0], [0, 1, 1]],
        }
        code, _, err = run(capsys, ["classify", json.dumps(spec)])
        assert code == 2 and "isomorphism" in err


class TestVerify:
    def test_verify_s4_json(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify-s4", "--base-height", "0", "--coeff-bound", "2", "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["counterexamples"] == []
        assert payload["instances_scanned"] == 5

    def test_verify_main_table(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify-main", "--base-height", "0", "--coeff-bound", "1"],
        )
        assert code == 0
        assert "counterexamples" in out

    def test_counterexamples_exit_1(self, capsys, monkeypatch):
        bad = RigidityReport({}, "rigidity", counterexamples=[{"kind": "stub"}])
        monkeypatch.setattr("bottrig.cli.verify_rigidity", lambda cfg: bad)
        code, _, _ = run(capsys, ["verify-main", "--base-height", "0"])
        assert code == 1

    def test_jobs_env_default(self, monkeypatch):
        monkeypatch.setenv("BOTTRIG_JOBS", "3")
        parser = build_parser()
        args = parser.parse_args(["verify-s4"])
        assert args.jobs == 3

    def test_unsound_matrix_bound_exits_2(self, capsys):
        code, _, err = run(
            capsys,
            ["verify-s4", "--coeff-bound", "3", "--matrix-bound", "7"],
        )
        assert code == 2 and "minimum" in err


class TestCensus:
    def test_census_json(self, capsys):
        code, out, _ = run(
            capsys,
            ["census", "--base-height", "0", "--coeff-bound", "1", "--format", "json"],
        )
        assert code == 0
        groups = json.loads(out)
        assert sorted(len(c) for c in groups[0]["classes"]) == [1, 2]
