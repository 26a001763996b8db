"""End-to-end CLI tests: exit codes, report files, determinism."""

import json

import numpy as np
import pytest

from kreinalg import algebra_to_instance_dict, build_function_algebra
from kreinalg.cli import main


def write_instance(path, mutate=None):
    blob = algebra_to_instance_dict(build_function_algebra(2))
    if mutate is not None:
        mutate(blob)
    path.write_text(json.dumps(blob))
    return path


@pytest.fixture()
def good_instance(tmp_path):
    return write_instance(tmp_path / "good.json")


class TestVerify:
    def test_function_instance_passes(self, tmp_path, capsys):
        inst = tmp_path / "fn.json"
        assert main(["gen", "--points", "3", "--out", str(inst)]) == 0
        report = tmp_path / "report.json"
        assert main(["verify", "--input", str(inst), "--report", str(report)]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out
        blob = json.loads(report.read_text())
        assert blob["passed"] is True
        assert any(c["name"] == "odd_symmetry" for c in blob["checks"])

    def test_matrix_instance_passes(self, good_instance):
        assert main(["verify", "--input", str(good_instance)]) == 0

    def test_conjugated_instance_passes(self, tmp_path):
        inst = tmp_path / "conj.json"
        assert main(["gen", "--points", "2", "--conjugate", "--out", str(inst)]) == 0
        assert main(["verify", "--input", str(inst)]) == 0

    def test_broken_generator_fails_with_exit_1(self, tmp_path, capsys):
        def scale_generator(blob):
            blob["odd_generator"] = [[2.0 * re, 2.0 * im] for re, im in blob["odd_generator"]]

        inst = write_instance(tmp_path / "broken.json", scale_generator)
        assert main(["verify", "--input", str(inst)]) == 1
        out = capsys.readouterr().out
        assert "odd_symmetry" in out and "FAIL" in out

    def test_non_unitary_symmetry_is_a_schema_error(self, tmp_path, capsys):
        def bend_u(blob):
            blob["symmetry_unitary"][0][0] = [2.0, 0.0]

        inst = write_instance(tmp_path / "bad_u.json", bend_u)
        assert main(["verify", "--input", str(inst)]) == 2
        assert "not unitary" in capsys.readouterr().err

    def test_garbage_json_is_a_schema_error(self, tmp_path, capsys):
        inst = tmp_path / "garbage.json"
        inst.write_text("{not json")
        assert main(["verify", "--input", str(inst)]) == 2
        assert "line" in capsys.readouterr().err

    def test_missing_field_is_a_schema_error(self, tmp_path, capsys):
        inst = write_instance(tmp_path / "gap.json", lambda blob: blob.pop("basis"))
        assert main(["verify", "--input", str(inst)]) == 2
        assert "basis" in capsys.readouterr().err

    def test_missing_file_is_a_schema_error(self, tmp_path):
        assert main(["verify", "--input", str(tmp_path / "absent.json")]) == 2


class TestSpectrum:
    def test_passes_and_reports(self, tmp_path):
        inst = tmp_path / "fn.json"
        main(["gen", "--points", "2", "--conjugate", "--out", str(inst)])
        report = tmp_path / "spec_report.json"
        assert main(["spectrum", "--input", str(inst), "--report", str(report)]) == 0
        blob = json.loads(report.read_text())
        assert blob["spectrum_size"] == 2
        assert blob["transform_rank"] == 4
        assert len(blob["characters"]) == 2

    def test_nonfull_instance_exits_3(self, tmp_path, capsys):
        base = build_function_algebra(2)
        import kreinalg

        trimmed = kreinalg.KreinAlgebra(
            np.delete(base.basis, 3, axis=0), base.symmetry_unitary
        )
        inst = tmp_path / "nonfull.json"
        inst.write_text(json.dumps(algebra_to_instance_dict(trimmed)))
        report = tmp_path / "err_report.json"
        assert main(["spectrum", "--input", str(inst), "--report", str(report)]) == 3
        assert "odd part not full" in capsys.readouterr().err
        blob = json.loads(report.read_text())
        assert blob["error"]["hypothesis"] == "full"

    def test_noncommutative_instance_exits_3(self, tmp_path, capsys, m2_algebra):
        inst = tmp_path / "m2.json"
        inst.write_text(json.dumps(algebra_to_instance_dict(m2_algebra)))
        assert main(["spectrum", "--input", str(inst)]) == 3
        assert "hypothesis failure" in capsys.readouterr().err


class TestGen:
    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert main(["gen", "--points", "3", "--conjugate", "--seed", "5", "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_the_frame(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["gen", "--points", "3", "--conjugate", "--seed", "5", "--out", str(a)])
        main(["gen", "--points", "3", "--conjugate", "--seed", "6", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()

    def test_plain_gen_emits_function_kind(self, tmp_path):
        out = tmp_path / "fn.json"
        main(["gen", "--points", "4", "--out", str(out)])
        assert json.loads(out.read_text())["kind"] == "function_algebra"

    def test_rejects_nonpositive_points(self, tmp_path):
        assert main(["gen", "--points", "0", "--out", str(tmp_path / "x.json")]) == 2


class TestCounterexample:
    def test_landscape(self, tmp_path):
        report = tmp_path / "cells.json"
        assert main(["counterexample", "--grid", "8", "--report", str(report)]) == 0
        blob = json.loads(report.read_text())
        assert blob["unique_pass_at_theta0_minus"] is True
        assert blob["pi_flagged_non_banach"] is True
        assert blob["passing_cells"] == [[0.0, -1]]
        pi_cells = [
            c
            for c in blob["cells"]
            if abs(c["theta"] - np.pi) < 1e-12
        ]
        assert len(pi_cells) == 2
        for cell in pi_cells:
            assert not cell["is_banach"]
            ratio = cell["witness"]["lhs"] / cell["witness"]["rhs"]
            assert ratio == pytest.approx(np.sqrt(2.0), abs=1e-9)

    def test_odd_grid_rejected(self, capsys):
        assert main(["counterexample", "--grid", "7"]) == 2
        assert "grid" in capsys.readouterr().err

    def test_bad_samples_rejected(self):
        assert main(["counterexample", "--grid", "8", "--samples", "0"]) == 2


class TestParser:
    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_missing_required_argument_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["verify"])
        assert err.value.code == 2
