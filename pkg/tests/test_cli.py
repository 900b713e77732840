import json
import subprocess
import sys
import xml.dom.minidom

import pytest

from clifftorsion.cli import main

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestGens:
    def test_k1(self, capsys):
        code, data = run_json(capsys, "gens", "--k", "1")
        assert code == 0
        assert [(g["label"], g["type"]) for g in data["generators"]] == [("e1", "imaginary"), ("e2", "imaginary")]

    def test_k2(self, capsys):
        code, out, _ = run(capsys, "gens", "--k", "2")
        assert code == 0 and "e1 = I2 ⊗ E1" in out and "e4 = E2 ⊗ B" in out

    @pytest.mark.parametrize("k", ["0", "7", "-1", "x"])
    def test_bad_k(self, capsys, k):
        with pytest.raises(SystemExit) as exc:
            main(["gens", "--k", k])
        assert exc.value.code == 2


class TestClassify:
    def test_k2_labels(self, capsys):
        code, data = run_json(capsys, "classify", "--k", "2")
        assert code == 0
        assert [c["canonical"] for c in data["classes"]] == ["e", "e1", "e2", "e3", "e4", "e14", "e24", "e34"]
        assert data["structure_theorem"]["passed"]

    @pytest.mark.parametrize("k, count", [(1, 4), (3, 16)])
    def test_counts(self, capsys, k, count):
        _, data = run_json(capsys, "classify", "--k", str(k))
        assert len(data["classes"]) == count

    def test_text(self, capsys):
        code, out, _ = run(capsys, "classify", "--k", "2")
        assert "[e14]" in out and "[PASS] structure-theorem k=2" in out


class TestTable1:
    def test_golden(self, capsys):
        code, out, _ = run(capsys, "table1")
        assert code == 0 and out == (DATA / "table1_golden.txt").read_text()

    def test_json(self, capsys):
        _, data = run_json(capsys, "table1")
        rows = {c["class"]: c["fixed_points"] for c in data["classes"]}
        assert len(rows) == 7 and all(len(v) == 16 for v in rows.values())
        assert {"v0011", "v2233"} <= set(rows["e3"])

    def test_wrong_k(self):
        with pytest.raises(SystemExit) as exc:
            main(["table1", "--k", "3"])
        assert exc.value.code == 2


class TestPermsAndDynamics:
    def test_perms(self, capsys):
        code, data = run_json(capsys, "perms", "--k", "3")
        assert code == 0
        names = {c["class"]: c["name"] for c in data["classes"]}
        assert names["e246"] == "A4∘(1)∘A1"
        assert data["group_structure"]["passed"]

    def test_dynamics_sigma(self, capsys):
        code, data = run_json(capsys, "dynamics", "--k", "2", "--sigma", "(17)(28)")
        assert code == 0
        assert {k: data[k] for k in ("p", "q", "fp_count", "tc_count", "product")} == {
            "p": 2, "q": 4, "fp_count": 64, "tc_count": 4, "product": 256,
        }

    def test_dynamics_classes(self, capsys):
        code, data = run_json(capsys, "dynamics", "--k", "2")
        assert code == 0 and len(data) == 7
        assert all(d["fp_equals_tc"] and d["fp_count"] == 16 for d in data)

    def test_dynamics_class_and_n(self, capsys):
        code, data = run_json(capsys, "dynamics", "--k", "1", "--class", "e1", "--n", "3")
        assert code == 0 and data["fp_count"] == 9

    @pytest.mark.parametrize("extra", [["--sigma", "(19)"], ["--class", "e99"], ["--sigma", "(12)", "--class", "e1"]])
    def test_dynamics_usage(self, extra):
        with pytest.raises(SystemExit) as exc:
            main(["dynamics", "--k", "2", *extra])
        assert exc.value.code == 2


class TestDiagram:
    def test_real(self, capsys, tmp_path):
        code, out, _ = run(capsys, "diagram", "--k", "3", "--class", "e246", "--out", str(tmp_path / "d"))
        assert code == 0
        text = (tmp_path / "d.txt").read_text()
        for a, b in [(1, 6), (2, 5), (3, 8), (4, 7)]:
            assert f"{a} ----> {b}" in text
        xml.dom.minidom.parseString((tmp_path / "d.svg").read_text())

    def test_identity_parallel(self, capsys, tmp_path):
        run(capsys, "diagram", "--k", "2", "--class", "e", "--out", str(tmp_path / "id"))
        lines = (tmp_path / "id.txt").read_text().splitlines()[1:]
        assert all(line.split("---->")[0].strip() == line.split("---->")[1].strip() for line in lines)

    def test_imaginary(self, capsys, tmp_path):
        code, data = run_json(capsys, "diagram", "--k", "3", "--class", "e1", "--out", str(tmp_path / "i"))
        assert code == 0 and data["imaginary"]
        assert data["arrows"][:2] == [[1, 2], [2, 1]]
        assert "#dddddd" in (tmp_path / "i.svg").read_text()

    def test_unknown_class(self):
        with pytest.raises(SystemExit) as exc:
            main(["diagram", "--k", "2", "--class", "e99"])
        assert exc.value.code == 2

    def test_k_too_large(self):
        with pytest.raises(SystemExit) as exc:
            main(["diagram", "--k", "5", "--class", "e"])
        assert exc.value.code == 2


class TestVerifyAll:
    def test_defaults(self, capsys):
        code, out, _ = run(capsys, "verify-all")
        assert code == 0
        assert out.strip().splitlines()[-1].startswith("verify-all: PASS")

    def test_json_roundtrip(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code = main(["verify-all", "--k-max", "2", "--n-list", "2,3", "--format", "json", "--out", str(target)])
        data = json.loads(target.read_text())
        assert code == 0 and data["passed"] and data["failing_checks"] == []
        assert json.loads(json.dumps(data)) == data

    def test_injected_fault(self, capsys):
        code, out, err = run(capsys, "verify-all", "--k-max", "2", "--n-list", "2", "--inject-fault", "2,3")
        assert code == 1
        manifest = json.loads(err)
        invariants = {(f["suite"], f["invariant"]) for f in manifest["failing_checks"]}
        assert ("clifford-relations k=2", "square") in invariants
        # the fault is scoped to the run
        assert main(["verify-all", "--k-max", "1", "--n-list", "2", "--format", "json"]) == 0

    @pytest.mark.slow
    def test_k_max_5(self, capsys):
        code, data = run_json(capsys, "verify-all", "--k-max", "5", "--n-list", "2")
        assert code == 0
        assert any(s["details"].get("points") == 10_000 for s in data["suites"])

    def test_usage(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify-all", "--k-max", "9"])
        assert exc.value.code == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "clifftorsion", "gens", "--k", "0"], capture_output=True, text=True
    )
    assert proc.returncode == 2 and "must be >= 1" in proc.stderr
