import io
import json
import subprocess
import sys

import pytest

from susy8v import cli


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestExamples:
    def test_verify_unit_weights(self):
        code, out, err = call("verify", "--L", "3", "--weights", "1,1,1,1")
        assert code == 0 and err == ""
        doc = json.loads(out)
        assert doc["verdict"] == "pass"
        rec = next(c for c in doc["checks"] if c["name"] == "stroganov/w0/L=03")
        assert rec["value"] == 8 and rec["details"]["multiplicity"] == 2

    def test_word_sum(self):
        code, out, _ = call("word-sum", "--n", "2", "--weights", "2,1")
        assert code == 0
        assert json.loads(out)["value"] == 243

    def test_elliptic(self):
        code, out, _ = call("elliptic", "--eta", "pi/3", "--nome", "0.2", "--u", "0.4")
        assert code == 0
        assert json.loads(out)["constraint_residual"] < 1e-11


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--bogus"],
            ["frobnicate"],
            [],
            ["verify", "--L", "x"],
            ["verify", "--seed", "-3"],
            ["verify", "--tol", "nokey"],
            ["word-sum", "--n", "2", "--weights", "1,2,3"],
            ["verify", "--weights", "1,1,1,1", "--nome", "0.2", "--u", "0.3"],
            ["verify", "--weights", "1,1,1,1.01"],
            ["elliptic", "--eta", "pi/3", "--nome", "1.5", "--u", "0.4"],
            ["spectrum", "--L", "14", "--weights", "1,1,1,1"],
            ["verify", "--suite", "constraint", "--tol", "bogus=1e-3"],
        ],
    )
    def test_exit_two_single_line(self, argv):
        code, out, err = call(*argv)
        assert code == 2
        assert out == ""
        assert err.count("\n") == 1 and err.startswith("susy8v: error:")

    def test_failed_verification_exit_one(self):
        code, out, _ = call("verify", "--suite", "constraint", "--weights", "1,1,1,1.01", "--allow-unconstrained")
        assert code == 1
        assert json.loads(out)["verdict"] == "fail"

    def test_help_lists_flags(self, capsys):
        code, out, _ = call("verify", "--help")
        assert code == 0
        text = capsys.readouterr().out
        for flag in ("--L", "--weights", "--eta", "--nome", "--u", "--zeta", "--samples", "--seed", "--tol",
                     "--dense-limit", "--out", "--format", "--allow-unconstrained", "--suite", "--all"):
            assert flag in text
        code, _, _ = call("spectrum", "--help")
        assert "--operator" in capsys.readouterr().out


class TestCommands:
    def test_out_file(self, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = call("verify", "--suite", "kernel-law", "--L", "2..5", "--zeta", "0.5", "--out", str(path))
        assert code == 0 and out == ""
        doc = json.loads(path.read_text())
        assert [c["value"] for c in doc["checks"]] == [0, 2, 0, 2]

    def test_spectrum_csv(self):
        code, out, _ = call("spectrum", "--L", "3", "--weights", "1,1,1,1", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "re,im,multiplicity"
        assert "8.0,0.0,2" in lines

    def test_spectrum_xyz(self):
        code, out, _ = call("spectrum", "--L", "5", "--operator", "xyz", "--zeta", "1")
        clusters = json.loads(out)["clusters"]
        bottom = min(clusters, key=lambda c: c["value"])
        assert bottom["value"] == pytest.approx(-5.0) and bottom["multiplicity"] == 2

    def test_stroganov_triple(self):
        code, out, _ = call("stroganov", "--n", "2", "--weights", "2,1,1")
        doc = json.loads(out)
        assert code == 0 and doc["report"]["theta"] == pytest.approx(243)

    def test_stroganov_power_iteration_above_limit(self):
        code, out, _ = call("stroganov", "--L", "5", "--weights", "2,1,1", "--dense-limit", "3")
        assert code == 0 and json.loads(out)["verdict"] == "pass"

    def test_six_vertex_spectrum(self):
        # d = 0 lies outside the supersymmetric family, so it must be opted into
        assert call("stroganov", "--L", "3", "--weights", "1,1,1.7320508075688772,0")[0] == 2
        code, out, _ = call("stroganov", "--L", "3", "--weights", "1,1,1.7320508075688772,0", "--allow-unconstrained")
        assert code == 0
        assert json.loads(out)["report"]["multiplicity"] == 2

    def test_susy(self):
        code, out, _ = call("susy", "--L", "5", "--zeta", "0.7")
        doc = json.loads(out)
        assert code == 0 and doc["kernel_dimension"] == 2

    def test_yangbaxter(self):
        code, out, _ = call("yangbaxter", "--eta", "pi/3", "--nome", "0.2", "--u", "0.7", "--v", "0.3")
        assert code == 0 and json.loads(out)["residual"] < 1e-10

    def test_determinism(self):
        a = call("verify", "--all", "--seed", "11", "--no-timestamp")[1]
        b = call("verify", "--all", "--seed", "11", "--no-timestamp")[1]
        assert a == b

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "susy8v", "word-sum", "--n", "1", "--weights", "1,1"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 8
