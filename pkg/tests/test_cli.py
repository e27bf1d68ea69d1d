import json
import subprocess
import sys

import numpy as np
import pytest

from decaycert import Theorem1Params, decompose, gen_scalar, make_certificate_t1
from decaycert.cli import main, parse_complex
from decaycert.report import validate


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    validate(doc)
    return code, doc


def strip_timings(doc):
    doc = dict(doc)
    doc.pop("timings", None)
    return doc


class TestParseComplex:
    def test_forms(self):
        assert parse_complex("1") == 1
        assert parse_complex("-2.5") == -2.5
        assert parse_complex("1+1i") == 1 + 1j
        assert parse_complex("3-0.5j") == 3 - 0.5j
        assert parse_complex(" 2 + 4i ") == 2 + 4j

    def test_rejects(self):
        with pytest.raises(ValueError):
            parse_complex("one")
        with pytest.raises(ValueError):
            parse_complex("inf")


class TestSubcommands:
    def test_decompose(self, capsys):
        code, doc = run_cli(
            capsys, "decompose", "--generate", "scalar", "--a", "1+1i", "--d", "2"
        )
        assert code == 0
        assert doc["assumptions"]["holds_A"] and doc["assumptions"]["holds_C"]
        assert doc["assumptions"]["n"] == 1
        assert "certificates" not in doc

    def test_certify_pinned_exact(self, capsys):
        code, doc = run_cli(
            capsys, "certify", "--generate", "scalar", "--a", "1+1i", "--d", "2",
            "--variant", "t1", "--k", "1", "--m", "0.5",
        )
        assert code == 0
        cert = make_certificate_t1(
            decompose(gen_scalar(1 + 1j, 2)), Theorem1Params(k=1.0, m=0.5)
        )
        got = doc["certificates"]["theorem1"]
        assert got["rate"] == cert.rate and got["valid"]
        assert doc["best_variant"] == "theorem1"
        assert doc["verification"]["contraction"]["ok"]

    def test_spectrum(self, capsys):
        code, doc = run_cli(
            capsys, "spectrum", "--generate", "scalar", "--a", "1", "--d", "2",
            "--variant", "t1",
        )
        assert code == 0
        assert doc["spectrum"]["abscissa"] == pytest.approx(-1.0)
        assert doc["spectrum"]["localized"] is True
        assert doc["spectrum"]["max_residual"] <= 1e-10
        evs = doc["spectrum"]["eigenvalues"]
        assert len(evs) == 2 and all(e["re"] == pytest.approx(-1.0) for e in evs)

    def test_simulate_with_csv(self, capsys, tmp_path):
        csv_path = tmp_path / "traj.csv"
        code, doc = run_cli(
            capsys, "simulate", "--generate", "scalar", "--a", "1", "--d", "2",
            "--csv", str(csv_path), "--points", "128",
        )
        assert code == 0
        sim = doc["simulation"]
        assert sim["envelope_ok"] and sim["stepwise_ok"]
        assert sim["samples"] == 128
        assert sim["csv"] == str(csv_path)
        assert csv_path.exists()
        assert len(csv_path.read_text().splitlines()) == 129

    def test_check_full_pipeline(self, capsys):
        code, doc = run_cli(
            capsys, "check", "--generate", "scalar", "--a", "1+1i", "--d", "2"
        )
        assert code == 0
        for key in ("assumptions", "certificates", "verification", "spectrum",
                    "simulation", "timings"):
            assert key in doc
        assert doc["simulation"]["fitted_rate"] is not None

    def test_generate_then_certify_files(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, doc = run_cli(
            capsys, "generate", "--generate", "random", "--n", "4", "--seed", "9",
            "--A-out", "A.mtx", "--D-out", "D.mtx",
        )
        assert code == 0
        assert doc["input"]["A"] == "A.mtx"
        code, doc = run_cli(capsys, "certify", "--A", "A.mtx", "--D", "D.mtx")
        assert code == 0
        assert doc["input"]["kind"] == "files"
        assert doc["best_variant"] is not None

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        main(["decompose", "--generate", "scalar", "--out", str(out)])
        captured = capsys.readouterr()
        assert out.read_text() == captured.out


class TestExitCodes:
    def test_input_error_missing_source(self, capsys):
        code = main(["certify"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 1
        assert doc["error"]["type"] == "ValueError"

    def test_input_error_unreadable_file(self, capsys, tmp_path):
        missing = tmp_path / "nope.mtx"
        code = main(["certify", "--A", str(missing), "--D", str(missing)])
        doc = json.loads(capsys.readouterr().out)
        assert code == 1
        assert doc["error"]["type"] == "FileNotFoundError"

    def test_input_error_malformed_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.mtx"
        bad.write_text("%%MatrixMarket matrix array real general\n2 2\n1.0\n")
        code = main(["certify", "--A", str(bad), "--D", str(bad)])
        doc = json.loads(capsys.readouterr().out)
        assert code == 1
        assert doc["error"]["type"] == "ParseError"

    def test_usage_error_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["certify", "--bogus"])
        assert exc.value.code == 1

    def test_unknown_family_exits_1(self, capsys):
        code = main(["certify", "--generate", "mystery"])
        assert code == 1

    def test_pinned_k_beyond_beta_exits_2(self, capsys):
        code = main(
            ["certify", "--generate", "scalar", "--a", "1", "--d", "2",
             "--variant", "t1", "--k", "5", "--m", "0.5"]
        )
        doc = json.loads(capsys.readouterr().out)
        assert code == 2
        assert doc["certificates"]["theorem1"]["type"] == "InvalidParams"
        assert doc["best_variant"] is None

    def test_invalid_pinned_certificate_exits_2(self, capsys):
        # k=1.9 < beta=2 is admissible but certifies nothing at m=0.99
        code = main(
            ["certify", "--generate", "scalar", "--a", "1+1i", "--d", "2",
             "--variant", "t1", "--k", "1.9", "--m", "0.99"]
        )
        doc = json.loads(capsys.readouterr().out)
        assert code == 2
        assert doc["certificates"]["theorem1"]["valid"] is False

    def test_incomplete_pin_exits_1(self, capsys):
        code = main(
            ["certify", "--generate", "scalar", "--variant", "t1", "--k", "1"]
        )
        assert code == 1


class TestDeterminism:
    def test_check_reports_identical_modulo_timings(self, capsys):
        argv = ["check", "--generate", "random", "--n", "4", "--seed", "3"]
        _, doc1 = run_cli(capsys, *argv)
        _, doc2 = run_cli(capsys, *argv)
        assert strip_timings(doc1) == strip_timings(doc2)
        assert doc1 != {}


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "decaycert", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("decaycert ")

    def test_subprocess_check(self):
        proc = subprocess.run(
            [sys.executable, "-m", "decaycert", "check", "--generate", "scalar",
             "--a", "1+1i", "--d", "2"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["best_variant"] is not None
