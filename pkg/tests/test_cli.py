"""File formats and the command-line interface."""

import json

import numpy as np
import pytest

import pcx
from pcx.cli import main
from pcx.io import dump_matrix_json, load_matrix, parse_matrix_csv, parse_matrix_json, parse_value

CSV_353 = "1,3,5\n1/3,1,3\n1/5,1/3,1\n"
JSON_353 = '{"n": 3, "upper": [3, 5, 3]}'
CSV_CONSISTENT = "1,2,4\n0.5,1,2\n0.25,0.5,1\n"


@pytest.fixture
def m353_csv(tmp_path):
    p = tmp_path / "m353.csv"
    p.write_text(CSV_353)
    return str(p)


@pytest.fixture
def m353_json(tmp_path):
    p = tmp_path / "m353.json"
    p.write_text(JSON_353)
    return str(p)


class TestParsing:
    def test_fraction_matches_long_decimal(self):
        assert parse_value("1/3") == parse_value("0.3333333333333333")
        assert parse_value("2/3") == parse_value("0.66666666666666663")

    def test_csv_and_json_agree(self):
        a = parse_matrix_csv(CSV_353)
        b = parse_matrix_json(JSON_353)
        np.testing.assert_array_equal(a.upper, b.upper)

    def test_json_fraction_strings_and_labels(self):
        A = parse_matrix_json('{"n": 2, "upper": ["1/3"], "labels": ["x", "y"]}')
        assert A.upper[0] == 1 / 3
        assert A.labels == ("x", "y")

    def test_json_roundtrip(self):
        A = pcx.build_matrix(3, [3.0, 5.0, 3.0], labels=["a", "b", "c"])
        B = parse_matrix_json(dump_matrix_json(A))
        np.testing.assert_array_equal(A.upper, B.upper)
        assert B.labels == A.labels

    def test_csv_reciprocity_violation_has_position(self):
        bad = "1,3,5\n0.4,1,3\n1/5,1/3,1\n"
        with pytest.raises(pcx.MatrixFormatError, match="line 2, column 1"):
            parse_matrix_csv(bad)

    def test_csv_diagonal_violation(self):
        bad = "1,3\n1/3,2\n"
        with pytest.raises(pcx.MatrixFormatError, match="diagonal"):
            parse_matrix_csv(bad)

    def test_csv_bad_token_position(self):
        bad = "1,3\n1/3,oops\n"
        with pytest.raises(pcx.MatrixFormatError, match="line 2, column 2"):
            parse_matrix_csv(bad)

    def test_csv_ragged_rows(self):
        with pytest.raises(pcx.MatrixFormatError, match="expected 3 values"):
            parse_matrix_csv("1,3,5\n1/3,1\n1/5,1/3,1\n")

    def test_json_requires_keys(self):
        with pytest.raises(pcx.MatrixFormatError):
            parse_matrix_json('{"upper": [1]}')

    def test_load_dispatches_on_content(self, tmp_path):
        p = tmp_path / "matrix.txt"
        p.write_text(JSON_353)
        assert load_matrix(p).n == 3


class TestSolveCommand:
    def test_llsm_weights(self, m353_csv, capsys):
        assert main(["solve", m353_csv, "--method", "llsm", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        w = doc["results"]["llsm"]["weights_product_one"]
        np.testing.assert_allclose(w, [2.46621207, 1.0, 0.40548013], atol=1e-6)

    def test_all_methods_agree_on_consistent(self, tmp_path, capsys):
        p = tmp_path / "c.csv"
        p.write_text(CSV_CONSISTENT)
        assert main(["solve", str(p), "--method", "all", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        vectors = [doc["results"][m]["weights_sum_one"] for m in ("lsm", "wlsm", "llsm", "evm")]
        for v in vectors[1:]:
            np.testing.assert_allclose(v, vectors[0], atol=1e-8)

    def test_reciprocity_violation_exits_1(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("1,3,5\n0.4,1,3\n1/5,1/3,1\n")
        assert main(["solve", str(p)]) == 1
        assert "not reciprocal" in capsys.readouterr().err

    def test_non_convergence_exits_2(self, m353_csv):
        assert main(["solve", m353_csv, "--method", "lsm", "--max-iters", "1", "--starts", "2"]) == 2

    def test_csv_json_same_results(self, m353_csv, m353_json, capsys):
        main(["solve", m353_csv, "--method", "evm", "--json"])
        out_csv = capsys.readouterr().out
        main(["solve", m353_json, "--method", "evm", "--json"])
        out_json = capsys.readouterr().out
        a, b = json.loads(out_csv), json.loads(out_json)
        assert a["results"] == b["results"]

    def test_pcx_seed_env_matches_explicit_flag(self, m353_csv, capsys, monkeypatch):
        main(["solve", m353_csv, "--method", "lsm", "--seed", "5", "--json"])
        explicit = capsys.readouterr().out
        monkeypatch.setenv("PCX_SEED", "5")
        main(["solve", m353_csv, "--method", "lsm", "--json"])
        via_env = capsys.readouterr().out
        assert json.loads(explicit) == json.loads(via_env)


class TestInconsistencyCommand:
    def test_353_unacceptable(self, m353_csv, capsys):
        assert main(["inconsistency", m353_csv]) == 0
        out = capsys.readouterr().out
        assert "0.444444444444" in out
        assert "unacceptable" in out
        assert "(1,2,3)" in out  # worst triad, 1-based

    def test_232_acceptable(self, tmp_path, capsys):
        p = tmp_path / "m.json"
        p.write_text('{"n": 3, "upper": [2, 3, 2]}')
        main(["inconsistency", str(p)])
        out = capsys.readouterr().out
        assert "0.25" in out
        assert "unacceptable" not in out

    def test_consistent_zero(self, tmp_path, capsys):
        p = tmp_path / "c.csv"
        p.write_text(CSV_CONSISTENT)
        main(["inconsistency", str(p)])
        assert "inconsistency: 0" in capsys.readouterr().out

    def test_all_triads_json(self, m353_csv, capsys):
        main(["inconsistency", m353_csv, "--all-triads", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["global_value"] == pytest.approx(4 / 9, abs=1e-15)
        assert len(doc["all_triads"]) == 1


class TestAnalyzeCommand:
    def test_232_unique(self, tmp_path, capsys):
        p = tmp_path / "m.json"
        p.write_text('{"n": 3, "upper": [2, 3, 2]}')
        main(["analyze", str(p)])
        out = capsys.readouterr().out
        assert "UNIQUE_GUARANTEED" in out
        assert "3.33019067679" in out  # 12 digits of a0

    def test_353_violation(self, m353_csv, capsys):
        main(["analyze", m353_csv])
        out = capsys.readouterr().out
        assert "UNKNOWN" in out
        assert "a[1,3] = 5" in out

    def test_curves_csv(self, m353_csv, capsys, tmp_path):
        out_path = tmp_path / "curves.csv"
        main(["analyze", m353_csv, "--curves", str(out_path)])
        capsys.readouterr()
        lines = out_path.read_text().splitlines()
        assert lines[0] == "w,phi,psi"
        row = dict(zip(("w", "phi", "psi"), (float(x) for x in lines[2001].split(","))))
        assert row["w"] == 1.0
        assert row["phi"] == pytest.approx(0.267949, abs=1e-6)
        assert row["psi"] == pytest.approx(3.732051, abs=1e-6)

    def test_json_output(self, m353_csv, capsys):
        main(["analyze", m353_csv, "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "unknown"
        assert doc["violations"] == [{"i": 0, "j": 2, "value": 5.0}]


class TestSimulateCommand:
    def test_writes_deterministic_outputs(self, tmp_path, capsys):
        args = ["simulate", "--scale", "1-3", "--n", "4", "--trials", "10", "--seed", "1"]
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        agg = json.loads((tmp_path / "a.json").read_text())
        assert agg["fraction_unique"] == 1.0

    def test_zero_trials_is_config_error(self, tmp_path):
        assert main(["simulate", "--trials", "0", "--out", str(tmp_path / "x")]) == 1

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"scale": "1-5", "n": 3, "trials": 5, "seed": 2}))
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "run")]) == 0
        assert (tmp_path / "run.csv").exists()


class TestVerifyCommand:
    def test_353_agrees(self, m353_csv, capsys):
        assert main(["verify", m353_csv]) == 0
        assert "AGREE" in capsys.readouterr().out

    def test_consistent_agrees(self, tmp_path, capsys):
        p = tmp_path / "c.csv"
        p.write_text(CSV_CONSISTENT)
        assert main(["verify", str(p), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["agree"]
        assert doc["solver_objective"] <= 1e-10

    def test_5x5_rejected(self, tmp_path, capsys):
        A = pcx.from_weights([1.0, 2.0, 3.0, 4.0, 5.0])
        p = tmp_path / "big.json"
        p.write_text(dump_matrix_json(A))
        assert main(["verify", str(p)]) == 1
        assert "n <= 4" in capsys.readouterr().err


class TestTopLevel:
    def test_missing_file(self, capsys):
        assert main(["solve", "/nonexistent/m.csv"]) == 1
        assert "error" in capsys.readouterr().err

    def test_bad_pcx_seed(self, m353_csv, capsys, monkeypatch):
        monkeypatch.setenv("PCX_SEED", "not-a-number")
        assert main(["solve", m353_csv, "--method", "lsm"]) == 1
