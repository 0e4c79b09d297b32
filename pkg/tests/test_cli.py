import json

import pytest

from pblab.cli import main, parse_complex, parse_gl2


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestParsers:
    def test_complex_forms(self):
        assert parse_complex("1.5:2") == 1.5 + 2j
        assert parse_complex("3") == 3 + 0j
        assert parse_complex("1+1i") == 1 + 1j
        assert parse_complex("1+1j") == 1 + 1j
        with pytest.raises(Exception):
            parse_complex("not-a-number")

    def test_matrix_forms(self):
        g = parse_gl2("1,1,0,1")
        assert (g.g11, g.g12, g.g21, g.g22) == (1, 1, 0, 1)
        g = parse_gl2("1:0,0:2,0:0,1:0")
        assert g.g12 == 2j
        with pytest.raises(Exception):
            parse_gl2("1,2,3")
        with pytest.raises(Exception):
            parse_gl2("1,2,2,4")  # singular


class TestSubcommands:
    def test_hermite_eval_example(self, capsys):
        code, out = run_cli(capsys, "hermite", "--n1", "0", "--n2", "0", "--eval", "1+1i")
        payload = json.loads(out)
        assert code == 0
        assert payload["schema"] == 1
        assert payload["results"][0]["re"] == pytest.approx(1.0)

    def test_rep_homomorphism_example(self, capsys):
        code, out = run_cli(capsys, "rep", "--g", "1,1,0,1", "--L", "2", "--check", "homomorphism")
        payload = json.loads(out)
        assert code == 0 and payload["passed"]

    def test_quantize_table_example(self, capsys):
        code, out = run_cli(
            capsys, "quantize", "--weight", "gauss-s", "--s", "0", "--n-max", "5"
        )
        payload = json.loads(out)
        assert code == 0
        closed = [row["closed_form"] for row in payload["results"]]
        assert closed == [2.0, -2.0, 2.0, -2.0, 2.0, -2.0]

    def test_deformed_gram(self, capsys):
        code, out = run_cli(capsys, "deformed", "--g", "1,1,0,1", "--l-max", "4", "--check", "gram")
        assert code == 0
        assert json.loads(out)["results"][0]["deviation"] <= 1e-10

    def test_fock_all(self, capsys):
        code, out = run_cli(capsys, "fock", "--g", "1,1,0,1", "--l-max", "8")
        payload = json.loads(out)
        assert code == 0
        names = {row["check"] for row in payload["results"]}
        assert {"two-mode-ccr", "pseudo-commutator", "cuntz-relations"} <= names

    def test_displace_checks(self, capsys):
        code, out = run_cli(
            capsys, "displace", "--z1", "1", "--z2", "0:1", "--l-max", "20", "--check-l", "6"
        )
        assert code == 0

    def test_csv_format(self, capsys):
        code, out = run_cli(
            capsys, "asympt", "--r", "0.5", "--n1", "200", "--d", "0", "--format", "csv"
        )
        assert code == 0
        header = out.splitlines()[0].split(",")
        assert header[:7] == ["n1", "n2", "r", "nu_or_d", "log_exact", "log_estimate", "ratio"]

    def test_exit_code_two_on_bad_config(self, capsys):
        code, _ = run_cli(capsys, "asympt", "--r", "1.5", "--n1", "10", "--d", "0")
        assert code == 2

    def test_exit_code_one_on_failed_check(self, capsys):
        code, out = run_cli(
            capsys, "rep", "--g", "1,1,0,1", "--L", "4", "--check", "inverse", "--tol", "1e-30"
        )
        assert code == 1
        assert json.loads(out)["passed"] is False


class TestOutputs:
    def test_atomic_file_output(self, tmp_path, capsys):
        out_file = tmp_path / "report.json"
        code, _ = run_cli(
            capsys, "hermite", "--check", "equivalence", "--max-degree", "4",
            "--out", str(out_file),
        )
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["passed"] is True
        assert not list(tmp_path.glob(".pblab-*"))  # no temp litter

    def test_determinism(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["rep", "--g", "1,1,0,1", "--L", "6", "--check", "homomorphism", "--seed", "3"]
        run_cli(capsys, *argv, "--out", str(a))
        run_cli(capsys, *argv, "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_config_file_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("# sweep setup\nl-max = 4\ncheck = gram\n")
        code, out = run_cli(
            capsys, "deformed", "--g", "1,1,0,1", "--config", str(cfg)
        )
        assert code == 0
        assert json.loads(out)["params"]["l_max"] == 4

    def test_config_rejects_unknown_keys(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("no-such-option = 3\n")
        code, _ = run_cli(capsys, "deformed", "--g", "1,1,0,1", "--config", str(cfg))
        assert code == 2
