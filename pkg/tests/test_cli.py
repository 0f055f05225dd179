"""CLI surface: analyze/check/gen, exit codes, determinism."""

import json
import math
import os

import pytest

from singtrace.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestAnalyze:
    def test_harmonic_limits(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "gen:harmonic",
                               "--quantities", "zeta-limit,dixmier", "--p", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == "1"
        zl = payload["quantities"]["zeta-limit"]
        dx = payload["quantities"]["dixmier"]
        assert zl["converged"] and dx["converged"]
        assert abs(zl["value"] - 1.0) < 1e-3
        assert abs(dx["value"] - 1.0) < 1e-3

    def test_separation_verdict(self, capsys):
        code, out, _ = run_cli(capsys, "analyze",
                               "gen:counterexample_x:2:30",
                               "--quantities", "zp,quasinorm",
                               "--p", "2", "--psi", "psi_p:2")
        assert code == 0
        payload = json.loads(out)
        assert payload["verdicts"]["separation"] is True
        assert payload["quantities"]["quasinorm"]["value"] == "inf"
        zp = payload["quantities"]["zp"]
        assert abs(zp["plus_variant"]
                   - math.sqrt(1.0 / (2.0 * math.log(2.0)))) < 0.05

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "missing.json")
        assert code == 2
        assert "error[" in err

    def test_bad_quantity_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "gen:harmonic",
                               "--quantities", "nonsense")
        assert code == 2

    def test_triple_with_power_psi_rejected(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "gen:harmonic",
                               "--quantities", "triple", "--psi", "psi_p:2")
        assert code == 2
        assert "hypothesis" in err

    def test_require_converged_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "gen:oscillating",
                               "--quantities", "dixmier",
                               "--require-converged")
        assert code == 3

    def test_determinism_byte_identical(self, capsys):
        argv = ("analyze", "gen:harmonic", "--quantities",
                "norm,z1,dixmier,zeta-limit,small-ideal")
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert out1.encode() == out2.encode()

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "gen:harmonic",
                               "--quantities", "norm", "--format", "csv")
        assert code == 0
        assert out.startswith("quantity,field,value")
        assert "norm,value," in out

    def test_stdin_input(self, capsys, monkeypatch, tmp_path):
        import io
        import sys
        payload = {"name": "x", "mu": [1.0, 0.5], "tail": None,
                   "metadata": {}}
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(payload)))
        code, out, _ = run_cli(capsys, "analyze", "-", "--quantities", "norm")
        assert code == 0
        assert json.loads(out)["quantities"]["norm"]["value"] > 0

    def test_env_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv("SINGTRACE_TOL", "not-a-number")
        code, _, err = run_cli(capsys, "analyze", "gen:harmonic",
                               "--quantities", "norm")
        assert code == 2

    def test_custom_psi_file(self, capsys, tmp_path):
        # log-linear table for psi(t) = t: the weighted mean of the
        # 1/(1+t) profile then peaks at 1 near the origin
        table = {"name": "identity", "ln_t": [-4.0, 4.0],
                 "ln_psi": [-4.0, 4.0]}
        path = tmp_path / "psi.json"
        path.write_text(json.dumps(table))
        code, out, _ = run_cli(capsys, "analyze", "gen:small_ideal",
                               "--psi", f"custom:{path}",
                               "--quantities", "norm,quasinorm")
        assert code == 0
        payload = json.loads(out)
        assert payload["psi"] == "identity"
        assert abs(payload["quantities"]["quasinorm"]["value"] - 1.0) < 1e-9

    def test_norm_reports_both_conventions(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "gen:small_ideal",
                               "--quantities", "norm")
        assert code == 0
        entry = json.loads(out)["quantities"]["norm"]
        assert abs(entry["value"] - 1.0 / math.log(2.0)) < 1e-8
        assert abs(entry["restricted_to_t_ge_1"] - 1.0) < 1e-8


class TestGen:
    def test_counterexample_file(self, capsys, tmp_path):
        out_path = tmp_path / "z.json"
        code, _, _ = run_cli(capsys, "gen", "counterexample_z", "30",
                             str(out_path))
        assert code == 0
        payload = json.loads(out_path.read_text())
        assert len(payload["log_breakpoints"]) == 31
        code, out, _ = run_cli(capsys, "analyze", str(out_path),
                               "--quantities", "norm", "--psi", "psi1")
        assert code == 0

    def test_power_with_head(self, capsys, tmp_path):
        out_path = tmp_path / "p.json"
        code, _, _ = run_cli(capsys, "gen", "power", "2", str(out_path),
                             "--head", "1000")
        assert code == 0
        payload = json.loads(out_path.read_text())
        assert len(payload["mu"]) == 1000
        assert payload["tail"]["start_index"] == 1001

    def test_finite_requires_sort(self, capsys, tmp_path):
        out_path = tmp_path / "f.json"
        code, _, err = run_cli(capsys, "gen", "finite", "3,1,2",
                               str(out_path))
        assert code == 2
        code, _, _ = run_cli(capsys, "gen", "finite", "3,1,2",
                             str(out_path), "--sort")
        assert code == 0


class TestCheck:
    @pytest.mark.parametrize("suite", ["galois", "intertwine"])
    def test_fast_suites_pass(self, capsys, suite):
        code, out, _ = run_cli(capsys, "check", suite)
        assert code == 0
        payload = json.loads(out)
        assert payload["all_passed"] is True
        assert all(c["passed"] for c in payload["suites"][suite])
