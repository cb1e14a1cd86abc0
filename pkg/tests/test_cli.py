"""End-to-end tests of the projlab command line through main.run."""

import csv
import io
import json
import math

import pytest

from projlab.cli import verify
from projlab.cli.output import CSV_COLUMNS
from projlab.errors import QuadratureError
from projlab.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, run
from projlab.shared_state import CheckOutcome


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCompute:
    def test_rw_json(self, capsys):
        code, out, _ = invoke(capsys, "compute", "--quantity", "rw", "--n", "2", "--m", "2")
        assert code == EXIT_OK
        row = json.loads(out)
        assert row["value"] == pytest.approx(1.5)
        assert row["provenance"] == "Ryll-Wojtaszczyk gamma ratio"
        assert row["upper_bound"] == 2.0

    def test_boolean_limit(self, capsys):
        code, out, _ = invoke(capsys, "compute", "--quantity", "boolean-limit", "--d", "1")
        assert code == EXIT_OK
        assert json.loads(out)["value"] == pytest.approx(math.sqrt(2 / math.pi))

    def test_csv_columns(self, capsys):
        code, out, _ = invoke(capsys, "compute", "--quantity", "l2", "--n", "2", "--format", "csv")
        assert code == EXIT_OK
        rows = list(csv.reader(io.StringIO(out)))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert float(rows[1][2]) == pytest.approx(4.0 / 3.0)

    def test_catalog_as_text(self, capsys):
        code, out, _ = invoke(capsys, "compute", "--quantity", "catalog", "--space", "linf",
                              "--index-set", "full:1", "--n", "2", "--samples", "2000",
                              "--format", "text")
        assert code == EXIT_OK
        assert "Kadets-Snobar bound" in out

    def test_monte_carlo_output_is_reproducible(self, capsys):
        argv = ("compute", "--quantity", "torus", "--index-set", "full:2", "--n", "2",
                "--samples", "5000", "--seed", "5", "--workers", "3")
        first = invoke(capsys, *argv)
        second = invoke(capsys, *argv)
        assert first[0] == second[0] == EXIT_OK
        assert first[1] == second[1]
        assert json.loads(first[1])["provenance"] == "MC"

    def test_writes_to_out_file(self, capsys, tmp_path):
        target = tmp_path / "nested" / "rw.json"
        code, out, _ = invoke(capsys, "compute", "--quantity", "rw", "--n", "3", "--m", "1",
                              "--out", str(target))
        assert code == EXIT_OK and out == ""
        assert json.loads(target.read_text())["value"] == pytest.approx(1.0)


class TestUsageErrors:
    @pytest.mark.parametrize("argv", [
        ("compute", "--quantity", "no-such-thing"),
        ("compute", "--quantity", "rw", "--n", "2"),
        ("compute", "--quantity", "rw", "--n", "two", "--m", "2"),
        ("compute", "--n", "2"),
        ("compute", "--quantity", "rw", "--n", "2", "--m", "2", "--format", "xml"),
        ("compute", "--quantity", "boolean-limit", "--d", "0"),
        ("frobnicate",),
    ])
    def test_exit_code_two(self, capsys, argv):
        code, _, err = invoke(capsys, *argv)
        assert code == EXIT_USAGE
        assert err

    def test_version_exits_cleanly(self, capsys):
        assert run(["--version"]) == EXIT_OK
        assert "projlab" in capsys.readouterr().out

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, _ = invoke(capsys, "compute", "--quantity", "kappa",
                            "--config", str(tmp_path / "absent.conf"))
        assert code == EXIT_USAGE


class TestConfigFlags:
    def test_show_config_reflects_file_and_flags(self, capsys, tmp_path):
        conf = tmp_path / "settings.conf"
        conf.write_text("samples = 1234\noptimizer.restarts = 4\n")
        code, _, err = invoke(capsys, "compute", "--quantity", "kappa", "--config", str(conf),
                              "--seed", "99", "--show-config")
        assert code == EXIT_OK
        assert "run.samples = 1234" in err
        assert "run.seed = 99" in err
        assert "optimizer.restarts = 4" in err

    def test_non_numeric_config_value(self, capsys, tmp_path):
        conf = tmp_path / "settings.conf"
        conf.write_text("enumeration.cap = abc\n")
        code, _, err = invoke(capsys, "compute", "--quantity", "kappa", "--config", str(conf))
        assert code == EXIT_USAGE
        assert "enumeration.cap" in err

    def test_cap_flag(self, capsys):
        code, _, err = invoke(capsys, "compute", "--quantity", "kappa", "--cap", "77",
                              "--show-config")
        assert code == EXIT_OK
        assert "enumeration.cap = 77" in err
        code, _, err = invoke(capsys, "compute", "--quantity", "torus", "--index-set", "full:3",
                              "--n", "4", "--samples", "100", "--cap", "5")
        assert code == EXIT_FAILED
        assert "cap 5" in err

    def test_workers_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("PROJLAB_WORKERS", "0")
        code, _, _ = invoke(capsys, "compute", "--quantity", "kappa")
        assert code == EXIT_USAGE

    def test_log_file(self, capsys, tmp_path):
        log = tmp_path / "run.log"
        code, _, _ = invoke(capsys, "compute", "--quantity", "kappa", "--log-file", str(log))
        assert code == EXIT_OK
        assert "compute kappa" in log.read_text()


class TestSweepAndTables:
    def test_sweep_is_csv_by_default(self, capsys):
        code, out, _ = invoke(capsys, "sweep", "--quantity", "rw", "--n", "2", "--grid", "m=1,2,3")
        assert code == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 3
        assert [json.loads(r["params"])["m"] for r in rows] == [1, 2, 3]
        assert float(rows[1]["value"]) == pytest.approx(1.5)

    def test_sweep_over_two_axes(self, capsys):
        code, out, _ = invoke(capsys, "sweep", "--quantity", "rw", "--grid", "n=1,2",
                              "--grid", "m=0,1")
        assert code == EXIT_OK
        assert len(list(csv.DictReader(io.StringIO(out)))) == 4

    def test_sweep_needs_a_grid(self, capsys):
        code, _, _ = invoke(capsys, "sweep", "--quantity", "rw", "--n", "2")
        assert code == EXIT_USAGE

    def test_lebesgue_table(self, capsys):
        code, out, _ = invoke(capsys, "table", "--table", "lebesgue")
        assert code == EXIT_OK
        rows = json.loads(out)
        plain = {r["params"]["m"]: r["value"] for r in rows if r["quantity"] == "lebesgue"}
        analytic = {r["params"]["m"]: r["value"] for r in rows if r["quantity"] == "lebesgue_analytic"}
        assert plain[1] == pytest.approx(1 / 3 + 2 * math.sqrt(3) / math.pi)
        assert analytic[10] == pytest.approx(plain[5], abs=1e-9)


class TestVerify:
    def _only(self, monkeypatch, *checks):
        monkeypatch.setattr(verify, "CORE_CHECKS", list(checks))

    def test_passing_suite(self, capsys, monkeypatch):
        self._only(monkeypatch, ("kappa", verify.check_kappa))
        code, out, _ = invoke(capsys, "verify")
        assert code == EXIT_OK
        assert json.loads(out)["passed"] is True

    def test_failed_check_exits_one(self, capsys, monkeypatch):
        def failing(ctx):
            return CheckOutcome("broken", "none", False, "always fails")
        self._only(monkeypatch, ("kappa", verify.check_kappa), ("broken", failing))
        code, out, _ = invoke(capsys, "verify", "--format", "text")
        assert code == EXIT_FAILED
        assert "FAIL  broken" in out
        assert "1/2 checks passed" in out

    def test_errors_become_failed_checks(self, capsys, monkeypatch):
        def raising(ctx):
            raise QuadratureError("did not converge")
        self._only(monkeypatch, ("raising", raising))
        code, out, _ = invoke(capsys, "verify")
        assert code == EXIT_FAILED
        check = json.loads(out)["checks"][0]
        assert check["name"] == "raising" and "QuadratureError" in check["detail"]

    def test_determinism_check(self, capsys, monkeypatch):
        self._only(monkeypatch, ("determinism", verify.check_determinism))
        code, _, _ = invoke(capsys, "verify", "--workers", "2")
        assert code == EXIT_OK
