import json

import pytest
from click.testing import CliRunner

from sigcy import __version__
from sigcy.cli import main


@pytest.fixture
def invoke(config_file, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SIGCY_CACHE_DIR", raising=False)
    monkeypatch.delenv("SIGCY_DB_URL", raising=False)
    runner = CliRunner()

    def run(*args):
        return runner.invoke(main, ["--config", str(config_file), *args])
    return run


def test_version(invoke):
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


def test_catalog_to_stdout(invoke):
    result = invoke("catalog")
    assert result.exit_code == 0
    assert "[Y_CY]" in result.output
    assert "[K3_FIBER(2:1)]" in result.output


def test_catalog_to_file(invoke, tmp_path):
    out = tmp_path / "out" / "catalog.txt"
    result = invoke("catalog", "--param", "3:1", "--out", str(out))
    assert result.exit_code == 0
    assert "[K3_FIBER(3:1)]" in out.read_text()


def test_count(invoke):
    result = invoke("count", "Y_CY", "--p", "3")
    assert result.exit_code == 0
    assert "= 44" in result.output


def test_count_unknown_variety(invoke):
    result = invoke("count", "NOPE", "--p", "3")
    assert result.exit_code == 1


def test_cusp_form(invoke):
    result = invoke("cusp-form", "--pmax", "13")
    assert result.exit_code == 0
    assert "a_3 = -4" in result.output
    assert "a_7 = 24" in result.output
    assert "No failed checks" in result.output


def test_quiet_hides_row_logs(invoke):
    loud = invoke("--verbose", "cusp-form", "--pmax", "13")
    assert " - DEBUG - " in loud.output
    quiet = invoke("--verbose", "--quiet", "cusp-form", "--pmax", "13")
    assert quiet.exit_code == 0
    assert " - DEBUG - " not in quiet.output
    assert "a_3 = -4" in quiet.output


def test_k3_fibers(invoke):
    result = invoke("k3", "--param", "2:1", "--param", "1:1")
    assert result.exit_code == 0
    assert "generic: 7 own nodes, 8 mutual points" in result.output
    assert "special:" in result.output


def test_run_all_only_theta_writes_json(invoke, tmp_path):
    path = tmp_path / "reports" / "theta.json"
    result = invoke("--json", str(path), "run-all", "--only", "theta")
    assert result.exit_code == 0
    payload = json.loads(path.read_text())
    assert payload["summary"]["fail"] == 0
    assert all(row["check"].startswith(("theta.", "cusp.")) for row in payload["checks"])


def test_run_all_rejects_unknown_group(invoke):
    result = invoke("run-all", "--only", "nope")
    assert result.exit_code == 2


def test_count_table(invoke, tmp_path):
    out = tmp_path / "counts.csv"
    result = invoke("count-table", "--variety", "Y_CY", "--variety", "Y_SYM", "--p", "3",
                    "--out", str(out))
    assert result.exit_code == 0
    assert "44" in result.output
    assert out.exists()
