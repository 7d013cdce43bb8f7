import pytest

from sigcy.report import Status
from sigcy.arith import fqarray
from sigcy.config import ConfigManager
from sigcy.runner import GROUPS, Runner, resolve_groups, run_all


def test_resolve_groups_adds_prerequisites():
    assert resolve_groups(None) == list(GROUPS)
    assert resolve_groups(["theta"]) == ["theta"]
    assert resolve_groups(["topology"]) == ["symbolic", "fixloci", "arrangement", "deform",
                                            "topology"]
    assert resolve_groups(["k3", "symbolic"]) == ["symbolic", "arrangement", "k3"]
    with pytest.raises(ValueError):
        resolve_groups(["nope"])


def test_only_theta_reports_theta_rows(small_config):
    report = run_all(small_config, only=["theta"])
    assert report.checks
    assert all(row.check.startswith(("theta.", "cusp.")) for row in report.checks)
    assert report.exit_code == 0
    assert report.seed == small_config.theta.seed


def test_symbolic_group(small_config):
    runner = Runner(small_config, only=["symbolic"])
    report = runner.run()
    assert runner.state.split_quadrics == 3
    assert report.exit_code == 0
    assert report.summary[Status.FLAGGED.value] >= 3


def test_failing_group_becomes_a_row(small_config, monkeypatch):
    def boom(self):
        raise RuntimeError("incidence broke")

    monkeypatch.setattr(Runner, "_run_arrangement", boom)
    report = Runner(small_config, only=["arrangement", "theta"]).run()
    errors = [row for row in report.checks if row.check == "arrangement.error"]
    assert len(errors) == 1
    assert errors[0].note == "RuntimeError: incidence broke"
    assert any(row.check.startswith("theta.") for row in report.checks)
    assert report.exit_code == 1


def test_failed_prerequisite_blocks_dependents(small_config, monkeypatch):
    def boom(self):
        raise RuntimeError("incidence broke")

    monkeypatch.setattr(Runner, "_run_arrangement", boom)
    report = Runner(small_config, only=["k3"]).run()
    assert [row.check for row in report.checks] == ["k3.prerequisites"]
    assert report.checks[0].failed


def test_arrangement_feeds_k3(small_config, monkeypatch):
    runner = Runner(small_config, only=["k3"])
    monkeypatch.setattr(Runner, "_run_arrangement", _arrangement_without_sweep)
    report = runner.run()
    assert runner.state.model is not None
    assert report.exit_code == 0
    assert all(row.check.startswith(("k3.", "catalog.")) for row in report.checks)


def test_counting_group_checks_every_catalog_variety(small_config, monkeypatch):
    from sigcy.arith import counting
    from sigcy.geometry.varieties import catalog

    seen = []
    monkeypatch.setattr(counting, "verify_oracle",
                        lambda names, primes, **kw: seen.extend(names) or [])
    monkeypatch.setattr(counting, "verify_modularity", lambda *a, **kw: ([], None))
    monkeypatch.setattr(counting, "verify_model_agreement", lambda *a, **kw: [])
    Runner(small_config, only=["counting"]).run()
    assert seen == list(catalog())


def _arrangement_without_sweep(self):
    from sigcy.geometry.arrangement import verify_arrangement

    rows, model, tally = verify_arrangement(sweep=False)
    self.state.model, self.state.tally = model, tally
    return rows


@pytest.mark.slow
def test_topology_route(small_config):
    runner = Runner(small_config, only=["topology"])
    report = runner.run()
    assert report.exit_code == 0
    by_name = {row.check: row for row in report.checks}
    assert by_name["topology.stringy.total"].computed == 80
    assert by_name["topology.cover_euler"].computed == 80
    assert by_name["topology.hodge"].computed == {"h11": 40, "h12": 0}
    assert by_name["topology.picard.quadrics"].computed == 3


def test_runner_applies_the_table_limit(tmp_path, monkeypatch):
    monkeypatch.setattr(fqarray, "_table_order_limit", fqarray.MAX_TABLE_ORDER)
    monkeypatch.delenv("SIGCY_CACHE_DIR", raising=False)
    path = tmp_path / "sigcy.cfg"
    path.write_text("[counting]\nmax_table_order = 3000\n")
    Runner(ConfigManager(str(path), env_path=str(tmp_path / ".env")), only=["theta"])
    assert fqarray.max_table_order() == 3000
