import io
import logging

from sigcy.config import DEFAULT_SEED, ConfigManager, get_config
from sigcy.logging_conf import TqdmHandler, setup_logging


def test_defaults_without_file(tmp_path, monkeypatch):
    monkeypatch.delenv("SIGCY_CACHE_DIR", raising=False)
    config = ConfigManager(str(tmp_path / "missing.cfg"), env_path=str(tmp_path / ".env"))
    assert config.counting.pmax == 97
    assert config.counting.max_table_order == 2500
    assert config.nodes.primes == [17, 41]
    assert config.theta.seed == DEFAULT_SEED
    assert config.deform.primes == [1009, 1013]
    assert config.deform.exact is True
    assert config.k3.sweep == 100
    assert config.json_path is None


def test_file_values(small_config, config_file):
    assert small_config.counting.pmax == 13
    assert small_config.counting.naive_primes == [3]
    assert small_config.nodes.primes == [17]
    assert small_config.deform.exact is False
    assert small_config.theta.samples == 3
    assert small_config.cache.dir == str(config_file.parent / "cache")
    assert small_config.db_url.endswith("counts.db")


def test_overrides_take_precedence(small_config):
    small_config.override(jobs=5, seed=7, cache_dir="/tmp/elsewhere", json_path=None)
    assert small_config.counting.jobs == 5
    assert small_config.theta.seed == 7
    assert small_config.k3.seed == 7
    assert small_config.cache.dir == "/tmp/elsewhere"
    assert "json_path" not in small_config.overrides


def test_environment_cache_dir(small_config, monkeypatch):
    monkeypatch.setenv("SIGCY_CACHE_DIR", "/tmp/from-env")
    assert small_config.cache.dir == "/tmp/from-env"
    small_config.override(cache_dir="/tmp/from-flag")
    assert small_config.cache.dir == "/tmp/from-flag"


def test_environment_db_url(small_config, monkeypatch):
    monkeypatch.setenv("SIGCY_DB_URL", "sqlite:///:memory:")
    assert small_config.db_url == "sqlite:///:memory:"


def test_snapshot_is_plain(small_config):
    snapshot = small_config.snapshot()
    assert set(snapshot) == {"counting", "nodes", "theta", "deform", "k3", "cache"}
    assert snapshot["counting"]["pmax"] == 13


def test_get_config_reloads_on_new_path(config_file):
    assert get_config(str(config_file)).counting.pmax == 13


def test_setup_logging_does_not_stack_handlers(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging("DEBUG", str(log_file), name="sigcy.test")
    logger = setup_logging("DEBUG", str(log_file), name="sigcy.test")
    assert len(logger.handlers) == 2
    assert logger.level == logging.DEBUG
    logger.info("hello")
    assert log_file.exists()


def test_console_logging_goes_through_tqdm(monkeypatch):
    written = []
    monkeypatch.setattr("sigcy.logging_conf.tqdm.write",
                        lambda msg, file=None: written.append(msg))
    logger = setup_logging("INFO", name="sigcy.test_tqdm")
    assert isinstance(logger.handlers[0], TqdmHandler)
    logger.info("counting F_7")
    assert written and all(msg.endswith("INFO - counting F_7") for msg in written)


def test_quiet_console_keeps_the_log_file(tmp_path):
    console = io.StringIO()
    log_file = tmp_path / "run.log"
    logger = setup_logging("INFO", str(log_file), name="sigcy.test_quiet", quiet=True,
                           stream=console)
    logger.info("row passed")
    logger.warning("row flagged")
    for handler in logger.handlers:
        handler.flush()
    assert "row passed" not in console.getvalue()
    assert "row flagged" in console.getvalue()
    assert "row passed" in log_file.read_text()


def test_unknown_level_falls_back_to_info():
    assert setup_logging("LOUD", name="sigcy.test_level").level == logging.INFO
