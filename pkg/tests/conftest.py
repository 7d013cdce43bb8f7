"""
Shared fixtures: expensive geometric objects are built once per session
"""
import pytest

from sigcy.arith.counting import singular_points
from sigcy.arith.fixloci import census, pair_table
from sigcy.config import ConfigManager
from sigcy.db import CountCache
from sigcy.geometry.arrangement import build_incidence


@pytest.fixture(scope="session")
def inventory():
    """The 96 nodes of X_VGN over F_17"""
    return singular_points("X_VGN", 17)


@pytest.fixture(scope="session")
def fixed_census(inventory):
    return census(17, inventory)


@pytest.fixture(scope="session")
def pairs(fixed_census):
    return pair_table(fixed_census)


@pytest.fixture(scope="session")
def model():
    return build_incidence()


@pytest.fixture
def cache(tmp_path):
    """Count cache on a throwaway sqlite file"""
    return CountCache.from_url(f"sqlite:///{tmp_path / 'counts.db'}")


@pytest.fixture
def config_file(tmp_path):
    """Small configuration for fast CLI and runner tests"""
    path = tmp_path / "sigcy.cfg"
    path.write_text(
        "[counting]\n"
        "pmax = 13\n"
        "jobs = 2\n"
        "chunk = 2\n"
        "naive_primes = 3\n"
        "\n"
        "[nodes]\n"
        "primes = 17\n"
        "\n"
        "[theta]\n"
        "samples = 3\n"
        "gamma_samples = 3\n"
        "\n"
        "[deform]\n"
        "primes = 1009\n"
        "exact = false\n"
        "\n"
        "[k3]\n"
        "samples = 3\n"
        "sweep = 10\n"
        "\n"
        "[cache]\n"
        f"dir = {tmp_path / 'cache'}\n"
    )
    return path


@pytest.fixture
def small_config(config_file, monkeypatch):
    monkeypatch.delenv("SIGCY_CACHE_DIR", raising=False)
    monkeypatch.delenv("SIGCY_DB_URL", raising=False)
    return ConfigManager(str(config_file), env_path=str(config_file.parent / ".env"))
