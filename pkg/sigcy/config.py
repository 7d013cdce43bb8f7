"""
Configuration management with type safety and environment variable support
"""
import os
import configparser
from pathlib import Path
from typing import List, Optional
from dataclasses import dataclass, field
import logging

logger = logging.getLogger("sigcy.config")

DEFAULT_SEED = 20240917


def _int_list(raw: str) -> List[int]:
    return [int(x.strip()) for x in raw.split(",") if x.strip()]


@dataclass
class CountingConfig:
    """Point-count sweep configuration"""
    pmax: int = 97
    jobs: int = 8
    chunk: int = 4
    naive_primes: List[int] = field(default_factory=lambda: [3, 5, 7])
    max_table_order: int = 2500


@dataclass
class NodeConfig:
    """Node inventory and fixed-locus configuration"""
    primes: List[int] = field(default_factory=lambda: [17, 41])
    ext: int = 1


@dataclass
class ThetaConfig:
    """Numerical theta-constant checks"""
    samples: int = 20
    tol: float = 1e-10
    gamma_samples: int = 20
    seed: int = DEFAULT_SEED


@dataclass
class DeformConfig:
    """Equisingular computation: certification primes, plus an exact pass over QQ"""
    primes: List[int] = field(default_factory=lambda: [1009, 1013])
    exact: bool = True


@dataclass
class K3Config:
    """K3 pencil sweeps"""
    samples: int = 20
    sweep: int = 100
    seed: int = DEFAULT_SEED


@dataclass
class CacheConfig:
    """On-disk count cache"""
    dir: str = ".sigcy_cache"
    enabled: bool = True


class ConfigManager:
    """
    Central configuration manager
    Reads from sigcy.cfg and .env files
    """

    def __init__(self, config_path: str = "sigcy.cfg", env_path: str = ".env"):
        self.config_path = Path(config_path)
        self.env_path = Path(env_path)
        self._config = configparser.ConfigParser()
        self.overrides = {}

        if self.config_path.exists():
            self._config.read(config_path)
        else:
            logger.warning(f"Config file {config_path} not found, using defaults")

        self._load_env()

    def _load_env(self):
        """Load environment variables from .env file"""
        if self.env_path.exists():
            try:
                from dotenv import load_dotenv
                load_dotenv(self.env_path)
                logger.info(f"Loaded environment from {self.env_path}")
            except ImportError:
                logger.warning("python-dotenv not installed, skipping .env loading")

    @property
    def log_level(self) -> str:
        """Logging level"""
        return os.getenv("LOG_LEVEL", "INFO")

    @property
    def log_file(self) -> Optional[str]:
        """Log file path (console only when unset)"""
        return os.getenv("LOG_FILE") or None

    @property
    def counting(self) -> CountingConfig:
        """Point-count sweep configuration"""
        cfg = CountingConfig()
        if "counting" in self._config:
            section = self._config["counting"]
            cfg = CountingConfig(
                pmax=section.getint("pmax", 97),
                jobs=section.getint("jobs", 8),
                chunk=section.getint("chunk", 4),
                naive_primes=_int_list(section.get("naive_primes", "3,5,7")),
                max_table_order=section.getint("max_table_order", 2500),
            )
        if "jobs" in self.overrides:
            cfg.jobs = self.overrides["jobs"]
        return cfg

    @property
    def nodes(self) -> NodeConfig:
        """Node inventory configuration"""
        if "nodes" not in self._config:
            return NodeConfig()

        section = self._config["nodes"]
        return NodeConfig(
            primes=_int_list(section.get("primes", "17,41")),
            ext=section.getint("ext", 1),
        )

    @property
    def theta(self) -> ThetaConfig:
        """Theta-constant check configuration"""
        cfg = ThetaConfig()
        if "theta" in self._config:
            section = self._config["theta"]
            cfg = ThetaConfig(
                samples=section.getint("samples", 20),
                tol=section.getfloat("tol", 1e-10),
                gamma_samples=section.getint("gamma_samples", 20),
                seed=section.getint("seed", DEFAULT_SEED),
            )
        if "seed" in self.overrides:
            cfg.seed = self.overrides["seed"]
        return cfg

    @property
    def deform(self) -> DeformConfig:
        """Equisingular computation configuration"""
        if "deform" not in self._config:
            return DeformConfig()

        section = self._config["deform"]
        return DeformConfig(primes=_int_list(section.get("primes", "1009,1013")),
                            exact=section.getboolean("exact", True))

    @property
    def k3(self) -> K3Config:
        """K3 pencil configuration"""
        cfg = K3Config()
        if "k3" in self._config:
            section = self._config["k3"]
            cfg = K3Config(
                samples=section.getint("samples", 20),
                sweep=section.getint("sweep", 100),
                seed=section.getint("seed", DEFAULT_SEED),
            )
        if "seed" in self.overrides:
            cfg.seed = self.overrides["seed"]
        return cfg

    @property
    def cache(self) -> CacheConfig:
        """
        Count cache configuration

        Precedence: --cache flag, then SIGCY_CACHE_DIR, then the [cache] section
        """
        cfg = CacheConfig()
        if "cache" in self._config:
            section = self._config["cache"]
            cfg = CacheConfig(
                dir=section.get("dir", ".sigcy_cache"),
                enabled=section.getboolean("enabled", True),
            )
        env_dir = os.getenv("SIGCY_CACHE_DIR")
        if env_dir:
            cfg.dir = env_dir
        if "cache_dir" in self.overrides:
            cfg.dir = self.overrides["cache_dir"]
        return cfg

    @property
    def db_url(self) -> str:
        """Database connection URL of the count cache"""
        explicit = os.getenv("SIGCY_DB_URL")
        if explicit:
            return explicit
        return f"sqlite:///{Path(self.cache.dir) / 'counts.db'}"

    @property
    def json_path(self) -> Optional[str]:
        """Default JSON report path"""
        if "json_path" in self.overrides:
            return self.overrides["json_path"]
        if "report" in self._config:
            return self._config["report"].get("json_path") or None
        return None

    def override(self, **values) -> None:
        """Apply CLI flag overrides (None values are ignored)"""
        for key, value in values.items():
            if value is not None:
                self.overrides[key] = value

    def snapshot(self) -> dict:
        """Plain-dict view of the effective configuration, stored in reports"""
        return {
            "counting": vars(self.counting),
            "nodes": vars(self.nodes),
            "theta": vars(self.theta),
            "deform": vars(self.deform),
            "k3": vars(self.k3),
            "cache": vars(self.cache),
        }


# Global config instance
_config = None


def get_config(config_path: Optional[str] = None) -> ConfigManager:
    """Get global config instance (re-created when a new path is given)"""
    global _config
    if _config is None or config_path is not None:
        _config = ConfigManager(config_path or "sigcy.cfg")
    return _config
