"""
Configuration Management Module
Handles lab-wide defaults (tolerances, sampling, integrator) with YAML configuration
"""

import os
from pathlib import Path
from typing import Optional, Dict, Any
from dataclasses import dataclass, field, asdict, fields, replace
import yaml
import logging

logger = logging.getLogger(__name__)

# Base directory for the application
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Environment variable that points at an alternative defaults file
CONFIG_ENV_VAR = "MANAKOV_LAB_CONFIG"


def get_data_dir() -> Path:
    """Get data directory dynamically"""
    return BASE_DIR / "data"


@dataclass
class PathsConfig:
    """File paths configuration - dynamically constructed"""
    base_dir: Optional[str] = None

    @property
    def data_dir(self) -> Path:
        """Get base output directory"""
        if self.base_dir is None:
            return get_data_dir()
        return Path(self.base_dir)

    @property
    def logs_dir(self) -> Path:
        """Get logs directory dynamically"""
        return self.data_dir / "logs"

    @property
    def runs_dir(self) -> Path:
        """Default directory for command outputs"""
        return self.data_dir / "runs"


@dataclass
class LoggingConfig:
    """Logging configuration"""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    color: bool = True
    console_enabled: bool = True
    file_enabled: bool = False
    max_file_size: int = 10485760  # 10MB
    backup_count: int = 5


@dataclass
class ToleranceConfig:
    """Numerical tolerances shared by every check and report

    This is the single defaults table of the lab; reports embed it verbatim.
    """
    rank_tol_factor: float = 1e4
    rank_stability_band: float = 10.0
    resample_attempts: int = 3
    identity: float = 1e-10
    residual: float = 1e-12
    involution: float = 1e-9
    finite_difference: float = 1e-6
    subspace: float = 1e-8
    conservation: float = 1e-6
    noether: float = 1e-8
    pass_fraction: float = 0.95
    midpoint_tol: float = 1e-13
    midpoint_max_iter: int = 50

    def override(self, key: str, value: Any) -> "ToleranceConfig":
        """Return a copy with one field replaced

        Args:
            key: Field name
            value: New value (converted to the field type)

        Returns:
            New ToleranceConfig
        """
        types = {f.name: f.type for f in fields(self)}
        if key not in types:
            raise KeyError(f"unknown tolerance '{key}'")
        caster = int if types[key] in (int, "int") else float
        return replace(self, **{key: caster(value)})


@dataclass
class IntegratorDefaults:
    """Default integrator settings"""
    method: str = "rk4"
    step: float = 1e-3
    horizon: float = 100.0
    stride: int = 100


@dataclass
class SamplingConfig:
    """Generic-point sampling and spectral-sample settings"""
    default_seeds: int = 20
    lax_lambdas: tuple = (-1.5, -0.5, 0.5, 1.0, 2.0)
    j_lambda_seed: int = 2718
    j_lambda_margin: float = 0.1
    sweep_cap: int = 8


class Config:
    """Main configuration class"""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize configuration from YAML file

        Args:
            config_path: Path to config file. If None, uses $MANAKOV_LAB_CONFIG
                or config/config.yaml
        """
        if config_path is None:
            possible_paths = [
                os.environ.get(CONFIG_ENV_VAR, ""),
                "config/config.yaml",
                str(BASE_DIR / "config" / "config.yaml"),
            ]

            for path in possible_paths:
                if path and Path(path).exists():
                    config_path = path
                    break

            if config_path is None:
                logger.warning("No config file found, using defaults")
                config_path = str(BASE_DIR / "config" / "config.yaml")

        self.config_path = config_path
        self._load_config()

    def _use_defaults(self):
        self.paths = PathsConfig()
        self.logging = LoggingConfig()
        self.tolerances = ToleranceConfig()
        self.integrator = IntegratorDefaults()
        self.sampling = SamplingConfig()

    def _load_config(self):
        """Load configuration from YAML file"""
        try:
            if Path(self.config_path).exists():
                with open(self.config_path, 'r') as f:
                    config_data = yaml.safe_load(f) or {}

                self.paths = PathsConfig(**config_data.get('paths', {}))
                self.logging = LoggingConfig(**config_data.get('logging', {}))
                self.tolerances = ToleranceConfig(**config_data.get('tolerances', {}))
                self.integrator = IntegratorDefaults(**config_data.get('integrator', {}))
                sampling = dict(config_data.get('sampling', {}))
                if 'lax_lambdas' in sampling:
                    sampling['lax_lambdas'] = tuple(float(x) for x in sampling['lax_lambdas'])
                self.sampling = SamplingConfig(**sampling)

                logger.debug(f"Configuration loaded from {self.config_path}")
            else:
                self._use_defaults()
                logger.warning(f"Config file not found at {self.config_path}, using defaults")

        except Exception as e:
            logger.error(f"Error loading configuration: {e}")
            self._use_defaults()

    def as_dict(self) -> Dict[str, Any]:
        """Serializable snapshot of every section"""
        sampling = asdict(self.sampling)
        sampling['lax_lambdas'] = list(sampling['lax_lambdas'])
        return {
            'paths': asdict(self.paths),
            'logging': asdict(self.logging),
            'tolerances': asdict(self.tolerances),
            'integrator': asdict(self.integrator),
            'sampling': sampling,
        }


# Global config instance
config = Config()
