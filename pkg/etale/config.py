import json
import os
from typing import Any, Dict, List, Optional
import logging

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "etale_config.json"


class SolverConfig:
    """Search bounds, seeds and scan settings for the solvers"""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or os.getenv("ETALE_CONFIG_FILE", DEFAULT_CONFIG_FILE)
        self.config = self._load_config()
        self._apply_env_overrides()

    def _default_config(self) -> Dict:
        return {
            "version": "1.0",
            "class_group": {
                "max_degree": 8,
                "max_abs_discriminant": 10 ** 9,
                "max_factor_base": 400,
                "relation_streak": 8,
                "max_relations": 4000,
                "sample_coefficient_bound": 3,
                "max_class_number": 10000
            },
            "search": {
                "generator_multipliers": [1.0001, 2, 4, 8, 16, 32],
                "max_enumerated": 200000,
                "dlog_attempts": 500
            },
            "units": {
                "max_rank": 2,
                "height_multipliers": [2, 4, 8, 16, 32, 64]
            },
            "witness": {
                "seed": 0,
                "resolvent_retries": 64,
                "norm_search_bound": 40
            },
            "numerics": {
                "precision_digits": 60
            },
            "scan": {
                "workers": 1,
                "n": 2,
                "disc_range": "-500..-3",
                "verify_norm_image": True
            }
        }

    def _load_config(self) -> Dict:
        """Load configuration from file, falling back to defaults"""
        default_config = self._default_config()

        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    config = json.load(f)

                merged_config = self._merge_config(default_config, config)
                logger.info(f"Loaded solver config from {self.config_file}")
                return merged_config
            except Exception as e:
                logger.error(f"Error loading config file {self.config_file}: {e}")
                logger.info("Using default configuration")
                return default_config
        else:
            logger.debug(f"Config file {self.config_file} not found, using defaults")
            return default_config

    def _merge_config(self, default: Dict, loaded: Dict) -> Dict:
        """Merge loaded config with defaults to ensure all keys exist"""
        merged = default.copy()

        for key, value in loaded.items():
            if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
                merged[key] = self._merge_config(merged[key], value)
            else:
                merged[key] = value

        return merged

    def _apply_env_overrides(self):
        seed = os.getenv("ETALE_SEED")
        if seed:
            self.config["witness"]["seed"] = int(seed)
        workers = os.getenv("ETALE_WORKERS")
        if workers:
            self.config["scan"]["workers"] = int(workers)

    def save_config(self, path: Optional[str] = None):
        """Write the active configuration to disk"""
        target = path or self.config_file
        try:
            with open(target, 'w') as f:
                json.dump(self.config, f, indent=2)
            logger.info(f"Saved solver config to {target}")
        except Exception as e:
            logger.error(f"Error saving config file {target}: {e}")

    def section(self, name: str) -> Dict[str, Any]:
        return self.config.get(name, {})

    def get(self, section: str, key: str) -> Any:
        return self.config[section][key]

    def update(self, overrides: Dict):
        """Deep-merge overrides into the active configuration"""
        self.config = self._merge_config(self.config, overrides)

    def copy_with(self, overrides: Dict) -> "SolverConfig":
        clone = SolverConfig.__new__(SolverConfig)
        clone.config_file = self.config_file
        clone.config = self._merge_config(json.loads(json.dumps(self.config)), overrides)
        return clone

    @property
    def seed(self) -> int:
        return int(self.config["witness"]["seed"])

    @property
    def version(self) -> str:
        return str(self.config.get("version", "1.0"))

    @property
    def generator_multipliers(self) -> List[float]:
        return [float(m) for m in self.config["search"]["generator_multipliers"]]


# Global configuration instance
solver_config = SolverConfig()


def resolve_config(config: Optional[SolverConfig]) -> SolverConfig:
    return config if config is not None else solver_config
