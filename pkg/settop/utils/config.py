"""Settings loader for settop runs.

Settings come from `.settop/config.toml` (or the file named by SETTOP_CONFIG),
with `.env` overrides loaded through python-dotenv. Missing file means
built-in defaults.
"""

import copy
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import toml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).parent.parent.parent
DEFAULT_CONFIG_PATH = PROJECT_ROOT / ".settop" / "config.toml"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "run": {
        "seed": 0,
        "log_dir": "logs",
        "log_level": "INFO",
    },
    "limits": {
        "max_points": 5,
        "max_rank": 5,
        "max_formula_size": 9,
        "max_double_exp_closed": 7,
        "max_search_points": 4,
        "max_ordinal_limit": 8,
    },
    "acceptance": {
        "formula_size": 7,
        "formula_exhaustive_size": 4,
        "formula_samples": 2000,
        "formula_free": 2,
        "class_size": 2,
        "transfer_points": 4,
        "distributivity_instances": 1000,
        "choice_samples": 100,
        "choice_carrier": 5,
        "specification_instances": 1000,
        "ordinal_count": 6,
        "search_points": 4,
    },
}


class LimitExceeded(ValueError):
    """Raised when a desk-scale guard refuses an input size."""
    pass


def config_path() -> Path:
    """Resolve the active config file path."""
    load_dotenv()
    override = os.getenv("SETTOP_CONFIG")
    return Path(override) if override else DEFAULT_CONFIG_PATH


def load_config(path: Optional[Path] = None) -> Dict[str, Dict[str, Any]]:
    """
    Load settings, layering the TOML file and SETTOP_SEED over the defaults.

    Returns:
        Nested dict with sections run, limits and acceptance.
    """
    load_dotenv()
    path = path or config_path()
    settings = copy.deepcopy(DEFAULTS)

    if path.exists():
        loaded = toml.load(path)
        for section, values in loaded.items():
            settings.setdefault(section, {}).update(values)
        logger.debug(f"Loaded settings from {path}")
    else:
        logger.debug(f"No config at {path}, using defaults")

    env_seed = os.getenv("SETTOP_SEED")
    if env_seed is not None:
        try:
            settings["run"]["seed"] = int(env_seed)
        except ValueError:
            raise ValueError(f"SETTOP_SEED must be an integer, got {env_seed!r}")

    return settings


def save_config(settings: Dict[str, Dict[str, Any]], path: Optional[Path] = None) -> Path:
    """Write settings back to TOML."""
    path = path or config_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        toml.dump(settings, f)
    return path


def limit_value(key: str, limits: Optional[Mapping[str, Any]] = None) -> int:
    """A `[limits]` entry from loaded settings, or its built-in default."""
    if limits and key in limits:
        return int(limits[key])
    return DEFAULTS["limits"][key]


def check_limit(name: str, value: int, limit: int, unsafe: bool = False) -> None:
    """Refuse `value` above `limit` unless the unsafe override is set."""
    if value > limit and not unsafe:
        raise LimitExceeded(
            f"{name}={value} exceeds the limit {limit} (pass --unsafe-limits to override)"
        )


def setup_logging(log_dir: str = "logs", level: str = "INFO") -> logging.Logger:
    """Configure logging to file and console."""
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    Path(log_dir).mkdir(parents=True, exist_ok=True)
    log_file = Path(log_dir) / f"settop_{timestamp}.log"

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler()
        ],
        force=True,
    )
    return logging.getLogger("settop")
