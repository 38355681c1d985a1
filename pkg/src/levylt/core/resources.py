import logging
import logging.config
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv


logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
STANDARD_FORMAT = "%(asctime)s - %(name)s - [%(levelname)s] - %(message)s"


def configure_logging(path: Optional[Path] = None) -> None:
    """
    Applies the YAML logging configuration through dictConfig, falling back
    to a basic console setup when the file is missing.

    Setting LEVY_LT_LOG_FORMAT=json routes the console handler through the
    JSON formatter.
    """
    path = path or CONFIG_DIR / "logging_config.yaml"
    try:
        with open(path, "rt") as f:
            log_config = yaml.safe_load(f.read())
        if os.getenv("LEVY_LT_LOG_FORMAT", "").lower() == "json":
            log_config["handlers"]["console"]["formatter"] = "json"
        file_handler = log_config.get("handlers", {}).get("file_handler")
        if file_handler:
            Path(file_handler["filename"]).parent.mkdir(parents=True, exist_ok=True)
        logging.config.dictConfig(log_config)
    except FileNotFoundError:
        logging.basicConfig(level=logging.INFO, format=STANDARD_FORMAT)
        logging.warning("logging_config.yaml not found. Using basic logging configuration.")


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Loads the application configuration (tolerances, Monte Carlo defaults,
    verification settings, figure recipes).

    Raises:
        FileNotFoundError: If the configuration file does not exist.
    """
    path = path or CONFIG_DIR / "main_config.yaml"
    with open(path, "rt") as f:
        config = yaml.safe_load(f.read())
    logger.debug(f"Loaded configuration from {path}")
    return config


def resolve_worker_count(config: Dict[str, Any]) -> int:
    """
    Number of Monte Carlo workers: LEVY_LT_THREADS if set, else the configured
    cap, else the CPU count.
    """
    load_dotenv()
    env_value = os.getenv("LEVY_LT_THREADS")
    if env_value:
        try:
            workers = int(env_value)
        except ValueError:
            logger.warning(f"Ignoring non-integer LEVY_LT_THREADS='{env_value}'")
        else:
            return max(1, workers)
    configured = config.get("montecarlo", {}).get("max_workers")
    return max(1, int(configured or os.cpu_count() or 1))
