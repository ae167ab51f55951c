"""
Isolate-Detect Configuration Module

Process-wide settings that are not part of a single detection run.

Configuration sources (later wins):
- ~/.config/idetect/.env
- ./.env
- Environment: IDETECT_LOG_LEVEL, IDETECT_BENCH_WORKERS, IDETECT_WINDOW_LEN,
  IDETECT_WINDOW_TRIGGER, IDETECT_OUTPUT_PRECISION
"""

import os
from pathlib import Path
from typing import Optional
import logging
from dotenv import load_dotenv

logger = logging.getLogger(__name__)


class Config:
    """
    Configuration for isolate-detect.

    Per-run tunables live in DetectorConfig; this class only carries the
    knobs that belong to the host (log level, worker count, window overrides).
    """

    def __init__(self) -> None:
        """Initialize configuration from environment and .env files."""
        # Load .env from current directory first
        load_dotenv()

        # Also try loading from ~/.config/idetect/.env
        config_dir = self._get_config_dir()
        config_env = config_dir / ".env"
        if config_env.exists():
            load_dotenv(config_env)

        logger.debug("Configuration loaded")

    def get_config_dir(self) -> Path:
        """
        Get the isolate-detect configuration directory.

        Returns:
            Path: The configuration directory path
        """
        return self._get_config_dir()

    @staticmethod
    def _get_config_dir() -> Path:
        """
        Get the config directory for isolate-detect.

        Uses ~/.config/idetect on Unix-like systems.

        Returns:
            Path: The config directory path
        """
        return Path.home() / ".config" / "idetect"

    def get_log_level(self) -> str:
        """
        Get the log level.

        Returns:
            str: Log level (default: WARNING)
        """
        return os.getenv("IDETECT_LOG_LEVEL", "WARNING")

    def get_bench_workers(self) -> int:
        """
        Get the number of worker processes used by the benchmark runner.

        Returns:
            int: Worker count, at least 1
        """
        return max(1, _int_env("IDETECT_BENCH_WORKERS", 1))

    def get_window_len(self) -> int:
        """
        Get the window length used by the windowed detector.

        Returns:
            int: Window length (default: 3000)
        """
        return _int_env("IDETECT_WINDOW_LEN", 3000)

    def get_window_trigger(self) -> int:
        """
        Get the series length above which windowing kicks in.

        Returns:
            int: Trigger length (default: 12000)
        """
        return _int_env("IDETECT_WINDOW_TRIGGER", 12000)

    def get_output_precision(self) -> int:
        """
        Get the number of significant digits used in text tables.

        Returns:
            int: Significant digits (default: 4)
        """
        return _int_env("IDETECT_OUTPUT_PRECISION", 4)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


# Singleton instance for the whole application
_config: Optional[Config] = None


def get_config() -> Config:
    """
    Get the global configuration instance.

    Returns:
        Config: The configuration singleton
    """
    global _config
    if _config is None:
        _config = Config()
        logger.debug("Global configuration initialized")
    return _config
