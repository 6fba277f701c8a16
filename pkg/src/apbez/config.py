import functools
import logging
import os
import sys
from dataclasses import dataclass
from typing import Mapping

from apbez.errors import ConfigError

THREADS_VARIABLE = "APBEZ_THREADS"
LOG_LEVEL_VARIABLE = "APBEZ_LOG_LEVEL"

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    """
    Process-wide tunables. Only `threads` and `log_level` come from the environment, the rest are the sampling
    and search defaults shared by metrics, interpolator and the command line.
    """

    threads: int = 0
    """Worker cap for the piecewise driver, 0 lets the executor decide."""
    log_level: str = "WARNING"
    linf_samples: int = 10_000
    hausdorff_samples: int = 2_000
    grid_n: int = 256
    optimizer_samples: int = 2_000
    max_refinement_depth: int = 8
    near_vertical_slope: float = 1e3
    svg_samples: int = 512

    @classmethod
    def from_env(cls, environ: Mapping[str, str] = None) -> "Settings":
        """
        Builds settings from environment variables.

        :param environ: The mapping to read (defaults to `os.environ`).
        :return: The parsed settings.
        """
        environ = os.environ if environ is None else environ

        raw_threads = environ.get(THREADS_VARIABLE, "0").strip() or "0"
        try:
            threads = int(raw_threads)
        except ValueError:
            raise ConfigError(f"{THREADS_VARIABLE} must be an integer, got \"{raw_threads}\"") from None
        if threads < 0:
            raise ConfigError(f"{THREADS_VARIABLE} cannot be negative ({threads} < 0)")

        log_level = environ.get(LOG_LEVEL_VARIABLE, "WARNING").strip().upper() or "WARNING"
        if log_level not in _LOG_LEVELS:
            raise ConfigError(f"{LOG_LEVEL_VARIABLE} must be one of {', '.join(_LOG_LEVELS)}, got \"{log_level}\"")

        return cls(threads=threads, log_level=log_level)

    @property
    def max_workers(self):
        """The `max_workers` value for a thread pool (None when automatic)."""
        return None if self.threads == 0 else self.threads


@functools.lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


def configure_logging(level: str = None):
    """
    Routes log records to stderr. Only the command line calls this; library code just owns module loggers.

    :param level: Level name, defaults to the configured `log_level`.
    """
    level = level or get_settings().log_level
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
