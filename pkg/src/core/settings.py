"""Persistent settings: command-line flag > environment > QSettings > default."""

import os
from typing import Mapping, Optional

from PySide6.QtCore import QSettings, QStandardPaths

from .errors import DomainError

ORGANIZATION = "kosweep"
APPLICATION = "KOSweep"

ENV_CACHE_DIR = "KOSWEEP_CACHE_DIR"
ENV_WORKERS = "KOSWEEP_WORKERS"

KEY_CACHE_DIR = "cache/dir"
KEY_WORKERS = "sweep/workers"
KEY_SWEEP_MAX = "sweep/max"

DEFAULT_WORKERS = os.cpu_count() or 1
DEFAULT_SWEEP_MAX = 300


def default_cache_dir() -> str:
    """Platform cache location, or ~/.kosweep/cache when Qt reports none."""
    cache_dir = QStandardPaths.writableLocation(QStandardPaths.CacheLocation)
    if not cache_dir:
        return os.path.expanduser("~/.kosweep/cache")
    return os.path.join(cache_dir, ORGANIZATION)


class AppSettings:
    """Resolves cache directory and worker count for a run."""

    def __init__(
        self,
        settings: Optional[QSettings] = None,
        environ: Optional[Mapping[str, str]] = None,
    ):
        self.settings = settings or QSettings(ORGANIZATION, APPLICATION)
        self.environ = os.environ if environ is None else environ

    def cache_dir(self, flag: Optional[str] = None) -> str:
        if flag:
            return flag
        if self.environ.get(ENV_CACHE_DIR):
            return self.environ[ENV_CACHE_DIR]
        stored = self.settings.value(KEY_CACHE_DIR, "")
        return stored or default_cache_dir()

    def workers(self, flag: Optional[int] = None) -> int:
        if flag is not None:
            value = flag
        elif self.environ.get(ENV_WORKERS):
            try:
                value = int(self.environ[ENV_WORKERS])
            except ValueError:
                raise DomainError(
                    f"{ENV_WORKERS} must be an integer, got {self.environ[ENV_WORKERS]!r}"
                ) from None
        else:
            value = self.settings.value(KEY_WORKERS, DEFAULT_WORKERS, type=int)
        if value < 1:
            raise DomainError("worker count must be at least 1")
        return value

    def sweep_max(self) -> int:
        return self.settings.value(KEY_SWEEP_MAX, DEFAULT_SWEEP_MAX, type=int)

