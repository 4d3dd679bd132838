"""Konfiguracja toricw.

Settings are resolved from built-in defaults, then ``config/toricw.conf``
(shell-sourceable KEY=VALUE, shared with scripts/toricw.sh), then ``TORICW_*``
environment variables. The CLI layers its flags on top with override_settings().
"""

from __future__ import annotations

import logging
import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, Iterator, Optional

import psutil

from .errors import ConfigError

logger = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parent.parent
CONFIG_FILE = "toricw.conf"
ENV_PREFIX = "TORICW_"


def _default_workers() -> int:
    cores = psutil.cpu_count(logical=False)
    return max(1, cores or 1)


@dataclass(frozen=True)
class Settings:
    """Numerical tolerances and runtime knobs."""

    quad_tol: float = 1e-10
    special_tol: float = 1e-12
    root_tol: float = 1e-12
    classify_tol: float = 1e-7
    packing_tol: float = 1e-9
    samples: int = 257
    packing_depth: int = 6
    workers: int = 1
    log_level: str = "INFO"

    def to_dict(self) -> Dict[str, object]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def load_text_file(filename: str, fallback: str = "") -> str:
    # Najpierw config/, potem katalog główny
    for path in (ROOT / "config" / filename, ROOT / filename):
        if path.exists():
            try:
                return path.read_text(encoding="utf-8")
            except OSError as e:
                logger.warning(f"⚠️ Cannot read {path}: {e}")
    return fallback


def parse_conf(text: str) -> Dict[str, str]:
    """Parse KEY=VALUE lines; ``#`` starts a comment, quotes are stripped."""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("export "):
            line = line[len("export "):].strip()
        if "=" not in line:
            raise ConfigError(f"{CONFIG_FILE}:{lineno}: expected KEY=VALUE, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip().strip("'\"")
    return values


def _coerce(name: str, raw: str) -> object:
    kind = type(getattr(Settings, name))
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except ValueError as e:
        raise ConfigError(f"{name}: cannot parse {raw!r}") from e
    return raw


def _apply(base: Settings, source: Dict[str, str], origin: str) -> Settings:
    known = {f.name for f in fields(Settings)}
    updates = {}
    for key, raw in source.items():
        name = key[len(ENV_PREFIX):] if key.startswith(ENV_PREFIX) else key
        name = name.lower()
        if name not in known:
            logger.debug(f"🔍 Ignoring unknown setting {key} from {origin}")
            continue
        updates[name] = _coerce(name, raw)
    return replace(base, **updates) if updates else base


def _validate(settings: Settings) -> Settings:
    for name in ("quad_tol", "special_tol", "root_tol", "classify_tol", "packing_tol"):
        if not getattr(settings, name) > 0:
            raise ConfigError(f"{name} must be positive")
    if settings.samples < 16:
        raise ConfigError("samples must be at least 16")
    if settings.packing_depth < 1 or settings.workers < 1:
        raise ConfigError("packing_depth and workers must be at least 1")
    return settings


def load_settings(environ: Optional[Dict[str, str]] = None) -> Settings:
    """Build settings from defaults, config file and environment."""
    settings = Settings(workers=_default_workers())
    text = load_text_file(CONFIG_FILE)
    if text:
        settings = _apply(settings, parse_conf(text), CONFIG_FILE)
    else:
        logger.warning(f"⚠️ {CONFIG_FILE} not found, using defaults")
    env = os.environ if environ is None else environ
    env_values = {k: v for k, v in env.items() if k.startswith(ENV_PREFIX)}
    settings = _apply(settings, env_values, "environment")
    return _validate(settings)


_lock = threading.Lock()
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Process-wide settings, loaded on first use."""
    global _settings
    if _settings is None:
        with _lock:
            if _settings is None:
                _settings = load_settings()
    return _settings


@contextmanager
def override_settings(**overrides: object) -> Iterator[Settings]:
    """Temporarily replace selected settings (CLI flags, tests)."""
    global _settings
    previous = get_settings()
    clean = {k: v for k, v in overrides.items() if v is not None}
    updated = _validate(replace(previous, **clean))
    with _lock:
        _settings = updated
    try:
        yield updated
    finally:
        with _lock:
            _settings = previous
