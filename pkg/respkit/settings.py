"""
Runtime settings read from the environment.

  RESPKIT_NO_COLOR   any non-empty value disables ANSI colour in diagnostics
  RESPKIT_LOG_LEVEL  DEBUG / INFO / WARNING / ERROR (default WARNING)
  RESPKIT_HOME       directory holding data/models and data/matrices
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Mapping, Optional

_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))

_LEVELS = {"DEBUG": logging.DEBUG, "INFO": logging.INFO, "WARNING": logging.WARNING, "ERROR": logging.ERROR}


@dataclass(frozen=True)
class Settings:
    no_color: bool = False
    log_level: int = logging.WARNING
    home: str = _ROOT

    @property
    def data_dir(self) -> str:
        return os.path.join(self.home, "data")


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    env = os.environ if environ is None else environ
    level_name = (env.get("RESPKIT_LOG_LEVEL") or "WARNING").strip().upper()
    return Settings(
        no_color=bool((env.get("RESPKIT_NO_COLOR") or "").strip()),
        log_level=_LEVELS.get(level_name, logging.WARNING),
        home=env.get("RESPKIT_HOME") or _ROOT,
    )


def configure_logging(settings: Settings, verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
