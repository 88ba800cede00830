"""
CHAlg — modules/config.py
Resource caps, read from the environment (optionally via a .env file at the
project root) and overridable per invocation from the command line.

    CHALG_MAX_DEGREE        Amitsur degree m                    (8)
    CHALG_MAX_SLOTS         slots in one expansion              (6)
    CHALG_MAX_LYNDON        Lyndon words enumerated at once     (200000)
    CHALG_MAX_PIJ_WEIGHT    i·j for the universal P_{i,j}       (8)
    CHALG_MAX_GENERIC_VARS  indeterminates in generic matrices  (96)
    CHALG_EXACT_MAX_N       exact-generic default up to this n  (2)
    CHALG_EXACT_MAX_DEGREE  ... and up to this total degree     (6)
"""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional

from .errors import ResourceCapError

log = logging.getLogger("CHAlg.Config")

_ENV_PATH = Path(__file__).resolve().parent.parent / ".env"


def _load_env() -> None:
    try:
        from dotenv import load_dotenv
        load_dotenv(dotenv_path=_ENV_PATH, override=False)
    except ImportError:
        log.warning("python-dotenv not installed — reading env vars directly.")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        log.warning("Ignoring %s=%r (not an integer), using %d", name, raw, default)
        return default
    if value < 1:
        log.warning("Ignoring %s=%d (must be >= 1), using %d", name, value, default)
        return default
    return value


_load_env()


# ─────────────────────────────────────────────────────────────────
# CONFIG
# ─────────────────────────────────────────────────────────────────
class Config:
    MAX_DEGREE        = _env_int("CHALG_MAX_DEGREE", 8)
    MAX_SLOTS         = _env_int("CHALG_MAX_SLOTS", 6)
    MAX_LYNDON        = _env_int("CHALG_MAX_LYNDON", 200_000)
    MAX_PIJ_WEIGHT    = _env_int("CHALG_MAX_PIJ_WEIGHT", 8)
    MAX_GENERIC_VARS  = _env_int("CHALG_MAX_GENERIC_VARS", 96)
    EXACT_MAX_N       = _env_int("CHALG_EXACT_MAX_N", 2)
    EXACT_MAX_DEGREE  = _env_int("CHALG_EXACT_MAX_DEGREE", 6)

    # attribute -> environment variable, for error hints
    ENV_NAMES = {
        "MAX_DEGREE":       "CHALG_MAX_DEGREE",
        "MAX_SLOTS":        "CHALG_MAX_SLOTS",
        "MAX_LYNDON":       "CHALG_MAX_LYNDON",
        "MAX_PIJ_WEIGHT":   "CHALG_MAX_PIJ_WEIGHT",
        "MAX_GENERIC_VARS": "CHALG_MAX_GENERIC_VARS",
    }

    @classmethod
    def override(cls, max_degree: Optional[int] = None,
                 max_slots: Optional[int] = None) -> None:
        """Command-line overrides; None leaves the current value alone."""
        if max_degree is not None:
            cls.MAX_DEGREE = max_degree
            log.info("Degree cap overridden: %d", max_degree)
        if max_slots is not None:
            cls.MAX_SLOTS = max_slots
            log.info("Slot cap overridden: %d", max_slots)


def check_cap(attr: str, what: str, value: int, cap: Optional[int] = None) -> None:
    """Raise ResourceCapError if value exceeds Config.<attr> (or an explicit cap)."""
    limit = getattr(Config, attr) if cap is None else cap
    if value > limit:
        raise ResourceCapError(what, value, limit, Config.ENV_NAMES.get(attr))
