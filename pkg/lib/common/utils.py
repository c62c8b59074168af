"""Small helpers shared by the CLI: input digests, report names and environment overrides."""

import hashlib
import json
import logging
import os
import re
from pathlib import Path

from dotenv import load_dotenv

from conf.config import (
    DEFAULT_FORMAT,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_DEGREE,
    DEFAULT_RESOURCE_CAP,
    ENV_FORMAT,
    ENV_LOG_LEVEL,
    ENV_MAX_DEGREE,
    ENV_RESOURCE_CAP,
)


def input_digest(raw: dict | str) -> str:
    """sha256 of the canonical JSON form of a task (key order and whitespace do not matter)."""
    if isinstance(raw, str):
        raw = json.loads(raw)
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def slug(text: str) -> str:
    """
    Generates a slug from text (only lowercase letters, numbers, and underscores).
    """
    s = re.sub(r"[^\w\s-]", "", text.strip().lower())
    s = re.sub(r"[\s-]+", "_", s)
    return s.strip("_") or "report"


def report_name(operation: str, digest: str) -> str:
    """Stable report file stem, e.g. ``l1_3f2a9c01``."""
    return f"{slug(operation)}_{digest[:8]}"


def load_env_defaults(dotenv_path: str | Path | None = None) -> dict:
    """
    Reads QAH_* overrides from the environment (after loading ``.env`` from the project root).

    Returns the effective defaults for format, max degree, resource cap and log level;
    command-line flags are applied on top of these by the caller.
    """
    logger = logging.getLogger(__name__)
    path = Path(dotenv_path) if dotenv_path else Path(__file__).resolve().parents[2] / ".env"
    load_dotenv(dotenv_path=path)

    def as_int(name: str, default: int) -> int:
        value = os.getenv(name)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            logger.warning(f"Ignoring non-integer {name}={value!r}")
            return default

    return {
        "format": os.getenv(ENV_FORMAT, DEFAULT_FORMAT),
        "max_degree": as_int(ENV_MAX_DEGREE, DEFAULT_MAX_DEGREE),
        "resource_cap": as_int(ENV_RESOURCE_CAP, DEFAULT_RESOURCE_CAP),
        "log_level": os.getenv(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL),
    }
