import logging
import sys
from pathlib import Path

from conf.config import LOG_FILE_NAME, LOG_FORMAT


def setup_logger(level: str = "INFO", log_dir: str = "logs", quiet: bool = False) -> Path:
    """
    Routes all engine logging to ``<log_dir>/homology_engine.log`` and, unless quiet, to stderr.

    Reports go to stdout, so console logging never mixes into a JSON report.
    An unknown level name falls back to INFO with a warning in the log.

    :param level: Level name such as "DEBUG" or "WARNING"; case does not matter.
    :param log_dir: Directory of the log file, created if missing.
    :param quiet: Log to the file only.
    :return: Path of the log file.
    """
    log_file = Path(log_dir) / LOG_FILE_NAME
    log_file.parent.mkdir(parents=True, exist_ok=True)

    handlers: list[logging.Handler] = [logging.FileHandler(log_file, encoding="utf-8")]
    if not quiet:
        handlers.append(logging.StreamHandler(stream=sys.stderr))

    resolved = logging.getLevelName(level.upper())
    known = isinstance(resolved, int)
    logging.basicConfig(level=resolved if known else logging.INFO, format=LOG_FORMAT, handlers=handlers, force=True)
    if not known:
        logging.getLogger(__name__).warning(f"Unknown log level '{level}', using INFO")
    return log_file
