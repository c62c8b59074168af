import logging
import sys

from lib.common.logger import setup_logger


def test_quiet_logging_goes_to_the_file_only(tmp_path):
    log_file = setup_logger(level="debug", log_dir=str(tmp_path / "logs"), quiet=True)
    root = logging.getLogger()
    assert root.level == logging.DEBUG
    assert any(isinstance(h, logging.FileHandler) for h in root.handlers)
    assert not any(getattr(h, "stream", None) is sys.stderr for h in root.handlers)

    logging.getLogger("lib.domain.laws").info("suite started")
    for h in root.handlers:
        h.flush()
    assert "suite started" in log_file.read_text(encoding="utf-8")


def test_unknown_level_falls_back_to_info(tmp_path):
    log_file = setup_logger(level="chatty", log_dir=str(tmp_path), quiet=True)
    assert logging.getLogger().level == logging.INFO
    logging.getLogger().handlers[0].flush()
    assert "Unknown log level 'chatty'" in log_file.read_text(encoding="utf-8")
